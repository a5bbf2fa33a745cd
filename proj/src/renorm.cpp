#include "spinlab/renorm.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab {

namespace {

// z-interval on which both psi(y+z) and psi(y-z) stay inside psi_window.
Interval fiber_domain(Interval psi_window, double y) {
    const double lo = std::max(psi_window.lo - y, y - psi_window.hi);
    const double hi = std::min(psi_window.hi - y, y - psi_window.lo);
    return {lo, hi};
}

OneDMeasure fiber_measure(const RealFn& psi, Interval psi_window, double y,
                          quad::Options opt) {
    Interval dom = fiber_domain(psi_window, y);
    if (!(dom.lo < dom.hi))
        throw WindowExhausted("fiber domain empty at y=" + std::to_string(y));
    auto logdens = [&psi, y](double z) { return -psi(y + z) - psi(y - z); };
    return OneDMeasure::normalize(logdens, dom, opt);
}

TabulatedPotential tabulate(const RealFn& psi, Interval psi_window, Interval window,
                            int n, int generation, quad::Options opt) {
    if (n < 129) throw Error("GridTooCoarse", "renormalize needs n >= 129 knots");
    if (!(window.lo >= psi_window.lo && window.hi <= psi_window.hi))
        throw WindowExhausted("requested window exceeds the parent's window");

    // Fiber length scale at the window center, for the margin sizing.
    const double mid = 0.5 * (window.lo + window.hi);
    const double s = fiber_measure(psi, psi_window, mid, opt).sd();

    // Knots extend past the reliable window so natural-boundary artifacts of
    // the spline stay outside it, and so the next generation's edge knots can
    // integrate over a decayed fiber (3s shrink + 3s margin = 6s of z-room).
    const double h = window.length() / (n - 1.0);
    const double margin_target = std::max(3.0 * s, 12 * h);
    const int extra = static_cast<int>(std::ceil(margin_target / h));
    const double span_lo = std::max(psi_window.lo, window.lo - extra * h);
    const double span_hi = std::min(psi_window.hi, window.hi + extra * h);
    const int n_lo = static_cast<int>(std::round((window.lo - span_lo) / h));
    const int n_hi = static_cast<int>(std::round((span_hi - window.hi) / h));
    const int total = n + n_lo + n_hi;

    std::vector<double> knots(total), values(total);
    for (int i = 0; i < total; ++i) knots[i] = window.lo + (i - n_lo) * h;
    knots[n_lo] = window.lo;
    knots[n_lo + n - 1] = window.hi;
    parallel_for(static_cast<std::size_t>(total), [&](std::size_t i) {
        values[i] = -fiber_measure(psi, psi_window, knots[i], opt).log_normalizer();
    });
    CubicSpline spline(std::move(knots), std::move(values));

    // The table's own fiber scale (its z-distribution when it becomes a
    // parent), not the parent's: this drives the shrink rule in iterate().
    const CubicSpline& ref = spline;
    auto own_psi = [&ref](double x) { return ref.value(x); };
    const double own_s =
        fiber_measure(own_psi, {ref.lo(), ref.hi()}, mid, opt).sd();
    return TabulatedPotential(std::move(spline), window, generation, own_s);
}

}  // namespace

TabulatedPotential::TabulatedPotential(CubicSpline spline, Interval window,
                                       int generation, double fiber_sd)
    : spline_(std::move(spline)), window_(window), generation_(generation),
      fiber_sd_(fiber_sd) {}

double TabulatedPotential::value(double y) const {
    if (!window_.contains(y))
        throw OutOfSupport("table query outside reliable window");
    return spline_.value(y);
}

double TabulatedPotential::d1(double y) const {
    if (!window_.contains(y))
        throw OutOfSupport("table query outside reliable window");
    return spline_.deriv(y);
}

double TabulatedPotential::d2(double y) const {
    if (!window_.contains(y))
        throw OutOfSupport("table query outside reliable window");
    return spline_.deriv2(y);
}

double renorm_value(const RealFn& psi, Interval psi_window, double y,
                    quad::Options opt) {
    return -fiber_measure(psi, psi_window, y, opt).log_normalizer();
}

TabulatedPotential renormalize(const PotentialSpec& p, Interval window, int n,
                               quad::Options opt) {
    if (!p.admissible)
        throw NonAdmissible(p.label + " is not in the perturbed strictly convex class");
    auto psi = [&p](double x) { return p.psi(x); };
    return tabulate(psi, p.support, window, n, 1, opt);
}

TabulatedPotential renormalize(const TabulatedPotential& parent, Interval window,
                               int n, quad::Options opt) {
    // The parent spline is only trusted on its own knot span.
    Interval span{parent.spline().lo(), parent.spline().hi()};
    auto psi = [&parent](double x) { return parent.spline().value(x); };
    return tabulate(psi, span, window, n, parent.generation() + 1, opt);
}

std::vector<TabulatedPotential> iterate(const PotentialSpec& p, int M, Interval window,
                                        int n, quad::Options opt) {
    if (M < 1 || M > 8) throw Error("IterationBudget", "M must be in [1, 8]");
    std::vector<TabulatedPotential> gens;
    gens.reserve(M);
    gens.push_back(renormalize(p, window, n, opt));
    for (int k = 1; k < M; ++k) {
        const TabulatedPotential& prev = gens.back();
        const double shrink = 3.0 * prev.fiber_sd();
        Interval next{prev.window().lo + shrink, prev.window().hi - shrink};
        if (next.length() < 4.0)
            throw WindowExhausted("reliable window below 4 units at generation " +
                                  std::to_string(k + 1));
        gens.push_back(renormalize(prev, next, n, opt));
    }
    return gens;
}

RenormSplitting renorm_splitting(const PotentialSpec& p, Interval window, int n,
                                 quad::Options opt) {
    if (!p.admissible)
        throw NonAdmissible(p.label + " is not in the perturbed strictly convex class");
    if (n < 129) throw Error("GridTooCoarse", "renorm_splitting needs n >= 129");

    std::vector<double> knots(n), conv(n), pert(n);
    for (int i = 0; i < n; ++i)
        knots[i] = window.lo + window.length() * i / (n - 1.0);
    auto psi = [&p](double x) { return p.psi(x); };
    auto psi_c = [&p](double x) { return p.convex(x); };
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const double half_r = 0.5 * renorm_value(psi, p.support, knots[i], opt);
        conv[i] = 0.5 * renorm_value(psi_c, p.support, knots[i], opt);
        pert[i] = half_r - conv[i];
    });
    RenormSplitting out;
    out.convex_part_tab = CubicSpline(knots, conv);
    out.perturbation_tab = CubicSpline(knots, pert);
    double b0 = 0, b1 = 0;
    const int scan = 4096;
    for (int i = 0; i <= scan; ++i) {
        const double y = window.lo + window.length() * i / static_cast<double>(scan);
        b0 = std::max(b0, std::abs(out.perturbation_tab.value(y)));
        b1 = std::max(b1, std::abs(out.perturbation_tab.deriv(y)));
    }
    out.sup_abs_perturbation = b0;
    out.sup_abs_perturbation_d1 = b1;
    return out;
}

ConvexityReport convexity_report(const TabulatedPotential& t, Interval window) {
    if (!(window.lo >= t.window().lo && window.hi <= t.window().hi))
        throw WindowExhausted("convexity window exceeds the reliable window");
    const int scan = 2048;
    double best_y = window.lo, best = kInf;
    for (int i = 0; i <= scan; ++i) {
        const double y = window.lo + window.length() * i / static_cast<double>(scan);
        const double v = t.spline().deriv2(y);
        if (v < best) {
            best = v;
            best_y = y;
        }
    }
    // Golden refinement inside the bracketing cells.
    const double cell = window.length() / scan;
    double a = std::max(window.lo, best_y - cell);
    double b = std::min(window.hi, best_y + cell);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = t.spline().deriv2(x1), f2 = t.spline().deriv2(x2);
    for (int i = 0; i < 50; ++i) {
        if (f1 > f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = t.spline().deriv2(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = t.spline().deriv2(x1);
        }
    }
    const double ym = 0.5 * (a + b);
    const double vm = t.spline().deriv2(ym);
    if (vm < best) {
        best = vm;
        best_y = ym;
    }
    return {best, best_y, best > 0};
}

}  // namespace spinlab
