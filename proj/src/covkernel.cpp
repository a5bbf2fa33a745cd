#include "spinlab/covkernel.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab {

namespace {

constexpr std::size_t kPanels = 1024;

}  // namespace

KernelMeasure make_kernel_measure(OneDMeasure mu, RealFn h_dd) {
    return {std::move(mu), std::move(h_dd)};
}

KernelMeasure kernel_measure_of(const PotentialSpec& p, double sigma,
                                quad::Options opt) {
    auto logdens = [p, sigma](double x) { return sigma * x - p.psi(x); };
    OneDMeasure mu = OneDMeasure::normalize(logdens, p.support, opt);
    // Tilting is linear in x, so H'' is psi'' regardless of sigma.
    RealFn h_dd = [p](double x) { return eval(p, x).d2; };
    return {std::move(mu), std::move(h_dd)};
}

double kernel_eval(const KernelMeasure& km, double x, double y) {
    const double a = std::min(x, y), b = std::max(x, y);
    return km.measure.cdf(a) * km.measure.ccdf(b);
}

double covariance_kernel(const KernelMeasure& km, const Fn1& f, const Fn1& g) {
    const Interval w = km.measure.truncation_window();
    // Integral of f'(x) K(x,y) g'(y) collapses to one pass over x with
    // cumulative y-integrals:
    //   (1-M)(x) * Int_{y<x} M g' dy  +  M(x) * Int_{y>x} (1-M) g' dy.
    quad::Cumulative left([&](double y) { return km.measure.cdf(y) * g.d1(y); },
                          w.lo, w.hi, kPanels);
    quad::Cumulative right([&](double y) { return km.measure.ccdf(y) * g.d1(y); },
                           w.lo, w.hi, kPanels);
    auto outer = [&](double x) {
        return f.d1(x) * (km.measure.ccdf(x) * left.prefix(x) +
                          km.measure.cdf(x) * right.suffix(x));
    };
    return quad::composite(outer, w.lo, w.hi, kPanels);
}

double covariance_direct(const OneDMeasure& mu, const Fn1& f, const Fn1& g) {
    const double mf = mu.integrate(f.value);
    const double mg = mu.integrate(g.value);
    if (!std::isfinite(mf) || !std::isfinite(mg))
        throw NonIntegrable("covariance_direct: nonintegrable factor");
    return mu.integrate([&](double x) { return (f.value(x) - mf) * (g.value(x) - mg); });
}

double kernel_identity_residual(const KernelMeasure& km) {
    const Interval w = km.measure.truncation_window();
    quad::Cumulative left([&](double y) { return km.measure.cdf(y) * km.hamiltonian_dd(y); },
                          w.lo, w.hi, kPanels);
    quad::Cumulative right(
        [&](double y) { return km.measure.ccdf(y) * km.hamiltonian_dd(y); }, w.lo, w.hi,
        kPanels);
    double max_dens = 0;
    for (int i = 0; i <= 512; ++i)
        max_dens = std::max(max_dens,
                            km.measure.density(w.lo + w.length() * i / 512.0));
    double worst = 0;
    // Probes stay slightly inside the window, where the truncated tails of
    // the y-integral are negligible.
    for (int i = 0; i < 64; ++i) {
        const double x = w.lo + w.length() * (0.02 + 0.96 * i / 63.0);
        const double lhs =
            km.measure.ccdf(x) * left.prefix(x) + km.measure.cdf(x) * right.suffix(x);
        worst = std::max(worst, std::abs(lhs - km.measure.density(x)));
    }
    return worst / max_dens;
}

BlVerdict asymmetric_bl_check(const PotentialSpec& p, double sigma, const Fn1& f,
                              const Fn1& g, quad::Options opt) {
    if (!p.admissible)
        throw NonAdmissible(p.label + " outside the perturbed strictly convex class");
    KernelMeasure km = kernel_measure_of(p, sigma, opt);
    const Interval w = km.measure.truncation_window();
    const SplittingReport split = validate_splitting(p, w, 2048);

    double sup_ratio = 0;
    for (int i = 0; i <= 2048; ++i) {
        const double x = w.lo + w.length() * i / 2048.0;
        sup_ratio = std::max(sup_ratio, std::abs(g.d1(x)) / p.convex_d2(x));
    }
    const double int_abs_f1 =
        km.measure.integrate([&](double x) { return std::abs(f.d1(x)); });

    BlVerdict v;
    v.lhs = std::abs(covariance_direct(km.measure, f, g));
    v.rhs = std::exp(3.0 * split.osc_delta) * sup_ratio * int_abs_f1;
    v.holds = v.lhs <= v.rhs * (1 + 1e-9);
    return v;
}

ClassicalBlVerdict classical_bl_check(const KernelMeasure& km, const Fn1& f) {
    const Interval w = km.measure.truncation_window();
    for (int i = 0; i <= 2048; ++i) {
        const double x = w.lo + w.length() * i / 2048.0;
        if (!(km.hamiltonian_dd(x) > 0))
            throw NonConvexHamiltonian("H'' <= 0 at x=" + std::to_string(x));
    }
    ClassicalBlVerdict v;
    v.var = covariance_direct(km.measure, f, f);
    v.bl_bound = km.measure.integrate(
        [&](double x) { return f.d1(x) * f.d1(x) / km.hamiltonian_dd(x); });
    v.holds = v.var <= v.bl_bound * (1 + 1e-9);
    return v;
}

CkpVerdict ckp_check(const OneDMeasure& mu, const RealFn& f) {
    const Interval w = mu.truncation_window();
    for (int i = 0; i <= 1024; ++i) {
        const double x = w.lo + w.length() * i / 1024.0;
        if (f(x) < 0) throw NegativeFunction("ckp_check needs f >= 0");
    }
    const double fbar = mu.integrate(f);
    if (!(fbar > 0)) throw NegativeFunction("ckp_check needs Integral f > 0");
    CkpVerdict v;
    v.l1 = mu.integrate([&](double x) { return std::abs(f(x) - fbar); });
    const double kl = mu.integrate([&](double x) {
        const double r = f(x) / fbar;
        return r > 0 ? r * std::log(r) : 0.0;
    });
    v.entropy_bound = fbar * std::sqrt(2.0 * std::max(kl, 0.0));
    v.holds = v.l1 <= v.entropy_bound * (1 + 1e-9);
    return v;
}

}  // namespace spinlab
