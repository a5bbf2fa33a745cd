#include "spinlab/measure1d.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab {

namespace {

constexpr double kMaxWindowLength = 1e6;

// Doubling walk from x0 in direction dir until logdens drops below target,
// then bisection onto the crossing.  Stops at the support edge.
double find_drop(const RealFn& logdens, double x0, double dir, double target,
                 double edge) {
    double step = 0.25;
    double prev = x0;
    double x = x0;
    for (;;) {
        x = prev + dir * step;
        if ((dir > 0 && x >= edge) || (dir < 0 && x <= edge)) {
            if (!std::isfinite(edge)) throw NonIntegrable("window expansion exceeded 1e6");
            return edge;
        }
        if (std::abs(x - x0) > kMaxWindowLength)
            throw NonIntegrable("window expansion exceeded 1e6");
        const double v = logdens(x);
        if (!std::isfinite(v) || v <= target) break;
        prev = x;
        step *= 2;
    }
    double a = prev, b = x;  // logdens(a) > target >= logdens(b)
    for (int i = 0; i < 80 && std::abs(b - a) > 1e-9 * (1 + std::abs(b)); ++i) {
        const double m = 0.5 * (a + b);
        const double v = logdens(m);
        if (std::isfinite(v) && v > target)
            a = m;
        else
            b = m;
    }
    return b;
}

}  // namespace

OneDMeasure OneDMeasure::normalize(RealFn logdens, Interval support, quad::Options opt) {
    OneDMeasure mu;
    mu.logdens_ = std::move(logdens);
    mu.support_ = support;
    mu.opt_ = opt;

    // Locate the mode by scanning, widening the scan range while the max sits
    // on a free (non-wall) edge.
    double lo = std::max(support.lo, -32.0);
    double hi = std::min(support.hi, 32.0);
    if (!(lo < hi)) {
        lo = support.lo;
        hi = support.lo + 1.0;
    }
    const int scan_n = 4097;
    double best_x = lo, best_v = -kInf;
    for (int round = 0;; ++round) {
        for (int i = 0; i < scan_n; ++i) {
            const double x = lo + (hi - lo) * i / (scan_n - 1.0);
            const double v = mu.logdens_(x);
            if (std::isfinite(v) && v > best_v) {
                best_v = v;
                best_x = x;
            }
        }
        const bool at_left = best_x <= lo + (hi - lo) / (scan_n - 1.0) && support.lo < lo;
        const bool at_right = best_x >= hi - (hi - lo) / (scan_n - 1.0) && support.hi > hi;
        if (!at_left && !at_right) break;
        if (hi - lo > kMaxWindowLength) throw NonIntegrable("mode scan exceeded 1e6");
        if (at_left) lo = std::max(support.lo, lo - 4 * (hi - lo));
        if (at_right) hi = std::min(support.hi, hi + 4 * (hi - lo));
    }
    if (!std::isfinite(best_v)) throw DegenerateDensity("log-density has no finite maximum");

    // Golden-section refinement around the scanned cell.
    {
        const double cell = (hi - lo) / (scan_n - 1.0);
        double a = std::max(support.lo, best_x - cell);
        double b = std::min(support.hi, best_x + cell);
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
        double f1 = mu.logdens_(x1), f2 = mu.logdens_(x2);
        for (int i = 0; i < 60; ++i) {
            if (f1 < f2) {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = mu.logdens_(x2);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = mu.logdens_(x1);
            }
        }
        const double xm = 0.5 * (a + b);
        const double vm = mu.logdens_(xm);
        if (std::isfinite(vm) && vm > best_v) {
            best_v = vm;
            best_x = xm;
        }
    }
    mu.argmax_ = best_x;
    mu.log_max_ = best_v;

    const double target = best_v - opt.log_drop;
    const double wl = find_drop(mu.logdens_, best_x, -1.0, target, support.lo);
    const double wr = find_drop(mu.logdens_, best_x, +1.0, target, support.hi);
    mu.window_ = {wl, wr};

    // Captured by value: the table must not dangle when the measure moves.
    const RealFn ld = mu.logdens_;
    const double lm = mu.log_max_;
    auto shifted = [ld, lm](double x) { return std::exp(ld(x) - lm); };
    const auto z = quad::integrate(shifted, wl, wr, opt.abs_tol);
    if (!(z.value > 0) || !std::isfinite(z.value))
        throw DegenerateDensity("normalizer vanished");
    mu.shifted_mass_ = z.value;
    mu.log_z_ = mu.log_max_ + std::log(z.value);

    // CDF table; panel count scales with how many length scales the window spans.
    const std::size_t panels =
        std::min<std::size_t>(16384, std::max<std::size_t>(1024, static_cast<std::size_t>((wr - wl))));
    mu.cum_ = std::make_shared<quad::Cumulative>(shifted, wl, wr, panels);

    const double m1 = quad::integrate([&](double x) { return x * shifted(x); }, wl, wr,
                                      opt.abs_tol)
                          .value /
                      z.value;
    mu.mean_ = m1;
    const double v2l = quad::integrate([&](double x) { return (x - m1) * (x - m1) * shifted(x); },
                                       wl, m1, opt.abs_tol)
                           .value;
    const double v2r = quad::integrate([&](double x) { return (x - m1) * (x - m1) * shifted(x); },
                                       m1, wr, opt.abs_tol)
                           .value;
    mu.sd_ = std::sqrt((v2l + v2r) / z.value);
    return mu;
}

double OneDMeasure::density(double x) const {
    if (!support_.contains(x)) return 0.0;
    const double v = logdens_(x);
    if (!std::isfinite(v)) return 0.0;
    return std::exp(v - log_z_);
}

double OneDMeasure::log_unnormalized(double x) const { return logdens_(x); }

double OneDMeasure::integrate(const RealFn& f) const {
    auto g = [this, &f](double x) { return f(x) * std::exp(logdens_(x) - log_max_); };
    // Split at the mean: keeps kinked integrands (|x-m|^k) smooth per side.
    const double m = window_.clamp(mean_);
    const double a = quad::integrate(g, window_.lo, m, opt_.abs_tol).value;
    const double b = quad::integrate(g, m, window_.hi, opt_.abs_tol).value;
    return (a + b) / shifted_mass_;
}

Moments OneDMeasure::central_moments(int kmax) const {
    if (kmax > 8) throw Error("MomentOrder", "kmax must be <= 8");
    Moments mo;
    mo.mean = mean_;
    mo.abs_central.assign(kmax + 1, 0.0);
    mo.signed_central.assign(kmax + 1, 0.0);
    mo.abs_normalized.assign(kmax + 1, 0.0);
    mo.signed_normalized.assign(kmax + 1, 0.0);
    const double m = mean_;
    for (int k = 0; k <= kmax; ++k) {
        mo.abs_central[k] =
            integrate([m, k](double x) { return std::pow(std::abs(x - m), k); });
        mo.signed_central[k] = integrate([m, k](double x) { return std::pow(x - m, k); });
        if (!std::isfinite(mo.abs_central[k]))
            throw NonIntegrable("moment of order " + std::to_string(k));
    }
    mo.variance = mo.signed_central.size() > 2 ? mo.signed_central[2] : sd_ * sd_;
    mo.sd = std::sqrt(mo.variance);
    for (int k = 0; k <= kmax; ++k) {
        const double sk = std::pow(mo.sd, k);
        mo.abs_normalized[k] = mo.abs_central[k] / sk;
        mo.signed_normalized[k] = mo.signed_central[k] / sk;
    }
    return mo;
}

double OneDMeasure::cdf(double x) const {
    if (x <= window_.lo) return 0.0;
    if (x >= window_.hi) return 1.0;
    // Use whichever tail is smaller, then complement.
    if (x - window_.lo <= window_.hi - x) return cum_->prefix(x) / cum_->total();
    return 1.0 - cum_->suffix(x) / cum_->total();
}

double OneDMeasure::ccdf(double x) const {
    if (x <= window_.lo) return 1.0;
    if (x >= window_.hi) return 0.0;
    if (x - window_.lo <= window_.hi - x) return 1.0 - cum_->prefix(x) / cum_->total();
    return cum_->suffix(x) / cum_->total();
}

std::complex<double> OneDMeasure::integrate_complex(
    const std::function<std::complex<double>(double)>& f, double freq) const {
    auto g = [this, &f](double x) -> std::complex<double> {
        return f(x) * std::exp(logdens_(x) - log_max_);
    };
    // Panels must also resolve the density's own length scale, not just the
    // oscillation of f.
    const double max_panel = std::max(sd_ / 2.0, window_.length() / 4096.0);
    return quad::oscillatory(g, window_.lo, window_.hi, freq, 10'000'000, max_panel) /
           shifted_mass_;
}

std::complex<double> OneDMeasure::char_fn(double xi) const {
    if (std::abs(xi) > 1e4) throw Error("FrequencyRange", "|xi| must be <= 1e4");
    if (xi == 0.0) return {1.0, 0.0};
    return integrate_complex(
        [xi](double x) {
            return std::complex<double>(std::cos(x * xi), std::sin(x * xi));
        },
        xi);
}

}  // namespace spinlab
