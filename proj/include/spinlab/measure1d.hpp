#pragma once
// One-dimensional Gibbs measures exp(logdens)/Z over the (possibly truncated)
// real line: normalizers, moments, CDFs and characteristic functions, all
// stabilized by max-shifted log-domain arithmetic.

#include <complex>
#include <memory>
#include <vector>

#include "spinlab/common.hpp"
#include "spinlab/potential.hpp"
#include "spinlab/quad.hpp"

namespace spinlab {

struct Moments {
    double mean = 0;
    double variance = 0;
    double sd = 0;
    // Index k in [0, kmax]; signed_central[1] ~ 0 by construction.
    std::vector<double> abs_central;
    std::vector<double> signed_central;
    std::vector<double> abs_normalized;     // <|x-m|^k>/s^k
    std::vector<double> signed_normalized;  // <(x-m)^k>/s^k
};

class OneDMeasure {
  public:
    // Finds the truncation window (log-density drop of opt.log_drop below its
    // max), then computes log Z by adaptive quadrature of the shifted density.
    static OneDMeasure normalize(RealFn logdens, Interval support = Interval::whole(),
                                 quad::Options opt = {});

    double log_normalizer() const { return log_z_; }
    Interval truncation_window() const { return window_; }
    Interval support() const { return support_; }

    // Normalized density; zero outside the support.
    double density(double x) const;
    double log_unnormalized(double x) const;

    Moments central_moments(int kmax) const;
    double mean() const { return mean_; }
    double sd() const { return sd_; }

    // M(x) = mu((-inf, x)), clamped to [0,1]; the complementary tail is
    // accumulated from the right so neither tail suffers cancellation.
    double cdf(double x) const;
    double ccdf(double x) const;

    // <exp(i x xi)> with quarter-period oscillation capping.
    std::complex<double> char_fn(double xi) const;

    // Integrals against the normalized measure.
    double integrate(const RealFn& f) const;
    std::complex<double> integrate_complex(
        const std::function<std::complex<double>(double)>& f, double freq = 0) const;

  private:
    RealFn logdens_;
    Interval support_;
    Interval window_;
    double log_max_ = 0;    // max of logdens over the window
    double argmax_ = 0;
    double shifted_mass_ = 1;  // integral of exp(logdens - log_max) over window
    double log_z_ = 0;
    double mean_ = 0, sd_ = 1;
    std::shared_ptr<quad::Cumulative> cum_;  // of the shifted density
    quad::Options opt_;
};

}  // namespace spinlab
