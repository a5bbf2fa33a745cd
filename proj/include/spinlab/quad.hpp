#pragma once
// One-dimensional quadrature: adaptive Gauss-Kronrod panels, composite rules,
// cumulative integrals with cancellation-safe tails, oscillatory integrals
// with quarter-period panel capping.

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "spinlab/common.hpp"

namespace spinlab::quad {

struct Options {
    double abs_tol = 1e-12;   // absolute tolerance on the (shifted) integrand
    double log_drop = 40.0;   // window rule: integrate where logdens > max - log_drop
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};

// Single Gauss-Kronrod 7-15 panel; error from the Gauss/Kronrod discrepancy.
Result gk15(const std::function<double(double)>& f, double a, double b);

// Adaptive bisection until the summed panel error meets abs_tol.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 52);

// Fixed composite Kronrod-15 rule over n equal panels, summed left to right.
double composite(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels);

// Complex integrand whose oscillation frequency (radians per unit length) is
// known; panel width is capped at a quarter period and additionally at
// max_panel (the integrand's own length scale).  Throws
// OscillationBudgetExceeded if more than panel_budget panels are required.
std::complex<double> oscillatory(const std::function<std::complex<double>(double)>& f,
                                 double a, double b, double freq,
                                 std::size_t panel_budget = 10'000'000,
                                 double max_panel = kInf);

// Gauss-Legendre nodes and weights on [-1, 1] (Newton on the Legendre
// recurrence), for tensorized grids.
void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                    std::vector<double>& weights);

// Prefix/suffix integrals of f over [a,b] on a fixed panel partition.
// prefix(x) accumulates from the left, suffix(x) from the right, so whichever
// tail is small is computed without cancellation.
class Cumulative {
  public:
    Cumulative(std::function<double(double)> f, double a, double b, std::size_t panels);

    double prefix(double x) const;
    double suffix(double x) const;
    double total() const { return total_; }
    double lo() const { return a_; }
    double hi() const { return b_; }

  private:
    std::function<double(double)> f_;
    double a_, b_, h_;
    std::vector<double> left_;   // left_[i]  = integral over [a, a+i*h]
    std::vector<double> right_;  // right_[i] = integral over [a+i*h, b]
    double total_;
};

}  // namespace spinlab::quad
