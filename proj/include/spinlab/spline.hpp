#pragma once
// Natural cubic spline with analytic first/second derivatives.

#include <vector>

#include "spinlab/common.hpp"

namespace spinlab {

class CubicSpline {
  public:
    CubicSpline() = default;
    // Knots must be strictly increasing; natural boundary (S'' = 0 at ends).
    CubicSpline(std::vector<double> knots, std::vector<double> values);

    double value(double x) const;
    double deriv(double x) const;
    double deriv2(double x) const;

    const std::vector<double>& knots() const { return x_; }
    const std::vector<double>& values() const { return y_; }
    double lo() const { return x_.front(); }
    double hi() const { return x_.back(); }

  private:
    std::size_t segment(double x) const;

    std::vector<double> x_, y_, m_;  // m_ = second-derivative moments
};

}  // namespace spinlab
