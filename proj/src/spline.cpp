#include "spinlab/spline.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab {

CubicSpline::CubicSpline(std::vector<double> knots, std::vector<double> values)
    : x_(std::move(knots)), y_(std::move(values)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw Error("SplineInput", "need >= 3 strictly increasing knots with matching values");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x_[i] < x_[i + 1]))
            throw Error("SplineInput", "knots not strictly increasing");

    // Thomas solve for the natural-boundary moment system.
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x_[i] - x_[i - 1];
        const double hr = x_[i + 1] - x_[i];
        diag[i] = (hl + hr) / 3.0;
        upper[i] = hr / 6.0;
        rhs[i] = (y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl;
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
        const double lower = (x_[i] - x_[i - 1]) / 6.0;
        const double w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
        if (i == 1) break;
    }
}

std::size_t CubicSpline::segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(1, it - x_.begin())) - 1;
    return std::min(i, x_.size() - 2);
}

double CubicSpline::value(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x, b = x - x_[i];
    return m_[i] * a * a * a / (6 * h) + m_[i + 1] * b * b * b / (6 * h) +
           (y_[i] / h - m_[i] * h / 6) * a + (y_[i + 1] / h - m_[i + 1] * h / 6) * b;
}

double CubicSpline::deriv(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - x, b = x - x_[i];
    return -m_[i] * a * a / (2 * h) + m_[i + 1] * b * b / (2 * h) +
           (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6;
}

double CubicSpline::deriv2(double x) const {
    const std::size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
}

}  // namespace spinlab
