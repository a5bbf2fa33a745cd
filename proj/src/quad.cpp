#include "spinlab/quad.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab::quad {

namespace {

// Gauss-Kronrod 7-15 abscissae/weights (positive half, QUADPACK values).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename T, typename F>
void gk15_panel(const F& f, double a, double b, T& kron, T& gauss) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T resk = kWgk[7] * f(c);
    T resg = kWg[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const T fsum = f(c - dx) + f(c + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    kron = resk * h;
    gauss = resg * h;
}

struct Panel {
    double a, b, value, error;
};

}  // namespace

Result gk15(const std::function<double(double)>& f, double a, double b) {
    double k = 0, g = 0;
    gk15_panel(f, a, b, k, g);
    return {k, std::abs(k - g), 15};
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
    Result total{0, 0, 0};
    std::vector<std::pair<Panel, int>> stack;
    {
        Result r = gk15(f, a, b);
        stack.push_back({{a, b, r.value, r.error}, 0});
        total.evals += r.evals;
    }
    while (!stack.empty()) {
        auto [p, depth] = stack.back();
        stack.pop_back();
        // Per-panel tolerance proportional to length keeps the global error
        // below abs_tol without tracking a shared budget.
        const double local_tol = abs_tol * std::max((p.b - p.a) / (b - a), 1e-300);
        if (p.error <= local_tol || depth >= max_depth) {
            total.value += p.value;
            total.error += p.error;
            continue;
        }
        const double m = 0.5 * (p.a + p.b);
        Result l = gk15(f, p.a, m);
        Result r = gk15(f, m, p.b);
        total.evals += 30;
        stack.push_back({{p.a, m, l.value, l.error}, depth + 1});
        stack.push_back({{m, p.b, r.value, r.error}, depth + 1});
    }
    return total;
}

double composite(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels) {
    if (panels == 0) panels = 1;
    const double h = (b - a) / static_cast<double>(panels);
    double acc = 0;
    for (std::size_t i = 0; i < panels; ++i) {
        double k = 0, g = 0;
        gk15_panel(f, a + h * static_cast<double>(i), a + h * static_cast<double>(i + 1), k, g);
        acc += k;
    }
    return acc;
}

std::complex<double> oscillatory(const std::function<std::complex<double>(double)>& f,
                                 double a, double b, double freq,
                                 std::size_t panel_budget, double max_panel) {
    double width = b - a;
    double cap = std::abs(freq) > 0 ? kPi / (4.0 * std::abs(freq)) : width;
    cap = std::min({cap, width, max_panel});
    const double needed = width / std::max(cap, 1e-300);
    if (needed > static_cast<double>(panel_budget))
        throw OscillationBudgetExceeded("oscillatory quadrature needs " +
                                        std::to_string(needed) + " panels");
    const std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(needed)));
    const double h = width / static_cast<double>(panels);
    std::complex<double> acc = 0;
    for (std::size_t i = 0; i < panels; ++i) {
        std::complex<double> k = 0, g = 0;
        gk15_panel(f, a + h * static_cast<double>(i), a + h * static_cast<double>(i + 1), k, g);
        acc += k;
    }
    return acc;
}

void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

Cumulative::Cumulative(std::function<double(double)> f, double a, double b,
                       std::size_t panels)
    : f_(std::move(f)), a_(a), b_(b) {
    panels = std::max<std::size_t>(panels, 8);
    h_ = (b - a) / static_cast<double>(panels);
    std::vector<double> cell(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        double k = 0, g = 0;
        gk15_panel(f_, a_ + h_ * static_cast<double>(i), a_ + h_ * static_cast<double>(i + 1), k, g);
        cell[i] = k;
    }
    left_.assign(panels + 1, 0.0);
    right_.assign(panels + 1, 0.0);
    for (std::size_t i = 0; i < panels; ++i) left_[i + 1] = left_[i] + cell[i];
    for (std::size_t i = panels; i-- > 0;) right_[i] = right_[i + 1] + cell[i];
    total_ = left_[panels];
}

double Cumulative::prefix(double x) const {
    if (x <= a_) return 0.0;
    if (x >= b_) return total_;
    auto idx = static_cast<std::size_t>((x - a_) / h_);
    idx = std::min(idx, left_.size() - 2);
    const double x0 = a_ + h_ * static_cast<double>(idx);
    double k = 0, g = 0;
    if (x > x0) gk15_panel(f_, x0, x, k, g);
    return left_[idx] + k;
}

double Cumulative::suffix(double x) const {
    if (x <= a_) return total_;
    if (x >= b_) return 0.0;
    auto idx = static_cast<std::size_t>((x - a_) / h_);
    idx = std::min(idx, right_.size() - 2);
    const double x1 = a_ + h_ * static_cast<double>(idx + 1);
    double k = 0, g = 0;
    if (x1 > x) gk15_panel(f_, x, x1, k, g);
    return right_[idx + 1] + k;
}

}  // namespace spinlab::quad
