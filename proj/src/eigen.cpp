#include "spinlab/eigen.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab {

std::vector<double> symtri_eigenvalues(std::vector<double> d, std::vector<double> e) {
    const std::size_t n = d.size();
    if (n == 0) return {};
    if (e.size() + 1 != n) throw Error("EigenInput", "off-diagonal size mismatch");
    e.push_back(0.0);
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        for (;;) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 + 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > 64) throw EigensolveFailure("tridiagonal QL stalled");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
            double s = 1.0, c = 1.0, p = 0.0;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (i == l) {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
            if (e[m] != 0.0 && m > l) continue;
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

namespace {

// Bottom component of the unit eigenvector of the tridiagonal (alpha, beta)
// for the eigenvalue theta, by inverse iteration with an off-singular shift.
double ritz_bottom_component(const std::vector<double>& alpha,
                             const std::vector<double>& beta, double theta) {
    const std::size_t k = alpha.size();
    std::vector<double> y(k, 1.0);
    const double shift = theta - std::max(std::abs(theta), 1.0) * 1e-10;
    for (int pass = 0; pass < 3; ++pass) {
        // Thomas solve of (T - shift I) x = y.
        std::vector<double> d(k), rhs(y);
        for (std::size_t i = 0; i < k; ++i) d[i] = alpha[i] - shift;
        for (std::size_t i = 1; i < k; ++i) {
            const double denom = d[i - 1] == 0 ? 1e-300 : d[i - 1];
            const double w = beta[i - 1] / denom;
            d[i] -= w * beta[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        y[k - 1] = rhs[k - 1] / (d[k - 1] == 0 ? 1e-300 : d[k - 1]);
        for (std::size_t i = k - 1; i-- > 0;)
            y[i] = (rhs[i] - beta[i] * y[i + 1]) / (d[i] == 0 ? 1e-300 : d[i]);
        double nrm = 0;
        for (double v : y) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 0) || !std::isfinite(nrm)) return 1.0;
        for (double& v : y) v /= nrm;
    }
    return std::abs(y[k - 1]);
}

}  // namespace

LanczosResult lanczos_smallest(const LinOp& op, const std::vector<double>& null_unit,
                               int max_iter, double rel_tol, unsigned seed) {
    const std::size_t n = op.n;
    max_iter = std::min<int>(max_iter, static_cast<int>(n) - 1);
    if (max_iter < 1) throw EigensolveFailure("operator too small for Lanczos");

    auto dotv = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;

    // Deterministic pseudo-random start, deflated against the null vector.
    std::vector<double> v(n);
    std::uint64_t state = seed * 6364136223846793005ull + 1442695040888963407ull;
    for (std::size_t i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        v[i] = static_cast<double>((state >> 11) & 0xfffffffull) / double(0xfffffffull) - 0.5;
    }
    {
        const double c = dotv(v, null_unit);
        for (std::size_t i = 0; i < n; ++i) v[i] -= c * null_unit[i];
        const double nv = std::sqrt(dotv(v, v));
        for (std::size_t i = 0; i < n; ++i) v[i] /= nv;
    }
    basis.push_back(v);

    std::vector<double> w(n);
    double theta_prev = kInf;
    int stagnant = 0;
    LanczosResult res;
    for (int k = 0; k < max_iter; ++k) {
        op.apply(basis.back(), w);
        const double a = dotv(w, basis.back());
        alpha.push_back(a);
        for (std::size_t i = 0; i < n; ++i) w[i] -= a * basis.back()[i];
        if (k > 0)
            for (std::size_t i = 0; i < n; ++i) w[i] -= beta.back() * basis[basis.size() - 2][i];
        // Full reorthogonalization, including the deflated null direction.
        for (int pass = 0; pass < 2; ++pass) {
            const double cn = dotv(w, null_unit);
            for (std::size_t i = 0; i < n; ++i) w[i] -= cn * null_unit[i];
            for (const auto& b : basis) {
                const double c = dotv(w, b);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
            }
        }
        const double b = std::sqrt(dotv(w, w));
        res.iterations = k + 1;

        const bool check_now = b < 1e-14 || k >= 8;
        if (check_now) {
            std::vector<double> off(beta);
            const auto ev = symtri_eigenvalues(alpha, off);
            res.lambda_min = ev.front();
            res.lambda_max = ev.back();
            if (b < 1e-14) return res;  // invariant subspace found
            // Ritz residual ||B y - theta y|| = beta_k |s_k|; 1e-8 of the
            // spectral scale is the convergence target.
            const double resid = b * ritz_bottom_component(alpha, beta, res.lambda_min);
            if (resid <= 1e-8 * std::max(res.lambda_max, 1e-300)) return res;
            const double rel = std::abs(res.lambda_min - theta_prev) /
                               std::max(std::abs(res.lambda_min), 1e-300);
            stagnant = rel < rel_tol ? stagnant + 1 : 0;
            theta_prev = res.lambda_min;
            if (stagnant >= 4) return res;
        }
        beta.push_back(b);
        for (std::size_t i = 0; i < n; ++i) w[i] /= b;
        basis.push_back(w);
    }
    if (stagnant >= 1) return res;  // converged in value, not yet 4 checks
    throw EigensolveFailure("Lanczos did not stagnate within the iteration cap");
}

}  // namespace spinlab
