#include "spinlab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "spinlab/eigen.hpp"

namespace spinlab {

GeneratorGrid::GeneratorGrid(const CanonicalEnsemble& e, double spacing,
                             double box_offset) {
    const int dim = e.dim();
    counts_.resize(static_cast<std::size_t>(dim));
    h_.resize(static_cast<std::size_t>(dim));
    std::vector<Interval> boxes(e.box());
    for (auto& b : boxes) {
        b.lo += box_offset;
        b.hi += box_offset;
    }
    std::size_t total = 1;
    for (int j = 0; j < dim; ++j) {
        const Interval b = boxes[static_cast<std::size_t>(j)];
        auto n = static_cast<std::size_t>(std::max(3.0, std::round(b.length() / spacing)));
        counts_[static_cast<std::size_t>(j)] = n;
        h_[static_cast<std::size_t>(j)] = b.length() / static_cast<double>(n);
        total *= n;
    }
    if (total > 200000) throw GridBudgetExceeded("generator grid too large");

    // Cell-centered nodes; log-density evaluated once per node and per edge
    // midpoint, shifted by the grid max.
    auto node_u = [&](std::size_t flat) {
        Point u(static_cast<std::size_t>(dim));
        std::size_t rest = flat;
        for (int j = dim - 1; j >= 0; --j) {
            const std::size_t k = rest % counts_[static_cast<std::size_t>(j)];
            rest /= counts_[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(j)] =
                boxes[static_cast<std::size_t>(j)].lo +
                (static_cast<double>(k) + 0.5) * h_[static_cast<std::size_t>(j)];
        }
        return u;
    };

    std::vector<double> logdens(total);
    parallel_for(total, [&](std::size_t flat) { logdens[flat] = e.log_density_u(node_u(flat)); });
    double shift = -kInf;
    for (double v : logdens) shift = std::max(shift, v);
    if (!std::isfinite(shift)) throw DegenerateDensity("generator grid carries no mass");

    // Mask nodes far below the truncation level.  Box corners can sit
    // log_drop-per-axis below the mode; their vanishing masses blow up the
    // symmetrized spectrum without carrying any probability.  The cut sits
    // 12 below the window drop, so no-flux at the mask is still exact to
    // ~exp(-52).
    constexpr double kMaskDrop = 52.0;
    std::vector<std::uint32_t> kept(total, UINT32_MAX);
    std::size_t n_kept = 0;
    for (std::size_t i = 0; i < total; ++i)
        if (std::isfinite(logdens[i]) && logdens[i] >= shift - kMaskDrop)
            kept[i] = static_cast<std::uint32_t>(n_kept++);
    if (n_kept < 3) throw DegenerateDensity("generator mask removed the grid");

    mass_.assign(n_kept, 0.0);
    inv_sqrt_mass_.assign(n_kept, 0.0);
    for (std::size_t i = 0; i < total; ++i) {
        if (kept[i] == UINT32_MAX) continue;
        mass_[kept[i]] = std::exp(logdens[i] - shift);
        inv_sqrt_mass_[kept[i]] = 1.0 / std::sqrt(mass_[kept[i]]);
    }

    // Edges along each axis between adjacent kept nodes.
    std::vector<std::size_t> stride(static_cast<std::size_t>(dim), 1);
    for (int j = dim - 2; j >= 0; --j)
        stride[static_cast<std::size_t>(j)] =
            stride[static_cast<std::size_t>(j + 1)] * counts_[static_cast<std::size_t>(j + 1)];
    for (int j = 0; j < dim; ++j) {
        const double inv_h2 =
            1.0 / (h_[static_cast<std::size_t>(j)] * h_[static_cast<std::size_t>(j)]);
        for (std::size_t flat = 0; flat < total; ++flat) {
            // Index along axis j.
            const std::size_t k =
                (flat / stride[static_cast<std::size_t>(j)]) % counts_[static_cast<std::size_t>(j)];
            if (k + 1 >= counts_[static_cast<std::size_t>(j)]) continue;
            const std::size_t nb = flat + stride[static_cast<std::size_t>(j)];
            if (kept[flat] == UINT32_MAX || kept[nb] == UINT32_MAX) continue;
            Point u = node_u(flat);
            u[static_cast<std::size_t>(j)] += 0.5 * h_[static_cast<std::size_t>(j)];
            const double lm = e.log_density_u(u);
            if (!std::isfinite(lm)) continue;
            edges_.push_back({kept[flat], kept[nb], std::exp(lm - shift) * inv_h2});
        }
    }
}

void GeneratorGrid::matvec(const std::vector<double>& f, std::vector<double>& out) const {
    out.assign(f.size(), 0.0);
    for (const Edge& e : edges_) {
        const double fu = f[e.u] * inv_sqrt_mass_[e.u];
        const double fv = f[e.v] * inv_sqrt_mass_[e.v];
        const double flux = e.w * (fu - fv);
        out[e.u] += flux * inv_sqrt_mass_[e.u];
        out[e.v] -= flux * inv_sqrt_mass_[e.v];
    }
}

double GeneratorGrid::dirichlet(const std::vector<double>& f) const {
    double acc = 0;
    for (const Edge& e : edges_) {
        const double d = f[e.u] - f[e.v];
        acc += e.w * d * d;
    }
    double z = 0;
    for (double m : mass_) z += m;
    return acc / z;
}

double GeneratorGrid::variance(const std::vector<double>& f) const {
    double z = 0, s1 = 0, s2 = 0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        z += mass_[i];
        s1 += mass_[i] * f[i];
        s2 += mass_[i] * f[i] * f[i];
    }
    return s2 / z - (s1 / z) * (s1 / z);
}

double GeneratorGrid::solve_gap(double* lambda0_residual, double* lambda_max) const {
    const std::size_t n = mass_.size();
    // u0 = sqrt(mass), normalized: the exact constant mode of B.
    std::vector<double> u0(n);
    double nrm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        u0[i] = std::sqrt(mass_[i]);
        nrm += mass_[i];
    }
    nrm = std::sqrt(nrm);
    for (double& v : u0) v /= nrm;

    if (lambda0_residual) {
        std::vector<double> r;
        matvec(u0, r);
        double s = 0;
        for (double v : r) s += v * v;
        *lambda0_residual = std::sqrt(s);
    }

    if (dim() == 1 && edges_.size() + 1 == n) {
        // Tridiagonal: assemble and take the full spectrum directly.
        std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
        for (const Edge& e : edges_) {
            diag[e.u] += e.w * inv_sqrt_mass_[e.u] * inv_sqrt_mass_[e.u];
            diag[e.v] += e.w * inv_sqrt_mass_[e.v] * inv_sqrt_mass_[e.v];
            off[std::min(e.u, e.v)] = -e.w * inv_sqrt_mass_[e.u] * inv_sqrt_mass_[e.v];
        }
        auto ev = symtri_eigenvalues(diag, off);
        if (lambda_max) *lambda_max = ev.back();
        return ev[1];
    }

    LinOp op{n, [this](const std::vector<double>& f, std::vector<double>& out) {
                 matvec(f, out);
             }};
    const LanczosResult lr = lanczos_smallest(op, u0, 450, 1e-11);
    if (lambda_max) *lambda_max = lr.lambda_max;
    return lr.lambda_min;
}

SpectrumResult sg_constant(const CanonicalEnsemble& e, std::pair<double, double> spacings) {
    if (e.dim() > 3) throw GridBudgetExceeded("chart dimension above 3");
    double h_coarse = std::max(spacings.first, spacings.second);
    double h_fine = std::min(spacings.first, spacings.second);
    if (!(h_fine > 0) || h_coarse == h_fine)
        throw Error("Spacings", "need two distinct positive spacings");

    GeneratorGrid coarse(e, h_coarse);
    GeneratorGrid fine(e, h_fine);
    SpectrumResult res;
    double l0 = 0, lmax = 0;
    res.rho1_coarse = coarse.solve_gap();
    res.rho1 = fine.solve_gap(&l0, &lmax);
    res.eigen_gap_check = l0;
    res.grid_spacing = fine.spacing(0);
    res.unknowns = fine.unknowns();
    // O(h^2) scheme: eliminate the leading error with the actual spacings.
    const double h1 = coarse.spacing(0), h2 = fine.spacing(0);
    res.richardson_rho1 =
        res.rho1 + (res.rho1 - res.rho1_coarse) * h2 * h2 / (h1 * h1 - h2 * h2);
    return res;
}

double lsi_upper_bound(const CanonicalEnsemble& e, const std::string& family) {
    if (family != "default")
        throw Error("UnknownTrialFamily", family);
    const int dim = e.dim();
    double best = kInf;
    // Both signs keep the family closed under mirror reflection of the chart.
    const double amplitudes[] = {-1.0, -0.5, -0.2, -0.1, -0.05, -0.02, -0.01,
                                 0.01, 0.02,  0.05, 0.1,  0.2,   0.5,  1.0};
    for (int j = 0; j < dim; ++j) {
        const Interval b = e.box()[static_cast<std::size_t>(j)];
        const double scale = kPi / b.length();
        for (int shape = 0; shape < 2; ++shape) {
            for (double eps : amplitudes) {
                FnN f;
                const auto basis = e.chart().basis[static_cast<std::size_t>(j)];
                const auto origin = e.chart().origin;
                if (shape == 0) {
                    f.value = [eps, basis, origin](const Point& x) {
                        double u = 0;
                        for (std::size_t i = 0; i < x.size(); ++i)
                            u += basis[i] * (x[i] - origin[i]);
                        return std::exp(eps * u);
                    };
                    f.grad = [eps, basis, origin](const Point& x) {
                        double u = 0;
                        for (std::size_t i = 0; i < x.size(); ++i)
                            u += basis[i] * (x[i] - origin[i]);
                        const double fv = std::exp(eps * u);
                        Point g(x.size());
                        for (std::size_t i = 0; i < x.size(); ++i) g[i] = eps * fv * basis[i];
                        return g;
                    };
                } else {
                    f.value = [eps, basis, origin, scale](const Point& x) {
                        double u = 0;
                        for (std::size_t i = 0; i < x.size(); ++i)
                            u += basis[i] * (x[i] - origin[i]);
                        return std::exp(eps * std::sin(scale * u));
                    };
                    f.grad = [eps, basis, origin, scale](const Point& x) {
                        double u = 0;
                        for (std::size_t i = 0; i < x.size(); ++i)
                            u += basis[i] * (x[i] - origin[i]);
                        const double fv = std::exp(eps * std::sin(scale * u));
                        Point g(x.size());
                        for (std::size_t i = 0; i < x.size(); ++i)
                            g[i] = eps * scale * std::cos(scale * u) * fv * basis[i];
                        return g;
                    };
                }
                const FunctionalReport r = functionals(e, f);
                if (r.entropy > 1e-14 && std::isfinite(r.lsi_quotient))
                    best = std::min(best, r.lsi_quotient);
            }
        }
    }
    if (!std::isfinite(best)) throw NonPositiveFunction("no usable trial function");
    return best;
}

std::pair<double, double> default_spacings(int N, double box_length) {
    switch (N) {
        case 2: return {box_length / 96.0, box_length / 136.0};
        case 3: return {box_length / 44.0, box_length / 62.0};
        default: return {box_length / 20.0, box_length / 28.0};
    }
}

std::vector<ScalingRow> scaling_probe(const PotentialSpec& p, const std::vector<int>& Ns,
                                      const std::vector<double>& m_grid,
                                      quad::Options opt) {
    std::vector<ScalingRow> rows;
    for (int N : Ns) {
        if (N < 2 || N > 4) throw Error("Dimension", "N must be in {2,3,4}");
        const int nodes = N == 2 ? 96 : (N == 3 ? 48 : 26);
        for (double m : m_grid) {
            const CanonicalEnsemble e = CanonicalEnsemble::build(p, N, m, nodes, opt);
            double len = 0;
            for (const Interval& b : e.box()) len = std::max(len, b.length());
            const SpectrumResult sr = sg_constant(e, default_spacings(N, len));
            ScalingRow row;
            row.N = N;
            row.m = m;
            row.h = sr.grid_spacing;
            row.rho1 = sr.rho1;
            row.rho1_extrap = sr.richardson_rho1;
            row.rho1_times_m2 = sr.richardson_rho1 * m * m;
            row.rho_ub = lsi_upper_bound(e);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace spinlab
