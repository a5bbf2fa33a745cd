#include "spinlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "spinlab/renorm.hpp"

namespace spinlab {

namespace {

double dot(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Point& a) { return dot(a, a); }

// -H(x) = -sum psi(x_i), -inf outside the support.
double neg_hamiltonian(const PotentialSpec& p, const Point& x) {
    double h = 0;
    for (double xi : x) {
        if (!p.support.contains_interior(xi)) return -kInf;
        h += p.psi(xi);
    }
    return -h;
}

Point hamiltonian_grad(const PotentialSpec& p, const Point& x) {
    Point g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = p.convex_d1(x[i]) + p.perturbation_d1(x[i]);
    return g;
}

// Tangential projection in R^N: subtract the mean component.
Point project_tangent(const Point& g) {
    double mean = 0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    Point out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i] - mean;
    return out;
}

// 2D fiber of X_{4,m} over y = (y1, y2): x = (y1+z1, y1-z1, y2+z2, y2-z2).
// Product Gauss-Legendre grid sized from the two 1D factor windows.
struct Fiber2D {
    OneDMeasure factor1, factor2;
    std::vector<double> z1_nodes, z1_w, z2_nodes, z2_w;
    double y1, y2;
    double log_shift;  // max log integrand, used to stabilize weights

    Fiber2D(const PotentialSpec& p, double y1_, double y2_, int nodes,
            quad::Options opt)
        : y1(y1_), y2(y2_) {
        auto make = [&p, &opt](double y) {
            const double lo = std::max(p.support.lo - y, y - p.support.hi);
            const double hi = std::min(p.support.hi - y, y - p.support.lo);
            if (!(lo < hi)) throw NonIntegrable("empty fiber factor");
            return OneDMeasure::normalize(
                [&p, y](double z) { return -p.psi(y + z) - p.psi(y - z); }, {lo, hi},
                opt);
        };
        factor1 = make(y1);
        factor2 = make(y2);
        std::vector<double> gl_x, gl_w;
        quad::gauss_legendre(static_cast<std::size_t>(nodes), gl_x, gl_w);
        auto map_axis = [&](const OneDMeasure& f, std::vector<double>& zs,
                            std::vector<double>& ws) {
            const Interval w = f.truncation_window();
            zs.resize(gl_x.size());
            ws.resize(gl_x.size());
            for (std::size_t i = 0; i < gl_x.size(); ++i) {
                zs[i] = 0.5 * (w.lo + w.hi) + 0.5 * w.length() * gl_x[i];
                ws[i] = 0.5 * w.length() * gl_w[i];
            }
        };
        map_axis(factor1, z1_nodes, z1_w);
        map_axis(factor2, z2_nodes, z2_w);
        log_shift = factor1.log_unnormalized(factor1.truncation_window().clamp(0)) +
                    factor2.log_unnormalized(factor2.truncation_window().clamp(0));
        double best = -kInf;
        for (double z1 : {z1_nodes.front(), 0.5 * (z1_nodes.front() + z1_nodes.back())})
            for (double z2 : {z2_nodes.front(), 0.5 * (z2_nodes.front() + z2_nodes.back())})
                best = std::max(best, factor1.log_unnormalized(z1) +
                                          factor2.log_unnormalized(z2));
        log_shift = std::max(log_shift, best);
    }

    Point point(double z1, double z2) const { return {y1 + z1, y1 - z1, y2 + z2, y2 - z2}; }

    // Integral over the fiber of fn(x) against the *unnormalized* shifted
    // weight; mass() normalizes.
    template <typename Fn>
    double integrate(Fn&& fn) const {
        double acc = 0;
        for (std::size_t i = 0; i < z1_nodes.size(); ++i) {
            const double l1 = factor1.log_unnormalized(z1_nodes[i]);
            double row = 0;
            for (std::size_t j = 0; j < z2_nodes.size(); ++j) {
                const double lw =
                    l1 + factor2.log_unnormalized(z2_nodes[j]) - log_shift;
                row += z2_w[j] * std::exp(lw) * fn(point(z1_nodes[i], z2_nodes[j]));
            }
            acc += z1_w[i] * row;
        }
        return acc;
    }

    double mass() const {
        return integrate([](const Point&) { return 1.0; });
    }
};

}  // namespace

Point HyperplaneChart::embed(const Point& u) const {
    Point x = origin;
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += u[j] * basis[j][i];
    return x;
}

Point HyperplaneChart::to_chart(const Point& x) const {
    Point u(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) {
        double s = 0;
        for (std::size_t i = 0; i < x.size(); ++i) s += basis[j][i] * (x[i] - origin[i]);
        u[j] = s;
    }
    return u;
}

Point HyperplaneChart::chart_gradient(const Point& grad_xn) const {
    Point c(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) c[j] = dot(basis[j], grad_xn);
    return c;
}

HyperplaneChart make_chart(int N, double m) {
    if (N < 2 || N > 4) throw Error("Dimension", "N must be in {2,3,4}");
    HyperplaneChart c;
    c.N = N;
    c.m = m;
    c.origin.assign(static_cast<std::size_t>(N), m);
    // Helmert vectors: k ones, then -k, normalized; zero-sum and orthonormal.
    for (int k = 1; k < N; ++k) {
        Point v(static_cast<std::size_t>(N), 0.0);
        const double norm = std::sqrt(static_cast<double>(k) * (k + 1.0));
        for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = 1.0 / norm;
        v[static_cast<std::size_t>(k)] = -static_cast<double>(k) / norm;
        c.basis.push_back(std::move(v));
    }
    return c;
}

CanonicalEnsemble CanonicalEnsemble::build(const PotentialSpec& p, int N, double m,
                                           int nodes_per_dim, quad::Options opt) {
    const int min_nodes = N == 2 ? 64 : (N == 3 ? 48 : 24);
    if (nodes_per_dim < min_nodes)
        throw Error("GridTooCoarse", "nodes_per_dim below the minimum for N=" +
                                         std::to_string(N));
    CanonicalEnsemble e;
    e.potential_ = p;
    e.chart_ = make_chart(N, m);
    const int dim = N - 1;

    auto log_u = [&](const Point& u) { return neg_hamiltonian(p, e.chart_.embed(u)); };

    // Mode search: projected gradient descent with backtracking.  For
    // wall-bound linear potentials the tangential gradient vanishes and the
    // chart origin is kept.
    Point mode(static_cast<std::size_t>(dim), 0.0);
    if (!std::isfinite(log_u(mode)))
        throw DegenerateDensity("chart origin outside the support");
    double f0 = -log_u(mode);
    for (int it = 0; it < 400; ++it) {
        const Point x = e.chart_.embed(mode);
        const Point g = e.chart_.chart_gradient(hamiltonian_grad(p, x));
        const double gn = std::sqrt(norm2(g));
        if (gn < 1e-10) break;
        double alpha = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            Point trial = mode;
            for (int j = 0; j < dim; ++j)
                trial[static_cast<std::size_t>(j)] -= alpha * g[static_cast<std::size_t>(j)];
            const double lv = log_u(trial);
            if (std::isfinite(lv) && -lv < f0 - 0.25 * alpha * gn * gn) {
                mode = trial;
                f0 = -lv;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
    }
    const double log_mode = log_u(mode);

    // Per-axis box: walk from the mode until the log-density drops log_drop,
    // or a hard wall is hit; drop-found sides get a safety factor.
    e.box_.resize(static_cast<std::size_t>(dim));
    std::vector<std::array<bool, 2>> wall(static_cast<std::size_t>(dim), {false, false});
    const Point x_mode = e.chart_.embed(mode);
    for (int j = 0; j < dim; ++j) {
        for (int side = 0; side < 2; ++side) {
            const double dir = side == 0 ? -1.0 : 1.0;
            // Distance to the nearest wall along this axis.
            double wall_r = kInf;
            for (int i = 0; i < N; ++i) {
                const double b = dir * e.chart_.basis[static_cast<std::size_t>(j)]
                                                     [static_cast<std::size_t>(i)];
                if (std::isfinite(p.support.lo) && b < 0)
                    wall_r = std::min(wall_r,
                                      (p.support.lo - x_mode[static_cast<std::size_t>(i)]) / b);
                if (std::isfinite(p.support.hi) && b > 0)
                    wall_r = std::min(wall_r,
                                      (p.support.hi - x_mode[static_cast<std::size_t>(i)]) / b);
            }
            double r = 0.25;
            double found = kInf;
            while (r < 1e6) {
                if (r >= wall_r) break;
                Point u = mode;
                u[static_cast<std::size_t>(j)] += dir * r;
                const double lv = log_u(u);
                if (!std::isfinite(lv) || lv <= log_mode - opt.log_drop) {
                    found = r;
                    break;
                }
                r *= 1.5;
            }
            double extent;
            if (found < wall_r) {
                extent = 1.15 * found;
                if (extent >= wall_r) {
                    extent = wall_r;
                    wall[static_cast<std::size_t>(j)][static_cast<std::size_t>(side)] = true;
                }
            } else {
                if (!std::isfinite(wall_r))
                    throw NonIntegrable("box expansion exceeded 1e6 on axis " +
                                        std::to_string(j));
                extent = wall_r;
                wall[static_cast<std::size_t>(j)][static_cast<std::size_t>(side)] = true;
            }
            auto& b = e.box_[static_cast<std::size_t>(j)];
            if (side == 0)
                b.lo = mode[static_cast<std::size_t>(j)] - extent;
            else
                b.hi = mode[static_cast<std::size_t>(j)] + extent;
        }
    }

    // Verify faces for dim >= 2: the density on any non-wall face must be
    // below the drop threshold; expand axes that violate it.
    for (int round = 0; round < 6 && dim >= 2; ++round) {
        bool expanded = false;
        for (int j = 0; j < dim && !expanded; ++j) {
            for (int side = 0; side < 2 && !expanded; ++side) {
                if (wall[static_cast<std::size_t>(j)][static_cast<std::size_t>(side)]) continue;
                double face_max = -kInf;
                const int probe = 9;
                std::vector<int> idx(static_cast<std::size_t>(dim), 0);
                for (;;) {
                    Point u(static_cast<std::size_t>(dim));
                    for (int k = 0; k < dim; ++k) {
                        const auto& b = e.box_[static_cast<std::size_t>(k)];
                        u[static_cast<std::size_t>(k)] =
                            b.lo + b.length() * idx[static_cast<std::size_t>(k)] / (probe - 1.0);
                    }
                    u[static_cast<std::size_t>(j)] =
                        side == 0 ? e.box_[static_cast<std::size_t>(j)].lo
                                  : e.box_[static_cast<std::size_t>(j)].hi;
                    face_max = std::max(face_max, log_u(u));
                    int k = 0;
                    for (; k < dim; ++k) {
                        if (k == j) continue;
                        if (++idx[static_cast<std::size_t>(k)] < probe) break;
                        idx[static_cast<std::size_t>(k)] = 0;
                    }
                    if (k == dim) break;
                }
                if (face_max > log_mode - opt.log_drop) {
                    auto& b = e.box_[static_cast<std::size_t>(j)];
                    const double grow = 0.3 * b.length();
                    if (side == 0)
                        b.lo -= grow;
                    else
                        b.hi += grow;
                    expanded = true;
                }
            }
        }
        if (!expanded) break;
    }

    // Tensorized Gauss-Legendre nodes.
    double total_nodes = 1;
    for (int j = 0; j < dim; ++j) total_nodes *= nodes_per_dim;
    if (total_nodes > 2e6) throw GridBudgetExceeded("ensemble grid too large");

    std::vector<double> gl_x, gl_w;
    quad::gauss_legendre(static_cast<std::size_t>(nodes_per_dim), gl_x, gl_w);
    e.axis_nodes_.resize(static_cast<std::size_t>(dim));
    e.axis_weights_.resize(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
        const auto& b = e.box_[static_cast<std::size_t>(j)];
        auto& xs = e.axis_nodes_[static_cast<std::size_t>(j)];
        auto& ws = e.axis_weights_[static_cast<std::size_t>(j)];
        xs.resize(gl_x.size());
        ws.resize(gl_x.size());
        for (std::size_t i = 0; i < gl_x.size(); ++i) {
            xs[i] = 0.5 * (b.lo + b.hi) + 0.5 * b.length() * gl_x[i];
            ws[i] = 0.5 * b.length() * gl_w[i];
        }
    }

    const auto total = static_cast<std::size_t>(total_nodes);
    e.node_logw_.assign(total, -kInf);
    std::vector<double> node_logdens(total, -kInf);
    parallel_for(total, [&](std::size_t flat) {
        std::size_t rest = flat;
        Point u(static_cast<std::size_t>(dim));
        double logw = 0;
        for (int j = dim - 1; j >= 0; --j) {
            const std::size_t k = rest % e.axis_nodes_[static_cast<std::size_t>(j)].size();
            rest /= e.axis_nodes_[static_cast<std::size_t>(j)].size();
            u[static_cast<std::size_t>(j)] = e.axis_nodes_[static_cast<std::size_t>(j)][k];
            logw += std::log(e.axis_weights_[static_cast<std::size_t>(j)][k]);
        }
        const double ld = log_u(u);
        node_logdens[flat] = ld;
        e.node_logw_[flat] = std::isfinite(ld) ? ld + logw : -kInf;
    });
    e.log_max_ = -kInf;
    for (double v : node_logdens) e.log_max_ = std::max(e.log_max_, v);
    double acc = 0;
    for (double lw : e.node_logw_)
        if (std::isfinite(lw)) acc += std::exp(lw - e.log_max_);
    if (!(acc > 0)) throw DegenerateDensity("ensemble grid carries no mass");
    e.log_normalizer_ = e.log_max_ + std::log(acc);
    return e;
}

double CanonicalEnsemble::log_density_u(const Point& u) const {
    return neg_hamiltonian(potential_, chart_.embed(u));
}

FunctionalReport functionals(const CanonicalEnsemble& e, const FnN& f) {
    double z = 0, sf = 0, sflogf = 0, sf2 = 0, sfisher = 0, sdirichlet = 0;
    const double shift = e.max_log_density();
    e.for_each_node([&](const Point& u, double logw) {
        if (!std::isfinite(logw)) return;
        const double w = std::exp(logw - shift);
        const Point x = e.chart().embed(u);
        const double fv = f.value(x);
        if (!(fv > 0)) throw NonPositiveFunction("functionals need f > 0 on the grid");
        const Point cg = e.chart().chart_gradient(f.grad(x));
        const double grad2 = norm2(cg);
        z += w;
        sf += w * fv;
        sflogf += w * fv * std::log(fv);
        sf2 += w * fv * fv;
        sfisher += w * grad2 / fv;
        sdirichlet += w * grad2;
    });
    FunctionalReport r;
    const double mean_f = sf / z;
    r.entropy = sflogf / z - mean_f * std::log(mean_f);
    r.fisher = sfisher / z;
    r.variance = sf2 / z - mean_f * mean_f;
    r.dirichlet = sdirichlet / z;
    r.lsi_quotient = r.entropy > 0 ? r.fisher / (2 * r.entropy)
                                   : std::numeric_limits<double>::quiet_NaN();
    r.sg_quotient = r.variance > 0 ? r.dirichlet / r.variance
                                   : std::numeric_limits<double>::quiet_NaN();
    return r;
}

Point coarse_grain(const Point& x) {
    if (x.size() % 2 != 0) throw OddDimension("coarse_grain needs even N");
    Point y(x.size() / 2);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = 0.5 * (x[2 * i] + x[2 * i + 1]);
    return y;
}

Point coarse_grain_adjoint(const Point& y, int N) {
    if (N % 2 != 0 || static_cast<std::size_t>(N) != 2 * y.size())
        throw OddDimension("adjoint dimension mismatch");
    Point x(static_cast<std::size_t>(N));
    for (std::size_t i = 0; i < y.size(); ++i) x[2 * i] = x[2 * i + 1] = 0.5 * y[i];
    return x;
}

double marginal_check(const PotentialSpec& p, double m, quad::Options opt) {
    // Reference: 2-site ensemble with the tabulated R psi along the chart
    // y(v) = (m + v/sqrt2, m - v/sqrt2).
    const TabulatedPotential tab = renormalize(p, {m - 8, m + 8}, 513, opt);
    auto rhs_logdens = [&](double v) {
        const double y1 = m + v / std::sqrt(2.0);
        const double y2 = m - v / std::sqrt(2.0);
        const Interval w = tab.window();
        if (y1 < w.lo || y1 > w.hi || y2 < w.lo || y2 > w.hi) return -kInf;
        return -tab.value(y1) - tab.value(y2);
    };
    const OneDMeasure rhs = OneDMeasure::normalize(
        rhs_logdens, {-8 * std::sqrt(2.0), 8 * std::sqrt(2.0)}, opt);

    const Interval vw = rhs.truncation_window();
    const int n = 257;  // Simpson grid (odd count)
    std::vector<double> lhs(n), rhs_d(n), vs(n);
    for (int i = 0; i < n; ++i) vs[static_cast<std::size_t>(i)] = vw.lo + vw.length() * i / (n - 1.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        const double v = vs[i];
        const double y1 = m + v / std::sqrt(2.0);
        const double y2 = m - v / std::sqrt(2.0);
        Fiber2D fiber(p, y1, y2, 48, opt);
        lhs[i] = fiber.mass() * std::exp(fiber.log_shift);
        rhs_d[i] = rhs.density(v);
    });
    // Normalize both by Simpson weights on the same grid; the comparison is
    // then purely about the shape.
    const double h = vw.length() / (n - 1.0);
    auto simpson = [&](const std::vector<double>& f) {
        double s = f.front() + f.back();
        for (int i = 1; i + 1 < n; ++i) s += f[static_cast<std::size_t>(i)] * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    const double zl = simpson(lhs), zr = simpson(rhs_d);
    double peak = 0;
    for (double v : lhs) peak = std::max(peak, v / zl);
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        const double dl = lhs[static_cast<std::size_t>(i)] / zl;
        const double dr = rhs_d[static_cast<std::size_t>(i)] / zr;
        if (dl >= 1e-6 * peak) worst = std::max(worst, std::abs(dl - dr) / dl);
    }
    return worst;
}

HierarchyReport hierarchy_suite(const PotentialSpec& p, double m, const FnN& f,
                                unsigned seed, quad::Options opt) {
    HierarchyReport rep;

    // (a) entropy additivity.
    const CanonicalEnsemble e4 = CanonicalEnsemble::build(p, 4, m, 56, opt);
    const FunctionalReport full = functionals(e4, f);
    rep.entropy_total = full.entropy;

    // Marginal window via a coarse tabulated R psi.
    const TabulatedPotential tab = renormalize(p, {m - 8, m + 8}, 129, opt);
    auto marg_logdens = [&](double v) {
        const double y1 = m + v / std::sqrt(2.0);
        const double y2 = m - v / std::sqrt(2.0);
        const Interval w = tab.window();
        if (y1 < w.lo || y1 > w.hi || y2 < w.lo || y2 > w.hi) return -kInf;
        return -tab.value(y1) - tab.value(y2);
    };
    const OneDMeasure marg = OneDMeasure::normalize(
        marg_logdens, {-8 * std::sqrt(2.0), 8 * std::sqrt(2.0)}, opt);
    const Interval vw = marg.truncation_window();

    const int nv = 64;
    std::vector<double> gl_x, gl_w;
    quad::gauss_legendre(nv, gl_x, gl_w);
    std::vector<double> mass(nv), fbar(nv), fent(nv);
    parallel_for(nv, [&](std::size_t i) {
        const double v = 0.5 * (vw.lo + vw.hi) + 0.5 * vw.length() * gl_x[i];
        const double y1 = m + v / std::sqrt(2.0);
        const double y2 = m - v / std::sqrt(2.0);
        Fiber2D fiber(p, y1, y2, 48, opt);
        const double w0 = fiber.mass();
        const double fm = fiber.integrate([&](const Point& x) { return f.value(x); }) / w0;
        const double fl =
            fiber.integrate([&](const Point& x) {
                const double fv = f.value(x);
                if (!(fv > 0)) throw NonPositiveFunction("hierarchy_suite needs f > 0");
                return fv * std::log(fv);
            }) /
            w0;
        mass[i] = w0 * std::exp(fiber.log_shift);
        fbar[i] = fm;
        fent[i] = fl - fm * std::log(fm);
    });
    double zsum = 0, fbar_sum = 0, fblog_sum = 0, fent_sum = 0;
    double wmax = 0;
    for (int i = 0; i < nv; ++i) wmax = std::max(wmax, mass[static_cast<std::size_t>(i)]);
    for (int i = 0; i < nv; ++i) {
        const double w = gl_w[static_cast<std::size_t>(i)] * mass[static_cast<std::size_t>(i)] / wmax;
        zsum += w;
        fbar_sum += w * fbar[static_cast<std::size_t>(i)];
        fblog_sum += w * fbar[static_cast<std::size_t>(i)] * std::log(fbar[static_cast<std::size_t>(i)]);
        fent_sum += w * fent[static_cast<std::size_t>(i)];
    }
    const double fbar_mean = fbar_sum / zsum;
    const double ent_marginal = fblog_sum / zsum - fbar_mean * std::log(fbar_mean);
    const double rhs = fent_sum / zsum + ent_marginal;
    rep.entropy_additivity_residual = std::abs(full.entropy - rhs);

    // (b) conditional product structure at random fiber points.
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double worst_prod = 0;
    for (int trial = 0; trial < 32; ++trial) {
        const double v = vw.lo + vw.length() * (0.25 + 0.5 * unif(rng));
        const double y1 = m + v / std::sqrt(2.0);
        const double y2 = m - v / std::sqrt(2.0);
        Fiber2D fiber(p, y1, y2, 48, opt);
        const double w0 = fiber.mass() * std::exp(fiber.log_shift);
        const Interval w1 = fiber.factor1.truncation_window();
        const Interval w2 = fiber.factor2.truncation_window();
        double peak = fiber.factor1.density(fiber.factor1.mean()) *
                      fiber.factor2.density(fiber.factor2.mean());
        for (int k = 0; k < 8; ++k) {
            const double z1 = w1.lo + w1.length() * (0.2 + 0.6 * unif(rng));
            const double z2 = w2.lo + w2.length() * (0.2 + 0.6 * unif(rng));
            const double joint =
                std::exp(fiber.factor1.log_unnormalized(z1) +
                         fiber.factor2.log_unnormalized(z2)) /
                w0;
            const double product = fiber.factor1.density(z1) * fiber.factor2.density(z2);
            worst_prod = std::max(worst_prod, std::abs(joint - product) / peak);
        }
    }
    rep.product_structure_residual = worst_prod;

    // (c) Pythagoras for the gradient split by 2 P^t P at random chart points.
    double worst_pyth = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Point u(static_cast<std::size_t>(e4.dim()));
        for (int j = 0; j < e4.dim(); ++j) {
            const auto& b = e4.box()[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(j)] = b.lo + b.length() * unif(rng);
        }
        const Point x = e4.chart().embed(u);
        const Point g = project_tangent(f.grad(x));
        const Point pg = coarse_grain(g);
        Point macro = coarse_grain_adjoint(pg, 4);
        for (double& c : macro) c *= 2.0;
        double a2 = 0, b2 = 0, g2 = 0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double fluct = g[i] - macro[i];
            a2 += fluct * fluct;
            b2 += macro[i] * macro[i];
            g2 += g[i] * g[i];
        }
        worst_pyth = std::max(worst_pyth, std::abs(g2 - a2 - b2) / std::max(g2, 1e-30));
    }
    rep.pythagoras_residual = worst_pyth;
    return rep;
}

double macro_gradient_identity(const PotentialSpec& p, double m, const Point& y,
                               const FnN& f, quad::Options opt) {
    if (y.size() != 2 || std::abs(0.5 * (y[0] + y[1]) - m) > 1e-9)
        throw Error("FiberPoint", "y must lie on X_{2,m}");
    const double sqrt2 = std::sqrt(2.0);
    const double v = (y[0] - m) * sqrt2;

    auto fiber_at = [&](double vv) { return Fiber2D(p, m + vv / sqrt2, m - vv / sqrt2, 48, opt); };
    const Fiber2D fiber = fiber_at(v);
    const double w0 = fiber.mass();

    // LHS: mean of P (tangential grad f) over the fiber.
    double lhs1 = 0, lhs2 = 0;
    {
        const double a = fiber.integrate([&](const Point& x) {
            const Point g = project_tangent(f.grad(x));
            return 0.5 * (g[0] + g[1]);
        });
        const double b = fiber.integrate([&](const Point& x) {
            const Point g = project_tangent(f.grad(x));
            return 0.5 * (g[2] + g[3]);
        });
        lhs1 = a / w0;
        lhs2 = b / w0;
    }

    // RHS: (1/2) grad fbar along the X_{2,m} chart + P cov(f, grad H).
    auto fbar_at = [&](double vv) {
        const Fiber2D fb = fiber_at(vv);
        return fb.integrate([&](const Point& x) { return f.value(x); }) / fb.mass();
    };
    const double hfd = 1e-3;
    const double dfbar = (fbar_at(v + hfd) - fbar_at(v - hfd)) / (2 * hfd);
    const double fmean = fbar_at(v);

    Point cov(4, 0.0);
    Point gh_mean(4, 0.0);
    for (int i = 0; i < 4; ++i) {
        gh_mean[static_cast<std::size_t>(i)] =
            fiber.integrate([&](const Point& x) {
                return project_tangent(hamiltonian_grad(p, x))[static_cast<std::size_t>(i)];
            }) /
            w0;
        cov[static_cast<std::size_t>(i)] =
            fiber.integrate([&](const Point& x) {
                return f.value(x) *
                       project_tangent(hamiltonian_grad(p, x))[static_cast<std::size_t>(i)];
            }) /
                w0 -
            fmean * gh_mean[static_cast<std::size_t>(i)];
    }
    const Point pcov = coarse_grain(cov);
    const double rhs1 = 0.5 * dfbar / sqrt2 + pcov[0];
    const double rhs2 = -0.5 * dfbar / sqrt2 + pcov[1];

    return std::sqrt((lhs1 - rhs1) * (lhs1 - rhs1) + (lhs2 - rhs2) * (lhs2 - rhs2));
}

double be_hs_lower_bound(const PotentialSpec& p, int N) {
    if (!p.admissible)
        throw NonAdmissible(p.label + " outside the perturbed strictly convex class");
    Interval w{std::max(p.support.lo, -12.0), std::min(p.support.hi, 12.0)};
    const SplittingReport s = validate_splitting(p, w, 4096);
    return s.c0_observed * std::exp(-static_cast<double>(N) * s.osc_delta);
}

FnN test_function(const std::string& name) {
    FnN f;
    f.label = name;
    if (name == "constant") {
        f.value = [](const Point&) { return 1.0; };
        f.grad = [](const Point& x) { return Point(x.size(), 0.0); };
        return f;
    }
    if (name == "sin-tilt") {
        f.value = [](const Point& x) { return 1.0 + 0.5 * std::sin(x[0]); };
        f.grad = [](const Point& x) {
            Point g(x.size(), 0.0);
            g[0] = 0.5 * std::cos(x[0]);
            return g;
        };
        return f;
    }
    if (name == "exp-tilt") {
        f.value = [](const Point& x) { return std::exp(0.25 * x[0]); };
        f.grad = [](const Point& x) {
            Point g(x.size(), 0.0);
            g[0] = 0.25 * std::exp(0.25 * x[0]);
            return g;
        };
        return f;
    }
    if (name == "product") {
        f.value = [](const Point& x) {
            return (1.0 + 0.5 * std::sin(x[0])) * (1.0 + 0.25 * std::cos(x[1]));
        };
        f.grad = [](const Point& x) {
            Point g(x.size(), 0.0);
            g[0] = 0.5 * std::cos(x[0]) * (1.0 + 0.25 * std::cos(x[1]));
            g[1] = (1.0 + 0.5 * std::sin(x[0])) * (-0.25 * std::sin(x[1]));
            return g;
        };
        return f;
    }
    if (name == "mixed-tilt") {
        // Couples two coordinates from different coarse-graining blocks.
        f.value = [](const Point& x) {
            return std::exp(0.2 * x[0] - 0.15 * x[x.size() > 2 ? 2 : 1]);
        };
        f.grad = [](const Point& x) {
            const std::size_t j = x.size() > 2 ? 2 : 1;
            const double fv = std::exp(0.2 * x[0] - 0.15 * x[j]);
            Point g(x.size(), 0.0);
            g[0] = 0.2 * fv;
            g[j] = -0.15 * fv;
            return g;
        };
        return f;
    }
    throw Error("UnknownTestFunction", name);
}

}  // namespace spinlab
