#include "spinlab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "spinlab/covkernel.hpp"
#include "spinlab/cramer.hpp"
#include "spinlab/ensemble.hpp"
#include "spinlab/renorm.hpp"
#include "spinlab/report.hpp"
#include "spinlab/spectral.hpp"

namespace spinlab {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

VerdictRecord verdict(const std::string& suite, const std::string& case_id, double lhs,
                      double rhs, Clock::time_point t0) {
    VerdictRecord v;
    v.suite = suite;
    v.case_id = case_id;
    v.lhs = lhs;
    v.rhs = rhs;
    v.ratio = rhs != 0 ? lhs / rhs : kInf;
    v.holds = lhs <= rhs;
    v.runtime_ms = ms_since(t0);
    return v;
}

int exit_from(const std::vector<VerdictRecord>& vs) {
    for (const auto& v : vs)
        if (!v.holds) return 1;
    return 0;
}

// Plain-JSON outputs carry the same fingerprint as CSV/SVG headers.
nlohmann::json with_meta(const RunConfig& cfg, nlohmann::json body) {
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(cfg.hash()));
    nlohmann::json doc;
    doc["meta"] = {{"version", kToolVersion}, {"config_hash", hash_hex}, {"seed", cfg.seed}};
    doc["data"] = std::move(body);
    return doc;
}

// Random differentiable test functions for the covariance sweeps: cubic
// polynomials and tanh ridges with coefficients from the seeded generator.
Fn1 random_poly(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    const double a0 = c(rng), a1 = c(rng), a2 = 0.5 * c(rng), a3 = 0.2 * c(rng);
    Fn1 f;
    f.label = "poly3";
    f.value = [=](double x) { return a0 + x * (a1 + x * (a2 + x * a3)); };
    f.d1 = [=](double x) { return a1 + x * (2 * a2 + x * 3 * a3); };
    return f;
}

Fn1 random_tanh(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(0.2, 1.5);
    std::uniform_real_distribution<double> b(-1.0, 1.0);
    const double a = c(rng), x0 = b(rng);
    Fn1 f;
    f.label = "tanh";
    f.value = [=](double x) { return std::tanh(a * x + x0); };
    f.d1 = [=](double x) {
        const double t = std::tanh(a * x + x0);
        return a * (1 - t * t);
    };
    return f;
}

int run_validate(const RunConfig& cfg, const ReportWriter& out) {
    const PotentialSpec p = cfg.make_potential();
    Interval w{cfg.num("window.lo", std::max(p.support.lo + 0.1, -6.0)),
               cfg.num("window.hi", std::min(p.support.hi, 6.0))};
    const int n = static_cast<int>(cfg.num("window.n", 257));
    const SplittingReport rep = validate_splitting(p, w, n);
    nlohmann::json j{{"potential", p.label},
                     {"c0_observed", rep.c0_observed},
                     {"b0_observed", rep.b0_observed},
                     {"b1_observed", rep.b1_observed},
                     {"osc_delta", rep.osc_delta},
                     {"window", {rep.grid_window.lo, rep.grid_window.hi}},
                     {"admissible", rep.admissible}};
    out.write_json("validate.json", with_meta(cfg, j).dump(2) + "\n");
    return 0;
}

int run_renorm(const RunConfig& cfg, const ReportWriter& out) {
    const PotentialSpec p = cfg.make_potential();
    const int M = static_cast<int>(cfg.num("renorm.M", 4));
    const int knots = static_cast<int>(cfg.num("renorm.knots", 513));
    Interval w{cfg.num("renorm.window.lo", -12), cfg.num("renorm.window.hi", 12)};
    Interval scan{cfg.num("renorm.scan.lo", -3), cfg.num("renorm.scan.hi", 3)};
    const auto gens = iterate(p, M, w, knots, cfg.quad_options());

    std::vector<std::vector<double>> rows;
    std::vector<Series> d2_series;
    nlohmann::json conv = nlohmann::json::array();
    for (const auto& g : gens) {
        Interval sw{std::max(scan.lo, g.window().lo), std::min(scan.hi, g.window().hi)};
        Series s;
        s.label = "M=" + std::to_string(g.generation());
        for (int i = 0; i <= 256; ++i) {
            const double y = sw.lo + sw.length() * i / 256.0;
            rows.push_back({y, g.value(y), g.d1(y), g.d2(y),
                            static_cast<double>(g.generation())});
            s.points.emplace_back(y, g.d2(y));
        }
        d2_series.push_back(std::move(s));
        const ConvexityReport c = convexity_report(g, sw);
        conv.push_back({{"generation", g.generation()},
                        {"min_d2", c.min_d2},
                        {"argmin", c.argmin},
                        {"positive", c.positive},
                        {"window", {sw.lo, sw.hi}}});
    }
    out.write_csv("renorm_generations.csv", {"y", "value", "d1", "d2", "generation"}, rows);
    out.write_json("renorm_convexity.json", with_meta(cfg, conv).dump(2) + "\n");
    PlotSpec ps;
    ps.title = "renormalized potential curvature";
    ps.x_label = "m";
    ps.y_label = "d2";
    out.write_svg("renorm_d2.svg", d2_series, ps);
    return 0;
}

int run_cramer(const RunConfig& cfg, const ReportWriter& out) {
    const PotentialSpec p = cfg.make_potential();
    const double lo = cfg.num("cramer.m.lo", -3), hi = cfg.num("cramer.m.hi", 3);
    const int n = static_cast<int>(cfg.num("cramer.m.n", 25));
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1.0);
    const CramerProfile prof = cramer_profile(p, grid, cfg.quad_options());
    std::vector<std::vector<double>> rows;
    for (const auto& pt : prof.points)
        rows.push_back({pt.m, pt.sigma, pt.phi, pt.phi_dd, pt.s});
    out.write_csv("cramer_profile.csv", {"m", "sigma", "phi", "phi_dd", "s"}, rows);
    return 0;
}

int run_clt(const RunConfig& cfg, const ReportWriter& out) {
    const auto t0 = Clock::now();
    const PotentialSpec p = cfg.make_potential();
    const double sigma = cfg.num("clt.sigma", 0.7);
    const auto results = clt_error_curve(p, sigma, cfg.Ks, cfg.quad_options());

    std::vector<std::vector<double>> rows;
    Series err_series{"error", {}};
    for (const auto& r : results) {
        const double sqrtk = std::sqrt(static_cast<double>(r.K));
        rows.push_back({static_cast<double>(r.K), r.g0, r.error, r.error * sqrtk});
        err_series.points.emplace_back(static_cast<double>(r.K), r.error);
    }
    out.write_csv("clt_error.csv", {"K", "g0", "error", "error_sqrtK"}, rows);
    PlotSpec ps;
    ps.title = "local CLT error vs K";
    ps.x_label = "K";
    ps.y_label = "|g0 - (2*pi)^-1/2|";
    ps.style = PlotStyle::loglog;
    ps.guide_slope = -0.5;
    out.write_svg("clt_error.svg", {err_series}, ps);

    std::vector<VerdictRecord> vs;
    for (std::size_t i = 1; i < results.size(); ++i)
        vs.push_back(verdict("clt", "error_decreasing_K" + std::to_string(results[i].K),
                             results[i].error, results[i - 1].error, t0));
    const double cap = 4.0 * results.front().error *
                       std::sqrt(static_cast<double>(results.front().K));
    for (const auto& r : results)
        vs.push_back(verdict("clt", "sqrtK_bound_K" + std::to_string(r.K),
                             r.error * std::sqrt(static_cast<double>(r.K)), cap, t0));
    out.write_verdicts("clt_verdicts.ndjson", vs);
    return exit_from(vs);
}

int run_kernel(const RunConfig& cfg, const ReportWriter& out) {
    const auto t0 = Clock::now();
    const quad::Options opt = cfg.quad_options();
    std::vector<VerdictRecord> vs;

    // Kernel identity cases.
    auto gaussian_scaled = [&](double a) {
        OneDMeasure mu = OneDMeasure::normalize(
            [a](double x) { return -0.5 * a * x * x; }, Interval::whole(), opt);
        return make_kernel_measure(std::move(mu), [a](double) { return a; });
    };
    vs.push_back(verdict("kernel", "identity_gaussian",
                         kernel_identity_residual(gaussian_scaled(1.0)), 1e-5, t0));
    vs.push_back(verdict("kernel", "identity_gaussian_a0.5",
                         kernel_identity_residual(gaussian_scaled(0.5)), 1e-5, t0));
    vs.push_back(verdict("kernel", "identity_gaussian_a2",
                         kernel_identity_residual(gaussian_scaled(2.0)), 1e-5, t0));
    const PotentialSpec cos125 = catalog("cosine-perturbed", {{"beta", 1.25}});
    vs.push_back(verdict("kernel", "identity_tilted_cosine",
                         kernel_identity_residual(kernel_measure_of(cos125, 0.7, opt)),
                         1e-5, t0));

    // Covariance equivalence on randomized cases over three measures.
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    const PotentialSpec pots[3] = {catalog("gaussian"), cos125,
                                   catalog("quartic-plus-cosine")};
    for (int c = 0; c < 30; ++c) {
        const KernelMeasure km = kernel_measure_of(pots[c % 3], 0.0, opt);
        const Fn1 f = c % 2 == 0 ? random_poly(rng) : random_tanh(rng);
        const Fn1 g = c % 2 == 0 ? random_tanh(rng) : random_poly(rng);
        const double ck = covariance_kernel(km, f, g);
        const double cd = covariance_direct(km.measure, f, g);
        const double rel = std::abs(ck - cd) / std::max(std::abs(cd), 1e-12);
        vs.push_back(verdict("kernel", "cov_equiv_" + std::to_string(c), rel, 1e-6, t0));
    }
    out.write_verdicts("kernel_verdicts.ndjson", vs);
    return exit_from(vs);
}

int run_bl(const RunConfig& cfg, const ReportWriter& out) {
    const auto t0 = Clock::now();
    const quad::Options opt = cfg.quad_options();
    std::vector<VerdictRecord> vs;

    // Gaussian tightness: f = g = x saturates the bound.
    {
        Fn1 id{[](double x) { return x; }, [](double) { return 1.0; }, "x"};
        const BlVerdict b = asymmetric_bl_check(catalog("gaussian"), 0.0, id, id, opt);
        vs.push_back(verdict("bl", "gaussian_tight", std::abs(b.lhs / b.rhs - 1.0), 1e-6, t0));
    }

    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    int case_id = 0;
    for (double beta : {0.5, 1.25}) {
        const PotentialSpec p = catalog("cosine-perturbed", {{"beta", beta}});
        for (int c = 0; c < 50; ++c) {
            const Fn1 f = random_poly(rng);
            const Fn1 g = random_tanh(rng);
            const BlVerdict b = asymmetric_bl_check(p, 0.0, f, g, opt);
            vs.push_back(verdict("bl", "asymmetric_" + std::to_string(case_id++), b.lhs,
                                 b.rhs * (1 + 1e-9), t0));
        }
    }

    // Classical comparison on a convex total Hamiltonian.
    {
        const PotentialSpec q = catalog("quartic-plus-cosine", {{"a", 0.25}, {"beta", 0.5}});
        const KernelMeasure km = kernel_measure_of(q, 0.0, opt);
        Fn1 s{[](double x) { return std::sin(x); }, [](double x) { return std::cos(x); },
              "sin"};
        const ClassicalBlVerdict cb = classical_bl_check(km, s);
        vs.push_back(verdict("bl", "classical_sin", cb.var, cb.bl_bound * (1 + 1e-9), t0));
    }

    // CKP sweep.
    {
        const OneDMeasure mu = OneDMeasure::normalize(
            [](double x) { return -0.5 * x * x; }, Interval::whole(), opt);
        const CkpVerdict c1 =
            ckp_check(mu, [](double x) { return 1.0 + 0.5 * std::sin(x); });
        vs.push_back(verdict("bl", "ckp_sin", c1.l1, c1.entropy_bound * (1 + 1e-9), t0));
        std::uniform_real_distribution<double> u(0.3, 2.0);
        for (int c = 0; c < 8; ++c) {
            const double a = u(rng), x0 = u(rng) - 1.15;
            const CkpVerdict ck = ckp_check(mu, [a, x0](double x) {
                const double d = x - x0;
                return std::exp(-a * d * d);
            });
            vs.push_back(verdict("bl", "ckp_bump_" + std::to_string(c), ck.l1,
                                 ck.entropy_bound * (1 + 1e-9), t0));
        }
    }
    out.write_verdicts("bl_verdicts.ndjson", vs);
    return exit_from(vs);
}

int run_hierarchy(const RunConfig& cfg, const ReportWriter& out) {
    const auto t0 = Clock::now();
    const quad::Options opt = cfg.quad_options();
    const PotentialSpec p = cfg.make_potential();
    const double m = cfg.num("hierarchy.m", 0.0);
    std::vector<VerdictRecord> vs;
    nlohmann::json table = nlohmann::json::array();
    for (const char* name : {"constant", "sin-tilt", "exp-tilt", "product"}) {
        const FnN f = test_function(name);
        const HierarchyReport rep =
            hierarchy_suite(p, m, f, static_cast<unsigned>(cfg.seed), opt);
        table.push_back({{"f", name},
                         {"entropy_additivity_residual", rep.entropy_additivity_residual},
                         {"entropy_total", rep.entropy_total},
                         {"product_structure_residual", rep.product_structure_residual},
                         {"pythagoras_residual", rep.pythagoras_residual}});
        vs.push_back(verdict("hierarchy", std::string(name) + "_additivity",
                             rep.entropy_additivity_residual, 1e-6, t0));
        vs.push_back(verdict("hierarchy", std::string(name) + "_product",
                             rep.product_structure_residual, 1e-8, t0));
        vs.push_back(verdict("hierarchy", std::string(name) + "_pythagoras",
                             rep.pythagoras_residual, 1e-12, t0));
    }
    // Macro-gradient identity for the non-constant members.
    for (const char* name : {"sin-tilt", "exp-tilt", "product"}) {
        const double res = macro_gradient_identity(p, m, {m + 0.3, m - 0.3},
                                                   test_function(name), opt);
        vs.push_back(verdict("hierarchy", std::string(name) + "_macro_gradient", res, 1e-4, t0));
    }
    out.write_json("hierarchy_residuals.json", with_meta(cfg, table).dump(2) + "\n");
    out.write_verdicts("hierarchy_verdicts.ndjson", vs);
    return exit_from(vs);
}

int run_spectrum(const RunConfig& cfg, const ReportWriter& out) {
    const PotentialSpec p = cfg.make_potential();
    std::vector<double> ms = cfg.m_values.empty() ? std::vector<double>{0.0} : cfg.m_values;
    const auto rows_data = scaling_probe(p, cfg.Ns, ms, cfg.quad_options());
    std::vector<std::vector<double>> rows;
    double lo = kInf, hi = 0;
    for (const auto& r : rows_data) {
        rows.push_back({static_cast<double>(r.N), r.m, r.h, r.rho1, r.rho1_extrap,
                        r.rho1_times_m2, r.rho_ub});
        lo = std::min(lo, r.rho1_extrap);
        hi = std::max(hi, r.rho1_extrap);
    }
    out.write_csv("spectrum.csv", {"N", "m", "h", "rho1", "rho1_extrap", "rho1_times_m2", "rho_ub"},
                  rows);
    if (p.admissible && rows_data.size() > 1) {
        // Uniformity indicator for the sweep.
        nlohmann::json j{{"potential", p.label},
                         {"rho1_min", lo},
                         {"rho1_max", hi},
                         {"max_over_min", hi / lo}};
        out.write_json("spectrum_uniformity.json", with_meta(cfg, j).dump(2) + "\n");
    }
    return 0;
}

int run_bw_scaling(const RunConfig& cfg, const ReportWriter& out) {
    const auto t0 = Clock::now();
    const PotentialSpec p = catalog("barthe-wolff");
    std::vector<double> ms =
        cfg.m_values.empty() ? std::vector<double>{0.5, 1, 2, 4} : cfg.m_values;
    const auto rows_data = scaling_probe(p, {2}, ms, cfg.quad_options());

    std::vector<std::vector<double>> rows;
    Series scaled{"rho1*m^2", {}};
    std::vector<VerdictRecord> vs;
    const double target = kPi * kPi / 8.0;
    for (const auto& r : rows_data) {
        rows.push_back({static_cast<double>(r.N), r.m, r.h, r.rho1, r.rho1_extrap,
                        r.rho1_times_m2, r.rho_ub});
        scaled.points.emplace_back(r.m, r.rho1_times_m2);
        vs.push_back(verdict("bw-scaling", "m=" + format_float(r.m),
                             std::abs(r.rho1_times_m2 / target - 1.0), 0.02, t0));
    }
    out.write_csv("bw_scaling.csv",
                  {"N", "m", "h", "rho1", "rho1_extrap", "rho1_times_m2", "rho_ub"}, rows);
    PlotSpec ps;
    ps.title = "hard-wall gap scaling";
    ps.x_label = "m";
    ps.y_label = "rho1*m^2";
    out.write_svg("bw_scaling.svg", {scaled}, ps);
    out.write_verdicts("bw_verdicts.ndjson", vs);
    return exit_from(vs);
}

int run_report(const RunConfig& cfg, const ReportWriter& out) {
    std::size_t total = 0, failed = 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(cfg.out_dir))
        if (entry.path().extension() == ".ndjson") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    nlohmann::json suites = nlohmann::json::array();
    for (const auto& path : files) {
        std::ifstream in(path);
        std::string line;
        std::size_t file_total = 0, file_failed = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("holds")) continue;
            ++file_total;
            ++total;
            if (!j["holds"].get<bool>()) {
                ++file_failed;
                ++failed;
            }
        }
        suites.push_back({{"file", path.filename().string()},
                          {"verdicts", file_total},
                          {"failed", file_failed}});
    }
    nlohmann::json summary{{"verdicts", total}, {"failed", failed}, {"suites", suites}};
    out.write_json("report.json", with_meta(cfg, summary).dump(2) + "\n");
    return failed == 0 ? 0 : 1;
}

}  // namespace

int run(const RunConfig& cfg) {
    try {
        const ReportWriter out(cfg.out_dir, cfg.hash(), cfg.seed);
        if (cfg.command == "validate") return run_validate(cfg, out);
        if (cfg.command == "renorm") return run_renorm(cfg, out);
        if (cfg.command == "cramer") return run_cramer(cfg, out);
        if (cfg.command == "clt") return run_clt(cfg, out);
        if (cfg.command == "kernel") return run_kernel(cfg, out);
        if (cfg.command == "bl") return run_bl(cfg, out);
        if (cfg.command == "hierarchy") return run_hierarchy(cfg, out);
        if (cfg.command == "spectrum") return run_spectrum(cfg, out);
        if (cfg.command == "bw-scaling") return run_bw_scaling(cfg, out);
        if (cfg.command == "report") return run_report(cfg, out);
        std::fprintf(stderr, "unknown command: %s\n", cfg.command.c_str());
        return 2;
    } catch (const UnknownPotential& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        if (e.kind() == "ConfigFile" || e.kind() == "ConfigKey" || e.kind() == "ConfigValue") {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

}  // namespace spinlab
