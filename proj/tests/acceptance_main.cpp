// Acceptance suite: one check per criterion, each printing a PASS/FAIL line
// with the measured quantity and its pinned threshold.  Run all or a single
// criterion with --only N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "spinlab/covkernel.hpp"
#include "spinlab/cramer.hpp"
#include "spinlab/ensemble.hpp"
#include "spinlab/renorm.hpp"
#include "spinlab/spectral.hpp"

using namespace spinlab;

namespace {

struct Criterion {
    int id;
    const char* name;
    bool (*fn)();
};

bool report(int id, const char* name, bool ok, const std::string& detail) {
    std::printf("%s criterion %02d: %s (%s)\n", ok ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
    return ok;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const PotentialSpec& cosine125() {
    static const PotentialSpec p = catalog("cosine-perturbed", {{"beta", 1.25}});
    return p;
}

// --- 1: gaussian exactness ---------------------------------------------------
bool crit1() {
    const PotentialSpec g = catalog("gaussian");
    double worst = 0;

    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(-2.0 + 0.4 * i);
    const CramerProfile prof = cramer_profile(g, grid);
    for (const auto& pt : prof.points) {
        worst = std::max(worst, std::abs(pt.phi_dd - 1.0));
        worst = std::max(worst, std::abs(pt.s - 1.0));
    }

    const TabulatedPotential rg = renormalize(g, {-6, 6}, 257);
    for (int i = 0; i <= 64; ++i)
        worst = std::max(worst, std::abs(rg.d2(-4.0 + 8.0 * i / 64.0) - 2.0));

    const CoarseGrained cg = coarse_grained_hamiltonian(g, 0.6, 2);
    worst = std::max(worst, std::abs(cg.hbar_dd - 1.0));

    const double g0_target = 1.0 / std::sqrt(2 * kPi);
    for (int K : {2, 16, 128})
        worst = std::max(worst, std::abs(clt_density(g, 0.8, K).g0 - g0_target));

    bool ok = worst <= 1e-6;
    std::string detail = "max analytic deviation " + fmt(worst) + " <= 1e-6";

    for (int N : {2, 3}) {
        const CanonicalEnsemble e = CanonicalEnsemble::build(g, N, 0.4, N == 2 ? 96 : 48);
        double len = 0;
        for (const auto& b : e.box()) len = std::max(len, b.length());
        const SpectrumResult sr = sg_constant(e, default_spacings(N, len));
        const double dev = std::abs(sr.richardson_rho1 - 1.0);
        ok = ok && dev <= 0.01;
        detail += "; rho1(N=" + std::to_string(N) + ") dev " + fmt(dev);
    }
    return report(1, "gaussian exactness", ok, detail);
}

// --- 2: kernel identity ------------------------------------------------------
bool crit2() {
    double worst = 0;
    auto gaussian_km = [](double a) {
        OneDMeasure mu =
            OneDMeasure::normalize([a](double x) { return -0.5 * a * x * x; });
        return make_kernel_measure(std::move(mu), [a](double) { return a; });
    };
    for (double a : {1.0, 0.5, 2.0})
        worst = std::max(worst, kernel_identity_residual(gaussian_km(a)));
    worst = std::max(worst, kernel_identity_residual(kernel_measure_of(cosine125(), 0.7)));
    return report(2, "kernel identity", worst <= 1e-5,
                  "sup residual " + fmt(worst) + " <= 1e-5");
}

// --- 3: covariance equivalence ----------------------------------------------
bool crit3() {
    std::mt19937_64 rng(20120815);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> slope(0.2, 1.5);
    const PotentialSpec pots[3] = {catalog("gaussian"), cosine125(),
                                   catalog("quartic-plus-cosine")};
    double worst = 0;
    for (int c = 0; c < 30; ++c) {
        const KernelMeasure km = kernel_measure_of(pots[c % 3], 0.0);
        const double a0 = coef(rng), a1 = coef(rng), a2 = 0.5 * coef(rng),
                     a3 = 0.2 * coef(rng);
        Fn1 f{[=](double x) { return a0 + x * (a1 + x * (a2 + x * a3)); },
              [=](double x) { return a1 + x * (2 * a2 + 3 * a3 * x); }, "poly"};
        const double s = slope(rng), b = coef(rng);
        Fn1 g{[=](double x) { return std::tanh(s * x + b); },
              [=](double x) {
                  const double t = std::tanh(s * x + b);
                  return s * (1 - t * t);
              },
              "tanh"};
        const double ck = covariance_kernel(km, f, g);
        const double cd = covariance_direct(km.measure, f, g);
        worst = std::max(worst, std::abs(ck - cd) / std::max(std::abs(cd), 1e-12));
    }
    return report(3, "covariance equivalence", worst <= 1e-6,
                  "worst relative gap " + fmt(worst) + " <= 1e-6 over 30 cases");
}

// --- 4: asymmetric Brascamp-Lieb ----------------------------------------------
bool crit4() {
    Fn1 id{[](double x) { return x; }, [](double) { return 1.0; }, "x"};
    const BlVerdict tight = asymmetric_bl_check(catalog("gaussian"), 0.0, id, id);
    const double tight_dev = std::abs(tight.lhs / tight.rhs - 1.0);
    bool ok = tight_dev <= 1e-6;

    std::mt19937_64 rng(20120815);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> slope(0.2, 1.5);
    int held = 0;
    for (double beta : {0.5, 1.25}) {
        const PotentialSpec p = catalog("cosine-perturbed", {{"beta", beta}});
        for (int c = 0; c < 50; ++c) {
            const double a0 = coef(rng), a1 = coef(rng), a2 = 0.5 * coef(rng),
                         a3 = 0.2 * coef(rng);
            Fn1 f{[=](double x) { return a0 + x * (a1 + x * (a2 + x * a3)); },
                  [=](double x) { return a1 + x * (2 * a2 + 3 * a3 * x); }, "poly"};
            const double s = slope(rng), b = coef(rng);
            Fn1 g{[=](double x) { return std::tanh(s * x + b); },
                  [=](double x) {
                      const double t = std::tanh(s * x + b);
                      return s * (1 - t * t);
                  },
                  "tanh"};
            if (asymmetric_bl_check(p, 0.0, f, g).holds) ++held;
        }
    }
    ok = ok && held == 100;
    return report(4, "asymmetric Brascamp-Lieb", ok,
                  std::to_string(held) + "/100 random cases hold; gaussian tight dev " +
                      fmt(tight_dev));
}

// --- 5: coarse-graining constant ----------------------------------------------
bool crit5() {
    const PotentialSpec& p = cosine125();
    const TabulatedPotential t = renormalize(p, {-8, 8}, 513);
    double worst = 0;
    for (int i = 0; i <= 60; ++i) {
        const double m = -3.0 + 6.0 * i / 60.0;
        const double gap = t.value(m) - 2.0 * direct_Hbar2(p, m) - 0.5 * std::log(2.0);
        worst = std::max(worst, std::abs(gap));
    }
    return report(5, "R psi - 2 Hbar_2 = log(2)/2", worst <= 1e-6,
                  "max deviation " + fmt(worst) + " <= 1e-6 on [-3,3]");
}

// --- 6: convexification -------------------------------------------------------
bool crit6() {
    const auto gens = iterate(cosine125(), 6, {-12, 12}, 257);
    int first = -1;
    bool persists = false;
    std::string mins;
    for (const auto& g : gens) {
        if (g.window().lo > -3 || g.window().hi < 3) break;
        const ConvexityReport c = convexity_report(g, {-3, 3});
        mins += " M" + std::to_string(g.generation()) + ":" + fmt(c.min_d2);
        if (first < 0 && c.positive) first = g.generation();
        if (first > 0 && g.generation() == first + 1) persists = c.positive;
    }
    const bool ok = first > 0 && first <= 5 && persists;
    return report(6, "convexification within M<=5", ok,
                  "first convex M=" + std::to_string(first) + ", persists=" +
                      (persists ? "yes" : "no") + ";" + mins);
}

// --- 7: local CLT rate ----------------------------------------------------------
bool crit7() {
    const auto rs = clt_error_curve(cosine125(), 0.7, {4, 16, 64, 256});
    bool decreasing = true;
    for (std::size_t i = 1; i < rs.size(); ++i)
        decreasing = decreasing && rs[i].error < rs[i - 1].error;
    const double cap = 4.0 * rs.front().error * 2.0;
    bool envelope = true;
    std::string detail = "e_K:";
    for (const auto& r : rs) {
        envelope = envelope && r.error * std::sqrt(static_cast<double>(r.K)) <= cap;
        detail += " " + fmt(r.error);
    }
    return report(7, "CLT error rate 1/sqrt(K)", decreasing && envelope, detail);
}

// --- 8: convexification rate ----------------------------------------------------
bool crit8() {
    const PotentialSpec& p = cosine125();
    double worst_ratio = 0;
    for (double m : {-0.8, -0.3, 0.2, 0.7, 1.2}) {
        const TiltedMeasure t = solve_sigma(p, m);
        const double phi_dd = 1.0 / (t.sd * t.sd);
        double qmin = kInf, qmax = 0;
        for (int K : {2, 4, 8, 16}) {
            const CoarseGrained cg = coarse_grained_hamiltonian(p, m, K);
            const double q = K * t.sd * t.sd * std::abs(phi_dd - cg.hbar_dd);
            qmin = std::min(qmin, q);
            qmax = std::max(qmax, q);
        }
        worst_ratio = std::max(worst_ratio, qmax / qmin);
    }
    return report(8, "K s^2 |phi'' - Hbar_K''| bounded", worst_ratio <= 10.0,
                  "max/min over K " + fmt(worst_ratio) + " <= 10 at 5 m-points");
}

// --- 9: hierarchic identities ----------------------------------------------------
bool crit9() {
    const PotentialSpec& p = cosine125();
    double add = 0, prod = 0, pyth = 0, macro = 0;
    for (const char* name : {"constant", "sin-tilt", "exp-tilt", "product", "mixed-tilt"}) {
        const HierarchyReport rep = hierarchy_suite(p, 0.0, test_function(name));
        add = std::max(add, rep.entropy_additivity_residual);
        prod = std::max(prod, rep.product_structure_residual);
        pyth = std::max(pyth, rep.pythagoras_residual);
        if (std::strcmp(name, "constant") != 0)
            macro = std::max(macro, macro_gradient_identity(p, 0.0, {0.3, -0.3},
                                                            test_function(name)));
    }
    const bool ok = add <= 1e-6 && prod <= 1e-8 && pyth <= 1e-12 && macro <= 1e-4;
    return report(9, "hierarchic identities at N=4", ok,
                  "additivity " + fmt(add) + ", product " + fmt(prod) + ", pythagoras " +
                      fmt(pyth) + ", macro-gradient " + fmt(macro));
}

// --- 10: marginal equals renormalized ensemble -----------------------------------
bool crit10() {
    double worst = 0;
    for (const PotentialSpec& p : {catalog("gaussian"), cosine125()})
        for (double m : {0.0, 0.5})
            worst = std::max(worst, marginal_check(p, m));
    return report(10, "marginal = renormalized ensemble", worst <= 1e-3,
                  "sup relative density error " + fmt(worst) + " <= 1e-3");
}

// --- 11: Barthe-Wolff scaling ------------------------------------------------------
bool crit11() {
    const auto rows = scaling_probe(catalog("barthe-wolff"), {2}, {0.5, 1.0, 2.0, 4.0});
    const double target = kPi * kPi / 8.0;
    double worst = 0;
    for (const auto& r : rows)
        worst = std::max(worst, std::abs(r.rho1_times_m2 / target - 1.0));
    return report(11, "hard-wall gap scaling rho1 m^2 = pi^2/8", worst <= 0.02,
                  "max relative deviation " + fmt(worst) + " <= 0.02");
}

// --- 12: uniformity echo -------------------------------------------------------------
bool crit12() {
    const PotentialSpec& p = cosine125();
    const auto rows = scaling_probe(p, {2, 3, 4}, {-2, -1, 0, 1, 2});
    double lo = kInf, hi = 0;
    bool floors = true;
    for (const auto& r : rows) {
        lo = std::min(lo, r.rho1_extrap);
        hi = std::max(hi, r.rho1_extrap);
        floors = floors && r.rho1_extrap >= be_hs_lower_bound(p, r.N);
    }
    const bool ok = hi / lo <= 3.0 && floors;
    return report(12, "uniformity echo over N and m", ok,
                  "rho1 range [" + fmt(lo) + ", " + fmt(hi) + "], ratio " + fmt(hi / lo) +
                      " <= 3, floors " + (floors ? "hold" : "violated"));
}

// --- 13: assumption suite -------------------------------------------------------------
bool crit13() {
    const AssumptionReport rep = assumption_report(cosine125(), -3, 3, 13, 200, 48);
    double moment_max = 0;
    for (int k = 1; k <= 5; ++k)
        moment_max = std::max(moment_max, rep.moment_max[static_cast<std::size_t>(k)]);
    const bool ok = rep.s_max <= 2.0 && moment_max <= 10.0 && rep.char_decay_sup <= 10.0;
    return report(13, "moment and characteristic-function envelopes", ok,
                  "s_max " + fmt(rep.s_max) + " <= 2, moments " + fmt(moment_max) +
                      " <= 10, sup|s xi char| " + fmt(rep.char_decay_sup) + " <= 10");
}

const Criterion kCriteria[] = {
    {1, "gaussian exactness", crit1},
    {2, "kernel identity", crit2},
    {3, "covariance equivalence", crit3},
    {4, "asymmetric Brascamp-Lieb", crit4},
    {5, "coarse-graining constant", crit5},
    {6, "convexification", crit6},
    {7, "CLT rate", crit7},
    {8, "convexification rate", crit8},
    {9, "hierarchic identities", crit9},
    {10, "marginal check", crit10},
    {11, "Barthe-Wolff scaling", crit11},
    {12, "uniformity echo", crit12},
    {13, "assumption suite", crit13},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc + 0; ++i)
        if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            report(c.id, c.name, false, std::string("exception: ") + e.what());
        }
        const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::printf("      criterion %02d took %lld ms\n", c.id,
                    static_cast<long long>(dt));
        if (!ok) ++failures;
    }
    return failures;
}
