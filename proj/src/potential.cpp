#include "spinlab/potential.hpp"

#include <algorithm>
#include <cmath>

namespace spinlab {

namespace {

constexpr double kFdStep = 1e-4;  // central-difference step for dpsi''

double param(const std::map<std::string, double>& params, const std::string& key,
             double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

}  // namespace

EvalResult eval(const PotentialSpec& p, double x) {
    if (!p.support.contains_interior(x))
        throw OutOfSupport(p.label + " evaluated at x=" + std::to_string(x));
    const double value = p.convex(x) + p.perturbation(x);
    const double d1 = p.convex_d1(x) + p.perturbation_d1(x);
    // Step shrinks near a hard wall so both probe points stay inside.
    double h = kFdStep;
    if (std::isfinite(p.support.lo)) h = std::min(h, 0.5 * (x - p.support.lo));
    if (std::isfinite(p.support.hi)) h = std::min(h, 0.5 * (p.support.hi - x));
    const double ddpsi = (p.perturbation_d1(x + h) - p.perturbation_d1(x - h)) / (2 * h);
    return {value, d1, p.convex_d2(x) + ddpsi};
}

PotentialSpec catalog(const std::string& name,
                      const std::map<std::string, double>& params) {
    PotentialSpec p;
    if (name == "gaussian") {
        p.convex = [](double x) { return 0.5 * x * x; };
        p.convex_d1 = [](double x) { return x; };
        p.convex_d2 = [](double) { return 1.0; };
        p.perturbation = [](double) { return 0.0; };
        p.perturbation_d1 = [](double) { return 0.0; };
        p.label = "gaussian";
        return p;
    }
    if (name == "cosine-perturbed") {
        const double beta = param(params, "beta", 1.25);
        p.convex = [](double x) { return 0.5 * x * x; };
        p.convex_d1 = [](double x) { return x; };
        p.convex_d2 = [](double) { return 1.0; };
        p.perturbation = [beta](double x) { return beta * std::cos(x); };
        p.perturbation_d1 = [beta](double x) { return -beta * std::sin(x); };
        p.label = "cosine-perturbed(" + std::to_string(beta) + ")";
        return p;
    }
    if (name == "quartic-plus-cosine") {
        const double a = param(params, "a", 0.25);
        const double beta = param(params, "beta", 1.0);
        p.convex = [a](double x) { return a * x * x * x * x + 0.5 * x * x; };
        p.convex_d1 = [a](double x) { return 4 * a * x * x * x + x; };
        p.convex_d2 = [a](double x) { return 12 * a * x * x + 1.0; };
        p.perturbation = [beta](double x) { return beta * std::cos(x); };
        p.perturbation_d1 = [beta](double x) { return -beta * std::sin(x); };
        p.label = "quartic-plus-cosine(" + std::to_string(a) + "," + std::to_string(beta) + ")";
        return p;
    }
    if (name == "barthe-wolff") {
        // psi(x) = x on (0, inf): linear, zero curvature, hard wall at 0.
        p.convex = [](double x) { return x; };
        p.convex_d1 = [](double) { return 1.0; };
        p.convex_d2 = [](double) { return 0.0; };
        p.perturbation = [](double) { return 0.0; };
        p.perturbation_d1 = [](double) { return 0.0; };
        p.support = {0.0, kInf};
        p.label = "barthe-wolff";
        p.admissible = false;
        return p;
    }
    throw UnknownPotential(name);
}

SplittingReport validate_splitting(const PotentialSpec& p, Interval window, int n) {
    if (n < 64) throw Error("GridTooCoarse", "validate_splitting needs n >= 64");
    if (!(window.lo >= p.support.lo && window.hi <= p.support.hi))
        throw OutOfSupport("validation window exceeds support of " + p.label);
    SplittingReport rep;
    rep.grid_window = window;
    double c0 = kInf, b0 = 0, b1 = 0;
    double dmin = kInf, dmax = -kInf;
    for (int i = 0; i < n; ++i) {
        const double x = window.lo + (window.hi - window.lo) * i / (n - 1.0);
        c0 = std::min(c0, p.convex_d2(x));
        const double d = p.perturbation(x);
        b0 = std::max(b0, std::abs(d));
        b1 = std::max(b1, std::abs(p.perturbation_d1(x)));
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    rep.c0_observed = c0;
    rep.b0_observed = b0;
    rep.b1_observed = b1;
    rep.osc_delta = dmax - dmin;
    rep.admissible = c0 > 0 && std::isfinite(b0) && std::isfinite(b1);
    return rep;
}

}  // namespace spinlab
