#pragma once
// Single-site potentials with an explicit convex/perturbation splitting
// psi = psi_c + dpsi, plus grid validation of the splitting constants.

#include <functional>
#include <map>
#include <string>

#include "spinlab/common.hpp"

namespace spinlab {

using RealFn = std::function<double(double)>;

// Immutable after construction; all operations are pure, safe to share.
struct PotentialSpec {
    RealFn convex;        // psi_c
    RealFn convex_d1;     // psi_c'
    RealFn convex_d2;     // psi_c''
    RealFn perturbation;     // dpsi (bounded)
    RealFn perturbation_d1;  // dpsi' (bounded)
    Interval support = Interval::whole();
    std::string label;
    bool admissible = true;  // false for hard-wall/linear probes (barthe-wolff)

    double psi(double x) const { return convex(x) + perturbation(x); }
};

struct EvalResult {
    double value;
    double d1;
    double d2;
};

struct SplittingReport {
    double c0_observed = 0;   // min psi_c'' on the grid
    double b0_observed = 0;   // max |dpsi|
    double b1_observed = 0;   // max |dpsi'|
    double osc_delta = 0;     // sup dpsi - inf dpsi
    Interval grid_window;
    bool admissible = false;  // c0 > 0 and b0, b1 finite
};

// Value and both derivatives at x.  dpsi'' is never required analytically;
// it is estimated by central differences of dpsi' with step 1e-4.
EvalResult eval(const PotentialSpec& p, double x);

// Named potential instances referenced from configs as {name, params}.
// Names: gaussian, cosine-perturbed (param beta), quartic-plus-cosine
// (params a, beta), barthe-wolff.
PotentialSpec catalog(const std::string& name,
                      const std::map<std::string, double>& params = {});

// Observed splitting constants over an n-point uniform grid in window.
SplittingReport validate_splitting(const PotentialSpec& p, Interval window, int n);

}  // namespace spinlab
