#pragma once
// Pair renormalization of single-site potentials:
//   (R psi)(y) = -log Integral exp(-psi(y+z) - psi(y-z)) dz
// tabulated on cubic splines, iterated generation by generation, with
// splitting propagation and convexity diagnostics.

#include <vector>

#include "spinlab/measure1d.hpp"
#include "spinlab/potential.hpp"
#include "spinlab/spline.hpp"

namespace spinlab {

class TabulatedPotential {
  public:
    TabulatedPotential() = default;
    TabulatedPotential(CubicSpline spline, Interval window, int generation,
                       double fiber_sd);

    // Interpolated value and the interpolant's analytic derivatives; queries
    // must fall inside the reliable window.
    double value(double y) const;
    double d1(double y) const;
    double d2(double y) const;

    Interval window() const { return window_; }
    int generation() const { return generation_; }
    double fiber_sd() const { return fiber_sd_; }
    const CubicSpline& spline() const { return spline_; }

  private:
    CubicSpline spline_;
    Interval window_;     // reliable query window (knots extend past it)
    int generation_ = 0;
    double fiber_sd_ = 0;  // sd of the fiber measure at the window center
};

struct RenormSplitting {
    CubicSpline convex_part_tab;   // psi_bar_c = -(1/2) log of the psi_c-only fiber integral
    CubicSpline perturbation_tab;  // dpsi_bar  = (1/2) R psi - psi_bar_c
    double sup_abs_perturbation = 0;
    double sup_abs_perturbation_d1 = 0;
};

struct ConvexityReport {
    double min_d2 = 0;
    double argmin = 0;
    bool positive = false;
};

// One knot of R psi by direct quadrature (also the oracle used in tests).
double renorm_value(const RealFn& psi, Interval psi_window, double y,
                    quad::Options opt = {});

// Tabulates R psi over window on n knots.  The integrand at each knot is
// normalized via measure1d machinery; the table carries knots slightly beyond
// window so the natural-spline boundary does not pollute queries inside it.
// 513 knots keep the spline within 1e-7 of a direct re-evaluation on the
// default window.
TabulatedPotential renormalize(const PotentialSpec& p, Interval window = {-12, 12},
                               int n = 513, quad::Options opt = {});
TabulatedPotential renormalize(const TabulatedPotential& parent, Interval window,
                               int n = 513, quad::Options opt = {});

// Generations 1..M; each generation's reliable window shrinks by 6 fiber
// standard deviations per side so child knots integrate over a fully decayed
// fiber.  Throws WindowExhausted when the window falls below 4 units.
std::vector<TabulatedPotential> iterate(const PotentialSpec& p, int M,
                                        Interval window = {-12, 12}, int n = 513,
                                        quad::Options opt = {});

// Splits (1/2) R psi = psi_bar_c + dpsi_bar, with psi_bar_c built from the
// convex part alone.  R psi = 2 psi_bar_c + 2 dpsi_bar.
RenormSplitting renorm_splitting(const PotentialSpec& p, Interval window = {-12, 12},
                                 int n = 513, quad::Options opt = {});

// Minimum of the spline second derivative over a 2048-point scan plus local
// golden-section refinement.
ConvexityReport convexity_report(const TabulatedPotential& t, Interval window);

}  // namespace spinlab
