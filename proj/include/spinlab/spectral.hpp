#pragma once
// Spectral-gap constants of mu_{N,m} from a finite-volume conductance
// discretization of the Dirichlet form on the chart box, LSI upper bounds
// from trial families, and the hard-wall scaling probe.

#include <utility>
#include <vector>

#include "spinlab/ensemble.hpp"

namespace spinlab {

// Conductance grid at one spacing: cell-centered uniform nodes per axis,
// edge weights mu(midpoint)/h^2, mass mu(node).  Constants are annihilated
// exactly, so lambda_0 = 0 up to roundoff.
class GeneratorGrid {
  public:
    // box_offset translates every axis interval; the gap must not care.
    GeneratorGrid(const CanonicalEnsemble& e, double spacing, double box_offset = 0.0);

    std::size_t unknowns() const { return mass_.size(); }
    int dim() const { return static_cast<int>(counts_.size()); }
    double spacing(int axis) const { return h_[static_cast<std::size_t>(axis)]; }

    // Smallest nonzero eigenvalue of the generalized problem A f = lambda M f.
    double solve_gap(double* lambda0_residual = nullptr,
                     double* lambda_max = nullptr) const;

    // Discrete forms for variational tests (f given per node).
    double dirichlet(const std::vector<double>& f) const;
    double variance(const std::vector<double>& f) const;

  private:
    void matvec(const std::vector<double>& f, std::vector<double>& out) const;

    std::vector<std::size_t> counts_;
    std::vector<double> h_;
    std::vector<double> mass_;          // exp(logdens - shift) per node
    std::vector<double> inv_sqrt_mass_;
    // Per axis: (u, v, w) edges in flat indexing.
    struct Edge {
        std::uint32_t u, v;
        double w;
    };
    std::vector<Edge> edges_;
};

struct SpectrumResult {
    double rho1 = 0;             // gap at the finer spacing
    double rho1_coarse = 0;      // gap at the coarser spacing
    double richardson_rho1 = 0;  // h^2 extrapolation of the two
    double eigen_gap_check = 0;  // ||B u0|| residual of the constant mode
    double grid_spacing = 0;     // finer spacing used
    std::size_t unknowns = 0;
};

SpectrumResult sg_constant(const CanonicalEnsemble& e,
                           std::pair<double, double> spacings);

// Minimum of fisher/(2 entropy) over exp(eps * g) trials, g linear and
// sinusoidal in each chart coordinate, eps scanned over amplitudes.
double lsi_upper_bound(const CanonicalEnsemble& e,
                       const std::string& family = "default");

struct ScalingRow {
    int N = 0;
    double m = 0;
    double h = 0;
    double rho1 = 0;
    double rho1_extrap = 0;
    double rho1_times_m2 = 0;
    double rho_ub = 0;
};

std::vector<ScalingRow> scaling_probe(const PotentialSpec& p,
                                      const std::vector<int>& Ns,
                                      const std::vector<double>& m_grid,
                                      quad::Options opt = {});

// Spacing pair used by the sweep for a box of the given maximal length.
std::pair<double, double> default_spacings(int N, double box_length);

}  // namespace spinlab
