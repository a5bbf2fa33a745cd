#pragma once
// Exponential tilting mu^sigma = exp(-phi*(sigma) + sigma x - psi(x)) dx,
// the Legendre/Cramer transform phi, local-CLT densities g_{K,sigma}(0) via
// characteristic-function powers, and the coarse-grained Hamiltonian.

#include <vector>

#include "spinlab/measure1d.hpp"
#include "spinlab/potential.hpp"

namespace spinlab {

struct TiltedMeasure {
    double sigma = 0;
    double log_phi_star = 0;  // phi*(sigma) = log Z(sigma)
    double mean = 0;          // m
    double sd = 0;            // s
    std::vector<double> abs_normalized;     // <|x_hat|^k>, k <= 5
    std::vector<double> signed_normalized;  // <x_hat^k>,  k <= 5
    OneDMeasure measure;
};

struct CramerPoint {
    double m = 0;
    double sigma = 0;
    double phi = 0;      // phi(m) = sigma m - phi*(sigma)
    double phi_dd = 0;   // 1/s^2
    double s = 0;
    double s_dm = 0;     // ds/dm  (central differences)
    double s_dmm = 0;    // d^2 s/dm^2
    double res_dm_dsigma = 0;   // |dm/dsigma - s^2|
    double res_ds2_dsigma = 0;  // |ds^2/dsigma - s^3 <x_hat^3>|
};

struct CramerProfile {
    std::vector<CramerPoint> points;
};

struct CltResult {
    int K = 0;
    double sigma = 0;
    double g0 = 0;            // g_{K,sigma}(0)
    double error = 0;         // |g0 - 1/sqrt(2 pi)|
    std::size_t xi_budget = 0;  // Fourier nodes consumed
    double h_expansion_c = 0;   // fitted C in |h(xi) - xi^2/2| <= C |xi|^3
    double lambda_witness = 0;  // max |char| sampled outside |xi_hat| < 1/2
};

struct CoarseGrained {
    double hbar = 0;
    double hbar_dd = 0;
};

// phi*(sigma) = log Integral exp(sigma x - psi(x)) dx.
double phi_star(const PotentialSpec& p, double sigma, quad::Options opt = {});

// Tilted measure at a given field strength, with normalized moments k <= 5.
TiltedMeasure tilt(const PotentialSpec& p, double sigma, quad::Options opt = {});

// Newton on sigma -> mean(mu^sigma) - m using dm/dsigma = s^2.
TiltedMeasure solve_sigma(const PotentialSpec& p, double m, double sigma_seed = 0,
                          quad::Options opt = {});

CramerProfile cramer_profile(const PotentialSpec& p, const std::vector<double>& m_grid,
                             quad::Options opt = {});

// g_{K,sigma}(0) = (1/2pi) Integral <exp(i x_hat xi/sqrt(K))>^K d xi.
CltResult clt_density(const PotentialSpec& p, double sigma, int K,
                      quad::Options opt = {});

std::vector<CltResult> clt_error_curve(const PotentialSpec& p, double sigma,
                                       const std::vector<int>& Ks,
                                       quad::Options opt = {});

// Hbar_K(m) = phi(m) - (1/K)(log g_{K,sigma(m)}(0) - log s); second derivative
// by a 5-point stencil with step 1e-2 s.
CoarseGrained coarse_grained_hamiltonian(const PotentialSpec& p, double m, int K,
                                         quad::Options opt = {});

// Hbar_2 directly from the fiber integral:
//   Hbar_2(m) = -(1/2) log( sqrt(2) Integral exp(-psi(m+u) - psi(m-u)) du ).
double direct_Hbar2(const PotentialSpec& p, double m, quad::Options opt = {});

// Fitted C in |h(xi) - xi^2/2| <= C |xi|^3 over 0 < |xi| <= window, where
// h = -Log of the normalized characteristic function.
double h_expansion_constant(const TiltedMeasure& t, double window);

struct AssumptionReport {
    double s_max = 0;                       // sup s over the sigma range
    std::vector<double> moment_max;         // sup <|x_hat|^k>, k <= 5
    double char_decay_sup = 0;              // sup |s xi char(xi)| over the xi grid
    double sigma_lo = 0, sigma_hi = 0;
};

// Numerical form of the moment/characteristic-function assumptions over the
// sigma range that covers means in [m_lo, m_hi].
AssumptionReport assumption_report(const PotentialSpec& p, double m_lo, double m_hi,
                                   int m_points = 13, double xi_max = 200,
                                   int xi_points = 57, quad::Options opt = {});

}  // namespace spinlab
