#pragma once
// Covariance kernel K_mu(x,y) = M(min)(1-M)(max) built from the CDF, the
// kernel identity Integral K_mu(x,y) H''(y) dy = mu(x), and the classical and
// asymmetric Brascamp-Lieb inequalities on one-dimensional Gibbs measures.

#include "spinlab/measure1d.hpp"
#include "spinlab/potential.hpp"

namespace spinlab {

// Differentiable test function.
struct Fn1 {
    RealFn value;
    RealFn d1;
    std::string label;
};

struct KernelMeasure {
    OneDMeasure measure;
    RealFn hamiltonian_dd;  // H'' of the Gibbs weight exp(-H)
};

KernelMeasure make_kernel_measure(OneDMeasure mu, RealFn h_dd);

// Kernel measure of a tilted potential exp(sigma x - psi)/Z; H'' = psi''
// with the perturbation part finite-differenced.
KernelMeasure kernel_measure_of(const PotentialSpec& p, double sigma = 0,
                                quad::Options opt = {});

double kernel_eval(const KernelMeasure& km, double x, double y);

// cov(f,g) through the kernel representation (cumulative-integral form, no
// double loop) and by direct two-pass quadrature.
double covariance_kernel(const KernelMeasure& km, const Fn1& f, const Fn1& g);
double covariance_direct(const OneDMeasure& mu, const Fn1& f, const Fn1& g);

// sup over 64 probes of |Integral K(x,y) H''(y) dy - mu(x)| / max mu.
double kernel_identity_residual(const KernelMeasure& km);

struct BlVerdict {
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

// |cov_nu(f,g)| <= exp(3 osc dpsi) sup|g'/psi_c''| Integral |f'| dnu for the
// tilted measure nu = exp(sigma x - psi)/Z.
BlVerdict asymmetric_bl_check(const PotentialSpec& p, double sigma, const Fn1& f,
                              const Fn1& g, quad::Options opt = {});

struct ClassicalBlVerdict {
    double var = 0;
    double bl_bound = 0;  // Integral |f'|^2 / H'' dmu
    bool holds = false;
};

ClassicalBlVerdict classical_bl_check(const KernelMeasure& km, const Fn1& f);

struct CkpVerdict {
    double l1 = 0;             // Integral |f - fbar| dmu
    double entropy_bound = 0;  // fbar sqrt(2 Integral (f/fbar) log(f/fbar) dmu)
    bool holds = false;
};

CkpVerdict ckp_check(const OneDMeasure& mu, const RealFn& f);

}  // namespace spinlab
