#pragma once
// Symmetric eigensolvers: tridiagonal QL with implicit shifts for 1D
// generators, Lanczos with full reorthogonalization and null-space deflation
// for the multidimensional ones.

#include <functional>
#include <vector>

#include "spinlab/common.hpp"

namespace spinlab {

// Eigenvalues of a symmetric tridiagonal matrix, ascending.  off has size
// n-1 (subdiagonal).
std::vector<double> symtri_eigenvalues(std::vector<double> diag,
                                       std::vector<double> off);

struct LinOp {
    std::size_t n = 0;
    std::function<void(const std::vector<double>&, std::vector<double>&)> apply;
};

struct LanczosResult {
    double lambda_min = 0;  // smallest eigenvalue on the deflated subspace
    double lambda_max = 0;  // largest Ritz value (spectral-scale witness)
    int iterations = 0;
};

// Smallest eigenvalue of the symmetric operator restricted to the orthogonal
// complement of null_unit (a known exact null vector, kept deflated at every
// step).  rel_tol applies to the stagnation of the smallest Ritz value.
LanczosResult lanczos_smallest(const LinOp& op, const std::vector<double>& null_unit,
                               int max_iter = 400, double rel_tol = 1e-10,
                               unsigned seed = 12345);

}  // namespace spinlab
