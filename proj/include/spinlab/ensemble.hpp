#pragma once
// Canonical ensembles mu_{N,m} on the mean-spin hyperplane X_{N,m} for
// N in {2,3,4}: orthonormal charts, tensorized quadrature grids, entropy /
// Fisher / Dirichlet functionals, pair coarse-graining and the hierarchic
// identity checks.

#include <vector>

#include "spinlab/measure1d.hpp"
#include "spinlab/potential.hpp"

namespace spinlab {

using Point = std::vector<double>;

// Function on R^N with analytic gradient, restricted to the hyperplane by
// extending it constant along the normal direction.
struct FnN {
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> grad;
    std::string label;
};

struct HyperplaneChart {
    int N = 2;
    double m = 0;
    Point origin;                    // (m, ..., m)
    std::vector<Point> basis;        // N-1 orthonormal zero-sum vectors

    Point embed(const Point& u) const;      // origin + sum u_j basis_j
    Point to_chart(const Point& x) const;   // basis^T (x - origin)
    // Tangential projection of an R^N gradient expressed in chart coords.
    Point chart_gradient(const Point& grad_xn) const;
};

HyperplaneChart make_chart(int N, double m);

class CanonicalEnsemble {
  public:
    // Tensorized Gauss-Legendre grid on the chart box where the density
    // exceeds exp(-log_drop) of its max; hard walls clip the box.
    static CanonicalEnsemble build(const PotentialSpec& p, int N, double m,
                                   int nodes_per_dim, quad::Options opt = {});

    const PotentialSpec& potential() const { return potential_; }
    const HyperplaneChart& chart() const { return chart_; }
    int dim() const { return chart_.N - 1; }
    const std::vector<Interval>& box() const { return box_; }
    double log_normalizer() const { return log_normalizer_; }

    // log of exp(-H(x(u))), -inf outside the support; no normalization.
    double log_density_u(const Point& u) const;

    // Sum of w(node) * fn(x, chart_grad_of?..) over the grid; used by the
    // functionals below and by tests.
    template <typename Fn>
    void for_each_node(Fn&& fn) const {
        const std::size_t total = node_logw_.size();
        Point u(static_cast<std::size_t>(dim()));
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rest = flat;
            for (int j = dim() - 1; j >= 0; --j) {
                const std::size_t k = rest % axis_nodes_[j].size();
                rest /= axis_nodes_[j].size();
                u[static_cast<std::size_t>(j)] = axis_nodes_[j][k];
            }
            fn(u, node_logw_[flat]);
        }
    }

    double max_log_density() const { return log_max_; }

  private:
    PotentialSpec potential_;
    HyperplaneChart chart_;
    std::vector<Interval> box_;
    std::vector<std::vector<double>> axis_nodes_, axis_weights_;
    std::vector<double> node_logw_;  // logdens(node) + log(prod axis weights)
    double log_max_ = 0;             // max logdens over nodes
    double log_normalizer_ = 0;
};

struct FunctionalReport {
    double entropy = 0;
    double fisher = 0;
    double variance = 0;
    double dirichlet = 0;
    double lsi_quotient = 0;  // fisher / (2 entropy)
    double sg_quotient = 0;   // dirichlet / variance
};

FunctionalReport functionals(const CanonicalEnsemble& e, const FnN& f);

// Pair means y_i = (x_{2i-1} + x_{2i})/2; throws OddDimension.
Point coarse_grain(const Point& x);
// Adjoint w.r.t. the standard inner products: (P^t y)_{2i-1} = y_i / 2.
Point coarse_grain_adjoint(const Point& y, int N);

// sup relative error between the fiber-integrated marginal of mu_{4,m} and
// the 2-site ensemble built from the tabulated R psi, over the y-grid where
// the marginal exceeds 1e-6 of its max.
double marginal_check(const PotentialSpec& p, double m, quad::Options opt = {});

struct HierarchyReport {
    double entropy_additivity_residual = 0;
    double entropy_total = 0;              // Ent_{mu_{4,m}}(f)
    double product_structure_residual = 0; // relative, at random fiber points
    double pythagoras_residual = 0;        // gradient split, random points
};

// Identity checks at N=4: (a) entropy additivity over the disintegration,
// (b) conditional product structure on fibers, (c) orthogonal gradient split.
HierarchyReport hierarchy_suite(const PotentialSpec& p, double m, const FnN& f,
                                unsigned seed = 20120815, quad::Options opt = {});

// Residual of: Int P grad f mu(dx|y) = (1/2) grad fbar(y) + P cov(f, grad H),
// at a point y of X_{2,m} (all gradients tangential).
double macro_gradient_identity(const PotentialSpec& p, double m, const Point& y,
                               const FnN& f, quad::Options opt = {});

// Bakry-Emery x Holley-Stroock floor: c0_observed * exp(-N * osc dpsi).
double be_hs_lower_bound(const PotentialSpec& p, int N);

// Named test functions for the hierarchy suites: constant, sin-tilt,
// exp-tilt, product.
FnN test_function(const std::string& name);

}  // namespace spinlab
