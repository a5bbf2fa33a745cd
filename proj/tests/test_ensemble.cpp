#include <doctest.h>

#include <cmath>
#include <random>

#include "spinlab/ensemble.hpp"

using namespace spinlab;

TEST_CASE("chart basis is orthonormal, zero-sum, and invertible") {
    for (int N : {2, 3, 4}) {
        const HyperplaneChart c = make_chart(N, 0.7);
        for (std::size_t j = 0; j < c.basis.size(); ++j) {
            double sum = 0;
            for (double v : c.basis[j]) sum += v;
            CHECK(std::abs(sum) < 1e-12);
            for (std::size_t k = 0; k < c.basis.size(); ++k) {
                double d = 0;
                for (int i = 0; i < N; ++i)
                    d += c.basis[j][static_cast<std::size_t>(i)] *
                         c.basis[k][static_cast<std::size_t>(i)];
                CHECK(std::abs(d - (j == k ? 1.0 : 0.0)) < 1e-12);
            }
        }
        // embed/to_chart round trip.
        Point u(static_cast<std::size_t>(N - 1));
        for (std::size_t j = 0; j < u.size(); ++j) u[j] = 0.3 * (static_cast<double>(j) - 0.8);
        const Point x = c.embed(u);
        double mean = 0;
        for (double xi : x) mean += xi;
        CHECK(mean / N == doctest::Approx(0.7).epsilon(1e-12));
        const Point u2 = c.to_chart(x);
        for (std::size_t j = 0; j < u.size(); ++j) CHECK(u2[j] == doctest::Approx(u[j]).epsilon(1e-12));
    }
}

TEST_CASE("gaussian N=2 ensemble: chart marginal is a centered gaussian of variance 1") {
    const CanonicalEnsemble e = CanonicalEnsemble::build(catalog("gaussian"), 2, 0.0, 96);
    // H(x(t)) = t^2/2 + const, so the chart density is standard normal.
    const double l0 = e.log_density_u({0.0});
    const double l1 = e.log_density_u({1.3});
    CHECK(l0 - l1 == doctest::Approx(0.5 * 1.3 * 1.3).epsilon(1e-12));
}

TEST_CASE("barthe-wolff N=2 m=1: uniform on a segment of length 2 sqrt 2") {
    const CanonicalEnsemble e = CanonicalEnsemble::build(catalog("barthe-wolff"), 2, 1.0, 64);
    const Interval b = e.box()[0];
    CHECK(b.length() == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-9));
    // Constant density on the segment.
    CHECK(e.log_density_u({0.0}) == doctest::Approx(e.log_density_u({0.9})).epsilon(1e-12));
    CHECK(e.log_density_u({2.0}) == -kInf);
}

TEST_CASE("density is permutation symmetric at random nodes") {
    const PotentialSpec p = catalog("cosine-perturbed", {{"beta", 1.25}});
    const CanonicalEnsemble e = CanonicalEnsemble::build(p, 3, 0.5, 48);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        Point u(2);
        for (int j = 0; j < 2; ++j) {
            const Interval b = e.box()[static_cast<std::size_t>(j)];
            u[static_cast<std::size_t>(j)] = b.lo + b.length() * u01(rng);
        }
        Point x = e.chart().embed(u);
        double h = 0;
        for (double xi : x) h += p.psi(xi);
        std::shuffle(x.begin(), x.end(), rng);
        double hp = 0;
        for (double xi : x) hp += p.psi(xi);
        CHECK(h == doctest::Approx(hp).epsilon(1e-12));
    }
}

TEST_CASE("build enforces grid minima and budgets") {
    const PotentialSpec g = catalog("gaussian");
    CHECK_THROWS_AS(CanonicalEnsemble::build(g, 2, 0.0, 32), Error);
    CHECK_THROWS_AS(CanonicalEnsemble::build(g, 3, 0.0, 24), Error);
    CHECK_THROWS_AS(CanonicalEnsemble::build(g, 4, 0.0, 16), Error);
    CHECK_THROWS_AS(CanonicalEnsemble::build(g, 4, 0.0, 180), GridBudgetExceeded);
    CHECK_THROWS_AS(CanonicalEnsemble::build(catalog("barthe-wolff"), 2, -1.0, 64),
                    DegenerateDensity);
}

TEST_CASE("functionals: constants give zero entropy, fisher, variance") {
    const CanonicalEnsemble e = CanonicalEnsemble::build(catalog("gaussian"), 2, 0.0, 64);
    const FunctionalReport r = functionals(e, test_function("constant"));
    CHECK(std::abs(r.entropy) < 1e-14);
    CHECK(r.fisher == 0.0);
    CHECK(std::abs(r.variance) < 1e-14);
    CHECK(r.dirichlet == 0.0);
}

TEST_CASE("functionals: gaussian exponential tilts give lsi quotient 1") {
    const CanonicalEnsemble e = CanonicalEnsemble::build(catalog("gaussian"), 2, 0.0, 96);
    const auto basis = e.chart().basis[0];
    for (double eps : {0.05, 0.3, 1.0}) {
        FnN f;
        f.value = [eps, basis](const Point& x) {
            return std::exp(eps * (basis[0] * x[0] + basis[1] * x[1]));
        };
        f.grad = [eps, basis](const Point& x) {
            const double fv = std::exp(eps * (basis[0] * x[0] + basis[1] * x[1]));
            return Point{eps * fv * basis[0], eps * fv * basis[1]};
        };
        const FunctionalReport r = functionals(e, f);
        CHECK(r.lsi_quotient == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(r.entropy > 0);
    }
}

TEST_CASE("functionals reject non-positive test functions") {
    const CanonicalEnsemble e = CanonicalEnsemble::build(catalog("gaussian"), 2, 0.0, 64);
    FnN bad;
    bad.value = [](const Point& x) { return x[0]; };
    bad.grad = [](const Point& x) { return Point(x.size(), 1.0); };
    CHECK_THROWS_AS(functionals(e, bad), NonPositiveFunction);
}

TEST_CASE("coarse_grain: arithmetic, diagonal preservation, mean preservation") {
    CHECK(coarse_grain({1, 3, 5, 7}) == Point{2, 6});
    CHECK(coarse_grain({0.4, 0.4, 0.4, 0.4}) == Point{0.4, 0.4});
    CHECK_THROWS_AS(coarse_grain({1, 2, 3}), OddDimension);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 100; ++t) {
        Point x(4);
        for (double& xi : x) xi = u(rng);
        const Point y = coarse_grain(x);
        const double mx = (x[0] + x[1] + x[2] + x[3]) / 4;
        const double my = (y[0] + y[1]) / 2;
        CHECK(mx == doctest::Approx(my).epsilon(1e-12));
    }
}

TEST_CASE("P operator algebra: 2PP^t = id_Y, 2P^tP idempotent symmetric") {
    // 2 P P^t y = y.
    for (const Point y : {Point{1.0, -2.0}, Point{0.3, 0.7}}) {
        const Point x = coarse_grain_adjoint(y, 4);
        Point twice = coarse_grain(x);
        for (double& v : twice) v *= 2.0;
        CHECK(std::abs(twice[0] - y[0]) < 1e-12);
        CHECK(std::abs(twice[1] - y[1]) < 1e-12);
    }
    // 2 P^t P as a matrix: apply twice equals once; symmetric by blocks.
    auto proj = [](const Point& x) {
        Point y = coarse_grain(x);
        Point out = coarse_grain_adjoint(y, 4);
        for (double& v : out) v *= 2.0;
        return out;
    };
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
        Point x(4);
        for (double& xi : x) xi = u(rng);
        const Point p1 = proj(x);
        const Point p2 = proj(p1);
        for (int i = 0; i < 4; ++i)
            CHECK(p2[static_cast<std::size_t>(i)] ==
                  doctest::Approx(p1[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
}

TEST_CASE("marginal of mu_{4,m} equals the renormalized 2-site ensemble") {
    CHECK(marginal_check(catalog("gaussian"), 0.0) < 1e-4);
    CHECK(marginal_check(catalog("cosine-perturbed", {{"beta", 1.25}}), 0.0) < 1e-3);
}

TEST_CASE("hierarchy suite: constant function trivially zero, tilts to quadrature accuracy") {
    const PotentialSpec p = catalog("cosine-perturbed", {{"beta", 1.25}});
    const HierarchyReport c = hierarchy_suite(p, 0.0, test_function("constant"));
    CHECK(std::abs(c.entropy_total) < 1e-12);
    CHECK(c.entropy_additivity_residual < 1e-12);

    const HierarchyReport s = hierarchy_suite(p, 0.0, test_function("sin-tilt"));
    CHECK(s.entropy_additivity_residual < 1e-6);
    CHECK(s.product_structure_residual < 1e-8);
    CHECK(s.pythagoras_residual < 1e-12);
    CHECK(s.entropy_total > 0);

    // A tilt coupling coordinates from different blocks.
    const HierarchyReport mx = hierarchy_suite(p, 0.0, test_function("mixed-tilt"));
    CHECK(mx.entropy_additivity_residual < 1e-6);
    CHECK(mx.pythagoras_residual < 1e-12);
}

TEST_CASE("macro gradient identity") {
    const PotentialSpec g = catalog("gaussian");
    CHECK(macro_gradient_identity(g, 0.0, {0.0, 0.0}, test_function("constant")) < 1e-12);
    // Linear f has a closed-form gaussian covariance term.
    FnN lin;
    lin.value = [](const Point& x) { return x[0] + 0.5 * x[2]; };
    lin.grad = [](const Point& x) {
        Point gr(x.size(), 0.0);
        gr[0] = 1.0;
        gr[2] = 0.5;
        return gr;
    };
    CHECK(macro_gradient_identity(g, 0.0, {0.4, -0.4}, lin) < 1e-6);
    const PotentialSpec p = catalog("cosine-perturbed", {{"beta", 1.25}});
    CHECK(macro_gradient_identity(p, 0.0, {0.3, -0.3}, test_function("exp-tilt")) < 1e-4);
}

TEST_CASE("be_hs_lower_bound arithmetic") {
    CHECK(be_hs_lower_bound(catalog("gaussian"), 2) == doctest::Approx(1.0));
    CHECK(be_hs_lower_bound(catalog("gaussian"), 4) == doctest::Approx(1.0));
    const PotentialSpec p = catalog("cosine-perturbed", {{"beta", 1.25}});
    CHECK(be_hs_lower_bound(p, 2) == doctest::Approx(std::exp(-5.0)).epsilon(1e-3));
    CHECK(be_hs_lower_bound(p, 4) == doctest::Approx(std::exp(-10.0)).epsilon(1e-3));
    CHECK_THROWS_AS(be_hs_lower_bound(catalog("barthe-wolff"), 2), NonAdmissible);
}

TEST_CASE("entropy vs fisher respects the Holley-Stroock floor on the test family") {
    const PotentialSpec p = catalog("cosine-perturbed", {{"beta", 0.5}});
    const double rho_lb = be_hs_lower_bound(p, 3);
    const CanonicalEnsemble e = CanonicalEnsemble::build(p, 3, 0.0, 48);
    for (const char* name : {"sin-tilt", "exp-tilt", "product", "mixed-tilt"}) {
        const FunctionalReport r = functionals(e, test_function(name));
        CHECK(r.entropy <= r.fisher / (2 * rho_lb) * (1 + 1e-9));
    }
}
