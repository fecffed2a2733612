#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cylhardy/closedform.hpp"
#include "cylhardy/rayleigh1d.hpp"

using namespace cylhardy;

namespace {

DiscreteProfile constant_profile(const ThetaMesh& mesh, double v = 1.0) {
    DiscreteProfile phi;
    phi.mesh = mesh;
    phi.values.assign(mesh.nodes.size(), v);
    return phi;
}

}  // namespace

TEST_CASE("mesh construction and refinement") {
    const ThetaMesh m = ThetaMesh::build(1e-8, 64);
    CHECK(m.cells() == 64);
    CHECK(m.nodes.front() == 0.0);
    CHECK(m.nodes.back() == doctest::Approx(M_PI / 2).epsilon(1e-15));
    CHECK(m.nodes[1] == doctest::Approx(1e-8).epsilon(1e-12));
    for (size_t i = 1; i < m.nodes.size(); ++i) CHECK(m.nodes[i] > m.nodes[i - 1]);

    const ThetaMesh r = m.refined();
    CHECK(r.cells() == 128);
    CHECK(r.theta_min == doctest::Approx(5e-9).epsilon(1e-12));

    CHECK_THROWS_AS(ThetaMesh::build(1e-8, 8), std::invalid_argument);
    CHECK_THROWS_AS(ThetaMesh::build(1e-3, 64), std::invalid_argument);
    CHECK_THROWS_AS(ThetaMesh::build(0.0, 64), std::invalid_argument);
}

TEST_CASE("quotient of the constant profile on the bottom line") {
    // (d=3,k=2,p=2,a=1,b=1,gamma=1), phi = 1:
    //   num = h_b^2 B(2,1)-moment, den = sin^0-moment; ratio = 0.125
    const ProblemParams q{3, 2, 2.0, 1.0, 1.0, 1.0};
    const QuotientBreakdown qb =
        eval_quotient(q, constant_profile(ThetaMesh::build(1e-8, 128)));
    CHECK(qb.ratio == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(qb.numerator > 0.0);
    CHECK(qb.denominator > 0.0);
}

TEST_CASE("gradient matches finite differences") {
    const ProblemParams q{3, 2, 2.5, 1.0, 0.5, 1.0};
    const ThetaMesh mesh = ThetaMesh::build(1e-5, 16);
    DiscreteProfile phi = constant_profile(mesh);
    for (size_t i = 0; i < phi.values.size(); ++i)
        phi.values[i] = 1.0 + 0.3 * std::sin(1.7 * i);

    const GradientResult g = eval_gradient(q, phi);
    const double base = eval_quotient(q, phi).ratio;
    const double h = 1e-6;
    for (size_t i = 2; i < phi.values.size(); i += 5) {
        DiscreteProfile pp = phi;
        pp.values[i] += h;
        DiscreteProfile pm = phi;
        pm.values[i] -= h;
        const double fd =
            (eval_quotient(q, pp).ratio - eval_quotient(q, pm).ratio) / (2.0 * h);
        CHECK(g.grad[i] == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK(base > 0.0);
}

TEST_CASE("p = 2 minimizer: quasi-spherical exactness at every level") {
    // gamma = p + b: the constant profile is the exact minimizer, so every
    // nested trial space gives exactly h_b^p
    const ProblemParams q{3, 2, 2.0, 1.0, 0.5, 2.5};
    ThetaMesh mesh = ThetaMesh::build(1e-8, 64);
    for (int l = 0; l < 3; ++l) {
        const MinimizeResult mr = minimize_p2(q, mesh);
        CHECK(mr.value == doctest::Approx(0.5625).epsilon(1e-11));
        CHECK(mr.converged);
        mesh = mesh.refined();
    }
    CHECK_THROWS_AS(minimize_p2({3, 2, 3.0, 1.0, 1.0, 4.0}, mesh), std::invalid_argument);
}

TEST_CASE("p = 2 minimizer: mesh-nesting monotonicity on the bottom line") {
    const ProblemParams q{3, 2, 2.0, 1.0, 1.0, 1.0};
    ThetaMesh mesh = ThetaMesh::build(1e-8, 64);
    double prev = minimize_p2(q, mesh).value;
    for (int l = 0; l < 2; ++l) {
        mesh = mesh.refined();
        const double cur = minimize_p2(q, mesh).value;
        CHECK(cur <= prev + 1e-14);
        prev = cur;
    }
}

TEST_CASE("general-p minimizer agrees with the eigensolver at p = 2") {
    const ProblemParams q{3, 2, 2.0, 1.0, 1.0, 1.0};
    const ThetaMesh mesh = ThetaMesh::build(1e-8, 128);
    const double eig = minimize_p2(q, mesh).value;
    const double irls = minimize_general(q, mesh).value;
    CHECK(irls == doctest::Approx(eig).epsilon(1e-10));
}

TEST_CASE("general-p minimizer: quasi-spherical exactness and init independence") {
    const ProblemParams q{5, 2, 3.0, 0.0, 1.0, 4.0};
    const ThetaMesh mesh = ThetaMesh::build(1e-8, 128);
    const MinimizeResult mr = minimize_general(q, mesh);
    CHECK(mr.value == doctest::Approx(1.0 / 27.0).epsilon(1e-10));
    CHECK(mr.converged);
    // constant minimizer up to normalization
    double mean = 0.0;
    for (double v : mr.profile.values) mean += v;
    mean /= double(mr.profile.values.size());
    for (double v : mr.profile.values) CHECK(std::abs(v - mean) / mean < 1e-5);

    // random positive start lands on the same value
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> uni(0.5, 1.5);
    std::vector<double> init(mesh.nodes.size());
    for (auto& v : init) v = uni(rng);
    const MinimizeResult mr2 = minimize_general(q, mesh, {}, &init);
    CHECK(mr2.value == doctest::Approx(mr.value).epsilon(1e-8));
}

TEST_CASE("refinement driver: levels, extrapolation, plateau model") {
    // bottom case above b*: plain Richardson against the closed form
    const ProblemParams q{3, 2, 2.0, 1.0, 1.0, 1.0};
    const ConstantEstimate est = refine_and_extrapolate(q);
    CHECK(est.levels.size() == 4);
    for (size_t i = 1; i < est.levels.size(); ++i)
        CHECK(est.levels[i] <= est.levels[i - 1] + 1e-14);
    CHECK(std::abs(est.value - bottom_constant_p2(q)) / bottom_constant_p2(q) < 1e-3);
    CHECK_FALSE(est.possibly_plateau);
    CHECK(est.converged);

    // below b*: logarithmic plateau model kicks in
    const ProblemParams qp{3, 2, 2.0, 1.0, 0.1, 0.1};
    const ConstantEstimate ep = refine_and_extrapolate(qp);
    CHECK(ep.possibly_plateau);
    CHECK(ep.value >= 0.25 - 1e-9);
    CHECK(ep.value <= 0.25 + 0.02);
    CHECK(ep.error_indicator > 0.0);

    RefineOpts one;
    one.levels = 1;
    CHECK_THROWS_AS(refine_and_extrapolate(q, one), std::invalid_argument);
    CHECK_THROWS_AS(refine_and_extrapolate({3, 3, 2.0, 1.0, 1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("profile interpolation is exact on the same mesh") {
    const ThetaMesh mesh = ThetaMesh::build(1e-8, 32);
    DiscreteProfile phi = constant_profile(mesh);
    for (size_t i = 0; i < phi.values.size(); ++i) phi.values[i] = std::cos(0.1 * i);
    const std::vector<double> out = interpolate_profile(phi, mesh);
    for (size_t i = 0; i < out.size(); ++i)
        CHECK(out[i] == doctest::Approx(phi.values[i]).epsilon(1e-12));
}
