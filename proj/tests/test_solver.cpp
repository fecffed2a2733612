#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "cylhardy/solver.hpp"

using namespace cylhardy;

TEST_CASE("compute_constant dispatch") {
    // gamma < b: the infimum is zero, no minimization needed
    const ConstantEstimate deg = compute_constant({3, 2, 2.0, 1.0, 1.0, 0.5});
    CHECK(deg.value == 0.0);
    CHECK(deg.provenance == Provenance::TheoremDegenerate);

    // quasi-spherical closed form
    const ConstantEstimate qs = compute_constant({5, 2, 3.0, 0.0, 1.0, 4.0});
    CHECK(qs.value == doctest::Approx(1.0 / 27.0).epsilon(1e-15));
    CHECK(qs.provenance == Provenance::ClosedFormQuasiSpherical);

    // cylindrical closed form
    const ConstantEstimate cy = compute_constant({3, 2, 2.0, 1.0, 0.0, 0.0});
    CHECK(cy.value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(cy.provenance == Provenance::ClosedFormCylindrical);

    // p = 2 bottom closed form
    const ConstantEstimate bt = compute_constant({3, 2, 2.0, 1.0, 1.0, 1.0});
    CHECK(bt.value == doctest::Approx(0.11602540378443871).epsilon(1e-14));
    CHECK(bt.provenance == Provenance::ClosedFormBottomP2);

    // strictly between the lines: numerical
    const ConstantEstimate nm = compute_constant({3, 2, 2.0, 1.0, 1.0, 2.0});
    CHECK(nm.provenance == Provenance::Numerical);
    CHECK(nm.value > bt.value);           // monotone in gamma
    CHECK(nm.value < 0.5625 + 1e-6);      // below the quasi-spherical value

    CHECK_THROWS_AS(compute_constant({3, 3, 2.0, 1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("closed-form cross-validation and bound checks") {
    SolverOpts opts;
    opts.verify = true;
    const ProblemParams q{3, 2, 2.0, 1.0, 1.0, 1.0};
    const ConstantEstimate est = compute_constant(q, opts);
    CHECK(est.provenance == Provenance::ClosedFormBottomP2);
    CHECK(est.levels.size() == 4);
    CHECK(est.error_indicator < 1e-3);
    CHECK_FALSE(est.bound_checks.empty());
    for (const auto& bc : est.bound_checks) CHECK(bc.satisfied);
}

TEST_CASE("numerical bottom run respects the plateau and the s_delta bounds") {
    SolverOpts opts;
    opts.force_numerical = true;
    const ProblemParams q{3, 2, 2.0, 1.0, 0.1, 0.1};
    const ConstantEstimate est = compute_constant(q, opts);
    CHECK(est.possibly_plateau);
    CHECK(est.value <= 0.25 + est.error_indicator);
    double min_sdelta = 1e300;
    bool has_cert = false;
    for (const auto& bc : est.bound_checks) {
        CHECK(bc.satisfied);
        if (bc.name.rfind("s_delta", 0) == 0) min_sdelta = std::min(min_sdelta, bc.bound);
        if (!bc.is_upper) has_cert = true;
    }
    CHECK(est.value <= min_sdelta + 1e-6);
    CHECK(has_cert);  // b = 0.1 < b* is certified from below
}

TEST_CASE("limit behavior near the integrability edge") {
    // b -> p h_0: the constant collapses toward zero
    ProblemParams q{3, 2, 2.0, 1.0, 0.0, 0.0};
    const double edge = derived(q).p_h0;
    q.b = q.gamma = edge - 0.05;
    const ConstantEstimate est = compute_constant(q);
    CHECK(est.value < 0.05);
    CHECK(est.value > 0.0);
}

TEST_CASE("bstar bracket contains the p = 2 closed form") {
    const BStarEstimate bs = compute_bstar({3, 2, 2.0, 1.0, 0.0, 0.0});
    REQUIRE_FALSE(bs.inconclusive);
    const double exact = 2.0 - std::sqrt(3.0);
    CHECK(bs.hi - bs.lo <= 5e-3 + 1e-12);
    CHECK(bs.lo <= exact);
    CHECK(exact <= bs.hi);
    REQUIRE(bs.closed_form_ref.has_value());
    CHECK(*bs.closed_form_ref == doctest::Approx(exact).epsilon(1e-14));
    CHECK(bs.iterations > 0);

    // k + a <= p: bottom plateau undefined (rejected at validation)
    CHECK_THROWS(compute_bstar({3, 2, 2.0, -0.5, 0.0, 0.0}));
}

TEST_CASE("gamma sweep is monotone") {
    SolverOpts opts;
    const ScanResult res = scan({3, 2, 2.0, 1.0, 1.0, 1.0}, ScanAxis::Gamma, 1.0, 3.0, 8, opts);
    CHECK(res.points.size() == 8);
    CHECK(res.diag.monotone);
    CHECK(res.diag.violations == 0);
    // endpoints hit the closed forms
    CHECK(res.points.front().estimate.value == doctest::Approx(0.11602540378443871));
    CHECK(res.points.back().estimate.value == doctest::Approx(0.25));  // h_b^2 at gamma = 3
}

TEST_CASE("b sweep on the bottom line satisfies the Lipschitz sandwich") {
    const ScanResult res = scan({3, 2, 2.0, 1.0, 0.0, 0.0}, ScanAxis::B, 0.0, 1.5, 16);
    CHECK(res.diag.monotone);      // nonincreasing in b
    CHECK(res.diag.lipschitz_ok);  // bounded drop rate
    CHECK(res.diag.violations == 0);
}

TEST_CASE("scan guards") {
    CHECK_THROWS_AS(scan({3, 2, 2.0, 1.0, 1.0, 1.0}, ScanAxis::Gamma, 1.0, 3.0, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(scan({3, 2, 2.0, 1.0, 1.0, 1.0}, ScanAxis::Gamma, 1.0, 3.0, 1),
                    std::invalid_argument);
    // invalid points inside the range are marked, not fatal
    const ScanResult res = scan({3, 2, 2.0, 1.0, 1.0, 1.0}, ScanAxis::B, 1.0, 2.5, 4);
    bool any_invalid = false;
    for (const auto& pt : res.points) any_invalid = any_invalid || !pt.valid;
    CHECK(any_invalid);  // b = 2.5 violates d + a - p > b
}
