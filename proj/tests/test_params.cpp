#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cylhardy/params.hpp"

using namespace cylhardy;

TEST_CASE("admissibility gates") {
    CHECK(validate({3, 2, 2.0, 1.0, 1.0, 1.0}).ok);
    CHECK(validate({5, 2, 3.0, 0.0, 1.0, 4.0}).ok);

    // d > k >= 1
    CHECK_FALSE(validate({3, 3, 2.0, 1.0, 1.0, 1.0}).ok);
    CHECK_FALSE(validate({3, 0, 2.0, 1.0, 1.0, 1.0}).ok);
    // p > 1
    CHECK_FALSE(validate({3, 2, 1.0, 1.0, 0.0, 0.0}).ok);
    // k + a > 0
    CHECK_FALSE(validate({3, 2, 2.0, -2.0, 0.0, 0.0}).ok);
    // d + a - p > b (numerator integrability)
    CHECK_FALSE(validate({3, 2, 2.0, 1.0, 2.0, 2.0}).ok);
    // k + a - p > b - gamma (denominator integrability)
    CHECK_FALSE(validate({4, 2, 2.0, 2.0, 3.0, 1.0}).ok);
    CHECK(validate({4, 2, 2.0, 2.0, 2.9, 1.0}).ok);

    const ValidityReport bad = validate({3, 3, 2.0, 1.0, 1.0, 1.0});
    CHECK_FALSE(validity_message(bad).empty());
}

TEST_CASE("derived constants") {
    const ProblemParams q{3, 2, 2.0, 1.0, 1.0, 1.0};
    const DerivedConstants c = derived(q);
    CHECK(c.h_0 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.h_b == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.lambda_0 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.p_h0 == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c.tau_b == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(derived({3, 3, 2.0, 1.0, 1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("regime classification and precedence") {
    // gamma = p + b
    CHECK(classify_regime({5, 2, 3.0, 0.0, 1.0, 4.0}) == Regime::QuasiSpherical);
    // b = gamma = 0 with k + a > p beats the bottom label
    CHECK(classify_regime({3, 2, 2.0, 1.0, 0.0, 0.0}) == Regime::Cylindrical);
    // gamma = b, b != 0
    CHECK(classify_regime({3, 2, 2.0, 1.0, 1.0, 1.0}) == Regime::Bottom);
    // gamma < b
    CHECK(classify_regime({3, 2, 2.0, 1.0, 1.0, 0.5}) == Regime::Degenerate);
    // b < gamma < p + b
    CHECK(classify_regime({3, 2, 2.0, 1.0, 1.0, 2.0}) == Regime::GeneralAboveBottom);

    CHECK_FALSE(positive_infimum({3, 2, 2.0, 1.0, 1.0, 0.5}));
    CHECK(positive_infimum({3, 2, 2.0, 1.0, 1.0, 1.0}));

    CHECK(std::string(regime_name(Regime::Bottom)) == "bottom");
}
