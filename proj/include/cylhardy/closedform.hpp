#pragma once

// Closed-form values of the sharp constant on the parameter lines where it is
// known exactly, plus the p = 2 borderline exponent b* and the associated
// power rate lambda_b.

#include <cmath>
#include <stdexcept>

#include "cylhardy/params.hpp"

namespace cylhardy {

// gamma = p + b: the constant is h_b^p, attained by quasi-radial profiles.
inline double quasi_spherical_constant(const ProblemParams& q) {
    const DerivedConstants c = derived(q);
    if (classify_regime(q) != Regime::QuasiSpherical)
        throw std::domain_error("quasi_spherical_constant needs gamma = p + b");
    return std::pow(c.h_b, q.p);
}

// b = gamma = 0 with k + a > p: the constant is lambda_0^p.
inline double cylindrical_constant(const ProblemParams& q) {
    const DerivedConstants c = derived(q);
    if (classify_regime(q) != Regime::Cylindrical)
        throw std::domain_error("cylindrical_constant needs b = gamma = 0");
    if (c.lambda_0 <= 0.0)
        throw std::domain_error("cylindrical_constant needs k + a > p");
    return std::pow(c.lambda_0, q.p);
}

// p = 2 borderline exponent:
//   b* = 2 h_0 - 2 sqrt(h_0^2 - (h_0 - lambda_0)^2),
// evaluated in the cancellation-free conjugate form.  Requires k + a > 2
// (so lambda_0 > 0) and b, gamma ignored.
inline double bstar_p2(const ProblemParams& q) {
    ProblemParams q0 = q;
    q0.p = 2.0;
    q0.b = 0.0;
    q0.gamma = 0.0;
    const DerivedConstants c = derived(q0);
    if (c.lambda_0 <= 0.0)
        throw std::domain_error("bstar_p2 needs k + a > 2");
    const double g = c.h_0 - c.lambda_0;  // >= 0 since d > k
    const double disc = c.h_0 * c.h_0 - g * g;
    if (disc < 0.0) throw std::domain_error("bstar_p2: negative discriminant");
    return 2.0 * g * g / (c.h_0 + std::sqrt(disc));
}

// p = 2, gamma = b: sharp constant on the bottom line,
//   S = lambda_0^2                                   for 0 <= b <= b*,
//   S = lambda_0^2 - (sqrt(h_0^2 - h_b^2) - (h_0 - lambda_0))^2   for b > b*.
inline double bottom_constant_p2(const ProblemParams& q) {
    if (q.p != 2.0) throw std::domain_error("bottom_constant_p2 needs p = 2");
    if (classify_regime(q) != Regime::Bottom && classify_regime(q) != Regime::Cylindrical)
        throw std::domain_error("bottom_constant_p2 needs gamma = b");
    if (q.b < 0.0) throw std::domain_error("bottom_constant_p2 needs b >= 0");
    const DerivedConstants c = derived(q);
    if (c.lambda_0 <= 0.0)
        throw std::domain_error("bottom_constant_p2 needs k + a > 2");
    const double bs = bstar_p2(q);
    if (q.b <= bs) return c.lambda_0 * c.lambda_0;
    const double disc = c.h_0 * c.h_0 - c.h_b * c.h_b;  // = b (2 h_0 - b/2) / 2... > 0 for 0 < b < 2 h_0
    if (disc < 0.0) throw std::domain_error("bottom_constant_p2 needs b < 2 h_0");
    const double excess = std::sqrt(disc) - (c.h_0 - c.lambda_0);
    return c.lambda_0 * c.lambda_0 - excess * excess;
}

// p = 2 decay rate of the concentrating profile t^{-lambda_b}:
//   lambda_b = h_0 - sqrt(h_0^2 - h_b^2).
inline double lambda_b_p2(const ProblemParams& q) {
    ProblemParams q2 = q;
    q2.p = 2.0;
    q2.gamma = q2.b;  // rate only depends on b
    const DerivedConstants c = derived(q2);
    const double disc = c.h_0 * c.h_0 - c.h_b * c.h_b;
    if (disc < 0.0) throw std::domain_error("lambda_b_p2 needs b < 2 h_0");
    // conjugate form, stable for small b where h_0 and sqrt(disc) nearly cancel
    return c.h_b * c.h_b / (c.h_0 + std::sqrt(disc));
}

// Dispatch over every regime with a known closed form; throws if none applies.
inline double closed_form_constant(const ProblemParams& q) {
    switch (classify_regime(q)) {
        case Regime::Degenerate:
            (void)derived(q);
            return 0.0;
        case Regime::QuasiSpherical:
            return quasi_spherical_constant(q);
        case Regime::Cylindrical:
            return cylindrical_constant(q);
        case Regime::Bottom:
            if (q.p == 2.0 && q.b >= 0.0) return bottom_constant_p2(q);
            throw std::domain_error("no closed form: bottom line with p != 2");
        case Regime::GeneralAboveBottom:
            throw std::domain_error("no closed form for b < gamma < p + b");
    }
    throw std::domain_error("unreachable");
}

inline bool has_closed_form(const ProblemParams& q) {
    switch (classify_regime(q)) {
        case Regime::Degenerate: return true;
        case Regime::QuasiSpherical: return true;
        case Regime::Cylindrical: return (q.k + q.a - q.p) > 0.0;
        case Regime::Bottom: return q.p == 2.0 && q.b >= 0.0 && (q.k + q.a - q.p) > 0.0;
        case Regime::GeneralAboveBottom: return false;
    }
    return false;
}

}  // namespace cylhardy
