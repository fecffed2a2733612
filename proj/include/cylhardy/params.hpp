#pragma once

// Problem data for the weighted Hardy quotient on R^d = R^k x R^{d-k},
//
//   J(u) = int |y|^a |z|^{-b} |grad u|^p dz  /  int |y|^{a-p-b+gamma} |z|^{-gamma} |u|^p dz,
//
// together with admissibility checks, derived exponents and regime tags.

#include <cmath>
#include <stdexcept>
#include <string>

namespace cylhardy {

struct ProblemParams {
    int d = 3;          // ambient dimension
    int k = 2;          // dimension of the y-block, 1 <= k < d (k = d allowed only formally)
    double p = 2.0;     // exponent, p > 1
    double a = 0.0;     // spherical weight power on |y|
    double b = 0.0;     // cylindrical power in the numerator
    double gamma = 0.0; // cylindrical power in the denominator
};

// Admissibility: the quotient has a positive finite infimum iff all strict
// inequalities below hold (plus gamma >= b for positivity).
struct ValidityReport {
    bool shape_ok = false;        // d > k >= 1 and p > 1
    bool ka_positive = false;     // k + a > 0
    bool num_integrable = false;  // d + a - p > b
    bool den_integrable = false;  // k + a - p > b - gamma
    bool ok = false;
};

inline ValidityReport validate(const ProblemParams& q) {
    ValidityReport r;
    r.shape_ok = q.k >= 1 && q.d > q.k && q.p > 1.0;
    r.ka_positive = q.k + q.a > 0.0;
    r.num_integrable = q.d + q.a - q.p > q.b;
    r.den_integrable = q.k + q.a - q.p > q.b - q.gamma;
    r.ok = r.shape_ok && r.ka_positive && r.num_integrable && r.den_integrable;
    return r;
}

inline std::string validity_message(const ValidityReport& r) {
    if (r.ok) return "ok";
    std::string m = "invalid parameters:";
    if (!r.shape_ok) m += " need d > k >= 1 and p > 1;";
    if (!r.ka_positive) m += " need k + a > 0;";
    if (!r.num_integrable) m += " need d + a - p > b;";
    if (!r.den_integrable) m += " need k + a - p > b - gamma;";
    return m;
}

struct DerivedConstants {
    double h_b;      // (d + a - p - b) / p
    double h_0;      // (d + a - p) / p
    double lambda_0; // (k + a - p) / p
    double p_h0;     // d + a - p
    double tau_b;    // h_b / h_0
};

inline DerivedConstants derived(const ProblemParams& q) {
    ValidityReport r = validate(q);
    if (!r.ok) throw std::invalid_argument(validity_message(r));
    DerivedConstants c;
    c.h_0 = (q.d + q.a - q.p) / q.p;
    c.h_b = (q.d + q.a - q.p - q.b) / q.p;
    c.lambda_0 = (q.k + q.a - q.p) / q.p;
    c.p_h0 = q.d + q.a - q.p;
    c.tau_b = c.h_b / c.h_0;
    return c;
}

enum class Regime {
    Degenerate,          // gamma < b: infimum is 0
    Cylindrical,         // b = gamma = 0: purely cylindrical Hardy constant
    Bottom,              // gamma = b != 0
    QuasiSpherical,      // gamma = p + b
    GeneralAboveBottom,  // gamma > b, none of the special lines
};

inline Regime classify_regime(const ProblemParams& q, double tol = 1e-12) {
    if (std::abs(q.b) <= tol && std::abs(q.gamma) <= tol) return Regime::Cylindrical;
    if (std::abs(q.gamma - q.b) <= tol) return Regime::Bottom;
    if (std::abs(q.gamma - (q.p + q.b)) <= tol) return Regime::QuasiSpherical;
    if (q.gamma < q.b - tol) return Regime::Degenerate;
    return Regime::GeneralAboveBottom;
}

// True when the infimum is strictly positive.
inline bool positive_infimum(const ProblemParams& q, double tol = 1e-12) {
    if (!validate(q).ok) return false;
    return q.gamma >= q.b - tol;
}

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Degenerate: return "degenerate";
        case Regime::Cylindrical: return "cylindrical";
        case Regime::Bottom: return "bottom";
        case Regime::QuasiSpherical: return "quasi-spherical";
        case Regime::GeneralAboveBottom: return "general";
    }
    return "?";
}

}  // namespace cylhardy
