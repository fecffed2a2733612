#pragma once

// Weighted quadrature on (0, pi/2) for integrands sin^alpha(theta) cos^beta(theta) f(theta)
// with alpha, beta > -1, plus the gamma-function moments they are checked against.
//
// The interval is split at pi/4 and each half uses a geometric mesh graded toward
// its singular endpoint.  The first cell of each half absorbs the power weight by
// the substitution theta = theta_1 u^{1/(alpha+1)}, so the transformed integrand
// is smooth all the way to the endpoint.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cylhardy/params.hpp"

namespace cylhardy {

struct GaussRule {
    std::vector<double> x;  // nodes on (0, 1)
    std::vector<double> w;  // weights summing to 1
};

// Gauss-Legendre rule mapped to (0, 1); nodes by Newton iteration on P_n.
inline const GaussRule& gauss_rule(int n) {
    static thread_local std::vector<GaussRule> cache(64);
    if (n < 1 || n >= 64) throw std::invalid_argument("gauss_rule: n out of range");
    GaussRule& r = cache[n];
    if (!r.x.empty()) return r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        r.x[i] = 0.5 * (1.0 - t);  // descending t maps to ascending x
        r.w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
}

// (1/2) B((alpha+1)/2, (beta+1)/2) = int_0^{pi/2} sin^alpha cos^beta dtheta.
inline double beta_moment(double alpha, double beta) {
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("beta_moment: exponents must exceed -1");
    return 0.5 * std::exp(std::lgamma(0.5 * (alpha + 1.0)) + std::lgamma(0.5 * (beta + 1.0)) -
                          std::lgamma(0.5 * (alpha + beta + 2.0)));
}

// Surface measure of the unit sphere S^m in R^{m+1}; |S^0| = 2.
inline double sphere_surface(int m) {
    if (m < 0) throw std::invalid_argument("sphere_surface: m >= 0 required");
    return 2.0 * std::pow(M_PI, 0.5 * (m + 1)) / std::tgamma(0.5 * (m + 1));
}

// int_{S^{d-1}} |sigma'|^tau dsigma where sigma' is the projection onto the
// first k coordinates; needs k + tau > 0.
inline double sphere_moment(int d, int k, double tau) {
    if (k < 1 || d <= k) throw std::invalid_argument("sphere_moment: need 1 <= k < d");
    if (k + tau <= 0.0) throw std::invalid_argument("sphere_moment: need k + tau > 0");
    return sphere_surface(k - 1) * sphere_surface(d - k - 1) *
           beta_moment(k + tau - 1.0, d - k - 1.0);
}

struct GradingSpec {
    double theta_min = 1e-8;  // first interior node of the graded mesh
    int cells = 0;            // 0: cells chosen from the ratio; else fixed count
    double ratio = 1.35;      // geometric growth factor of cell widths
    int gauss_points = 8;
};

namespace detail {

// int_0^X sin^alpha(theta) g(theta) dtheta with g smooth up to theta = 0.
inline double graded_endpoint_integral(double alpha, const std::function<double(double)>& g,
                                       double X, const GradingSpec& spec) {
    if (alpha <= -1.0) throw std::invalid_argument("integrand exponent must exceed -1");
    const GaussRule& gr = gauss_rule(spec.gauss_points);
    const int n = spec.gauss_points;
    double total = 0.0;
    const double t1 = std::min(spec.theta_min, X);
    for (int q = 0; q < n; ++q) {
        const double th = t1 * std::pow(gr.x[q], 1.0 / (alpha + 1.0));
        const double sinc = th > 0.0 ? std::sin(th) / th : 1.0;
        const double jac = std::pow(sinc, alpha) * std::pow(t1, alpha + 1.0) / (alpha + 1.0);
        total += gr.w[q] * jac * g(th);
    }
    double t0 = t1;
    while (t0 < X * (1.0 - 1e-14)) {
        const double t2 = std::min(t0 * spec.ratio, X);
        const double h = t2 - t0;
        for (int q = 0; q < n; ++q) {
            const double th = t0 + h * gr.x[q];
            total += gr.w[q] * h * std::pow(std::sin(th), alpha) * g(th);
        }
        t0 = t2;
    }
    return total;
}

}  // namespace detail

// int_0^{pi/2} sin^alpha(theta) cos^beta(theta) f(theta) dtheta.
inline double theta_weight_integral(double alpha, double beta,
                                    const std::function<double(double)>& f,
                                    const GradingSpec& spec = {}) {
    const double quarter = 0.25 * M_PI;
    const double left = detail::graded_endpoint_integral(
        alpha, [&](double th) { return std::pow(std::cos(th), beta) * f(th); }, quarter, spec);
    const double right = detail::graded_endpoint_integral(
        beta, [&](double ps) { return std::pow(std::cos(ps), alpha) * f(0.5 * M_PI - ps); },
        quarter, spec);
    return left + right;
}

// Relative residual of the sphere moment identity
//   (k + tau - 2) int |sigma'|^{tau-2} dsigma = (d + tau - 2) int |sigma'|^tau dsigma,
// valid for k + tau > 2.
inline double check_useful_iii(int d, int k, double tau) {
    if (k + tau <= 2.0) throw std::invalid_argument("check_useful_iii: need k + tau > 2");
    const double lhs = (k + tau - 2.0) * sphere_moment(d, k, tau - 2.0);
    const double rhs = (d + tau - 2.0) * sphere_moment(d, k, tau);
    return std::abs(lhs - rhs) / std::abs(rhs);
}

// Cross-check of the quadrature against the exact moments: recompute
// sphere_moment via theta_weight_integral and return the relative mismatch.
inline double quadrature_moment_residual(int d, int k, double tau, const GradingSpec& spec = {}) {
    const double exact = sphere_moment(d, k, tau);
    const double quad = sphere_surface(k - 1) * sphere_surface(d - k - 1) *
                        theta_weight_integral(k + tau - 1.0, d - k - 1.0,
                                              [](double) { return 1.0; }, spec);
    return std::abs(quad - exact) / std::abs(exact);
}

}  // namespace cylhardy
