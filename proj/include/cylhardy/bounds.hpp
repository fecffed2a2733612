#pragma once

// Analytic upper bounds from explicit trial profiles and rigorous lower-bound
// certificates from supersolutions, used to sandwich the numerical minima.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cylhardy/closedform.hpp"
#include "cylhardy/params.hpp"
#include "cylhardy/quadrature.hpp"

namespace cylhardy {

// Rayleigh value of the power trial profile phi(theta) = sin^{-lambda}(theta):
//
//        int sin^{k+a-1-p(lambda+1)} cos^{d-k-1} (lambda^2 cos^2 + h_b^2 sin^2)^{p/2}
//   U  = ---------------------------------------------------------------------------.
//        int sin^{k+a-1-p+gamma-b-p lambda} cos^{d-k-1}
//
// Any lambda < lambda_0 gives an upper bound for the sharp constant.
inline double trial_power(const ProblemParams& q, double lambda,
                          const GradingSpec& spec = {}) {
    const DerivedConstants c = derived(q);
    if (lambda >= c.lambda_0)
        throw std::invalid_argument("trial_power: need lambda < lambda_0");
    const double beta = q.d - q.k - 1.0;
    const double alpha_den = q.k + q.a - 1.0 - q.p + q.gamma - q.b - q.p * lambda;
    if (alpha_den <= -1.0)
        throw std::invalid_argument("trial_power: lambda outside the admissible range");
    if (lambda == 0.0) {
        // constant profile: the gradient term drops and the sin exponent is k+a-1
        const double num = std::pow(std::abs(c.h_b), q.p) * beta_moment(q.k + q.a - 1.0, beta);
        return num / beta_moment(alpha_den, beta);
    }
    const double alpha_num = q.k + q.a - 1.0 - q.p * (lambda + 1.0);
    if (alpha_num <= -1.0)
        throw std::invalid_argument("trial_power: lambda outside the admissible range");
    const double hb2 = c.h_b * c.h_b;
    const double num = theta_weight_integral(
        alpha_num, beta,
        [&](double th) {
            const double ct = std::cos(th), st = std::sin(th);
            return std::pow(lambda * lambda * ct * ct + hb2 * st * st, 0.5 * q.p);
        },
        spec);
    return num / beta_moment(alpha_den, beta);
}

// Bottom-line family s_delta(b): the trial exponent lambda = lambda_0 - delta,
// valid for every 0 < delta <= lambda_0; the infimum over delta of these
// values converges to the sharp bottom constant as the profile concentrates.
inline double s_delta_bound(const ProblemParams& q, double delta, const GradingSpec& spec = {}) {
    const DerivedConstants c = derived(q);
    if (c.lambda_0 <= 0.0) throw std::domain_error("s_delta_bound needs k + a > p");
    if (delta <= 0.0 || delta > c.lambda_0)
        throw std::invalid_argument("s_delta_bound: need 0 < delta <= lambda_0");
    return trial_power(q, c.lambda_0 - delta, spec);
}

// ---------------------------------------------------------------------------
// Supersolution lower-bound certificate (p = 2 sub-branch uses exact algebra;
// the general-p form keeps the nonlinear correction terms).
//
// For gamma = b and the candidate supersolution built from
// F_alpha(t) = (1 + (alpha^2 + 2 alpha) t^2)^{(p-2)/2}, t = sin(theta),
// a sufficient condition for S_{b,b} = lambda_0^p is the nonnegativity on
// [0, 1] of
//
//   Q_alpha(t) = lambda_0 (F_alpha - 1 - (p-2) alpha F_alpha t^2)
//              + (C_alpha F_alpha
//                 + (p-2)(alpha^2 + 2 alpha) F_alpha^{(p-4)/(p-2)} (1 - t^2)) t^2,
//   C_alpha = (d - k - b) alpha - b - lambda_0 (p - 1) alpha^2,
//
// for some alpha in (0, 1].  For p = 2 this collapses to
// Q_alpha(t) = C_alpha t^2 with C_alpha = (d - k - b) alpha - b - lambda_0 alpha^2.
// ---------------------------------------------------------------------------

enum class CertificateKind { UpperBoundTrial, LowerBoundSupersolution };

struct Certificate {
    CertificateKind kind = CertificateKind::LowerBoundSupersolution;
    double value = 0.0;         // lambda_0^p when valid
    bool valid = false;
    double alpha = 0.0;         // witness when valid
    double min_residual = 0.0;  // min over t-grid of Q_alpha for the best alpha
    int alphas_tried = 0;
};

namespace detail {

inline double supersolution_q(const ProblemParams& q, double lambda0, double alpha, double t) {
    const double p = q.p;
    const double t2 = t * t;
    const double c_alpha = (q.d - q.k - q.b) * alpha - q.b - lambda0 * (p - 1.0) * alpha * alpha;
    if (p == 2.0) return c_alpha * t2;
    const double s = alpha * alpha + 2.0 * alpha;
    const double base = 1.0 + s * t2;
    const double f = std::pow(base, 0.5 * (p - 2.0));
    const double fm = std::pow(base, 0.5 * (p - 4.0));  // F^{(p-4)/(p-2)}
    return lambda0 * (f - 1.0 - (p - 2.0) * alpha * f * t2) +
           (c_alpha * f + (p - 2.0) * s * fm * (1.0 - t2)) * t2;
}

}  // namespace detail

// Supersolution bracket Q_alpha(t); nonnegativity on (0, 1] certifies the
// plateau (see the block comment above).
inline double supersolution_bracket(const ProblemParams& q, double alpha, double t) {
    const DerivedConstants c = derived(q);
    if (c.lambda_0 <= 0.0) throw std::domain_error("supersolution_bracket needs k + a > p");
    if (alpha < 0.0) throw std::invalid_argument("supersolution_bracket: alpha >= 0 required");
    if (!(t > 0.0 && t <= 1.0))
        throw std::invalid_argument("supersolution_bracket: t in (0, 1] required");
    return detail::supersolution_q(q, c.lambda_0, alpha, t);
}

struct CertificateOpts {
    int t_points = 10000;       // uniform screening grid on [0, 1]
    int refine_factor = 10;     // finer re-check around the grid minimum
    int alpha_points = 50;      // logarithmic alpha grid
    double alpha_min = 1e-4;
    double alpha_max = 1.0;
};

// Search for an alpha certifying S_{b,b} >= lambda_0^p (which then holds with
// equality, since s_delta bounds give the matching upper bound).  Failure is
// inconclusive, not a refutation.
inline Certificate certify_lower_bound(const ProblemParams& q,
                                       const CertificateOpts& opts = {}) {
    const DerivedConstants c = derived(q);
    if (classify_regime(q) != Regime::Bottom && classify_regime(q) != Regime::Cylindrical)
        throw std::domain_error("certify_lower_bound needs gamma = b");
    if (c.lambda_0 <= 0.0) throw std::domain_error("certify_lower_bound needs k + a > p");
    if (q.b <= 0.0) throw std::domain_error("certify_lower_bound needs b > 0");

    Certificate best;
    best.value = std::pow(c.lambda_0, q.p);
    best.min_residual = -std::numeric_limits<double>::infinity();
    const double lr = std::log(opts.alpha_max / opts.alpha_min);
    for (int ia = 0; ia < opts.alpha_points; ++ia) {
        const double alpha =
            opts.alpha_min * std::exp(lr * ia / std::max(opts.alpha_points - 1, 1));
        ++best.alphas_tried;
        double mn = std::numeric_limits<double>::infinity();
        int argmin = 0;
        for (int i = 0; i <= opts.t_points; ++i) {
            const double t = double(i) / opts.t_points;
            const double v = detail::supersolution_q(q, c.lambda_0, alpha, t);
            if (v < mn) {
                mn = v;
                argmin = i;
            }
        }
        if (mn >= 0.0) {
            // re-screen on a finer grid around the coarse minimum
            const double tlo = std::max(0.0, (argmin - 1.0) / opts.t_points);
            const double thi = std::min(1.0, (argmin + 1.0) / opts.t_points);
            const int m = 2 * opts.refine_factor;
            for (int i = 0; i <= m; ++i) {
                const double t = tlo + (thi - tlo) * i / m;
                mn = std::min(mn, detail::supersolution_q(q, c.lambda_0, alpha, t));
            }
        }
        if (mn > best.min_residual) {
            best.min_residual = mn;
            best.alpha = alpha;
        }
        if (mn >= 0.0) {
            best.valid = true;
            best.alpha = alpha;
            best.min_residual = mn;
            break;
        }
    }
    return best;
}

}  // namespace cylhardy
