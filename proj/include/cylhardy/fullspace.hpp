#pragma once

// Full-dimensional spot checks: Monte Carlo evaluation of the quotient on
// explicit bump profiles (shift-scaling behaviour), a pointwise PDE residual
// for the p = 2 Euler-Lagrange equation of power-type critical profiles, and
// a sampled check of the sphere-projection gradient identity.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "cylhardy/params.hpp"

namespace cylhardy {

inline constexpr int kMaxFullDim = 8;

struct BumpSpec {
    std::vector<double> center;  // in R^d; first k coordinates are the y-block
    double radius = 1.0;
};

struct MonteCarloEstimate {
    double value = 0.0;      // numerator / denominator
    double std_error = 0.0;  // propagated 1-sigma error of the ratio
    long samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// u(x) = (1 - |x - c|^2 / R^2)^3 inside the ball, 0 outside; C^2 across the boundary
inline double bump_value(const std::vector<double>& x, const BumpSpec& s) {
    double r2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - s.center[i];
        r2 += d * d;
    }
    const double t = 1.0 - r2 / (s.radius * s.radius);
    return t > 0.0 ? t * t * t : 0.0;
}

inline void bump_gradient(const std::vector<double>& x, const BumpSpec& s,
                          std::vector<double>& g) {
    double r2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - s.center[i];
        r2 += d * d;
    }
    const double t = 1.0 - r2 / (s.radius * s.radius);
    if (t <= 0.0) {
        std::fill(g.begin(), g.end(), 0.0);
        return;
    }
    const double f = -6.0 * t * t / (s.radius * s.radius);
    for (size_t i = 0; i < x.size(); ++i) g[i] = f * (x[i] - s.center[i]);
}

}  // namespace detail

// Monte Carlo value of the quotient on the bump translated by shift_h along
// the last coordinate (the x-block).  The bump support must avoid the
// y-degeneracy set {y = 0}, i.e. |y(center)| > radius.
inline MonteCarloEstimate mc_quotient(const ProblemParams& q, const BumpSpec& spec,
                                      double shift_h, long samples, std::uint64_t seed) {
    if (q.d > kMaxFullDim) throw std::invalid_argument("mc_quotient: d exceeds limit");
    if (spec.center.size() != static_cast<size_t>(q.d))
        throw std::invalid_argument("mc_quotient: center dimension mismatch");
    // only the shape constraints matter here: the bump avoids both singular
    // sets, so the local integrability conditions (which fail by design in
    // the degenerate experiments, gamma < b) are not required
    if (q.k < 1 || q.d <= q.k || q.p <= 1.0)
        throw std::invalid_argument("mc_quotient: need d > k >= 1 and p > 1");
    double ynorm2 = 0.0;
    for (int i = 0; i < q.k; ++i) ynorm2 += spec.center[i] * spec.center[i];
    if (std::sqrt(ynorm2) <= spec.radius)
        throw std::invalid_argument("mc_quotient: bump support touches {y = 0}");

    BumpSpec sh = spec;
    sh.center[q.d - 1] += shift_h;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> x(q.d), grad(q.d);
    double sn = 0.0, sd = 0.0, snn = 0.0, sdd = 0.0, snd = 0.0;
    const double volume = std::pow(2.0 * sh.radius, q.d);
    for (long s = 0; s < samples; ++s) {
        for (int i = 0; i < q.d; ++i) x[i] = sh.center[i] + sh.radius * uni(rng);
        const double u = detail::bump_value(x, sh);
        double fn = 0.0, fd = 0.0;
        if (u > 0.0) {
            detail::bump_gradient(x, sh, grad);
            double y2 = 0.0, z2 = 0.0, g2 = 0.0;
            for (int i = 0; i < q.k; ++i) y2 += x[i] * x[i];
            for (int i = 0; i < q.d; ++i) {
                z2 += x[i] * x[i];
                g2 += grad[i] * grad[i];
            }
            const double ynorm = std::sqrt(y2), znorm = std::sqrt(z2);
            fn = std::pow(ynorm, q.a) * std::pow(znorm, -q.b) * std::pow(g2, 0.5 * q.p);
            fd = std::pow(ynorm, q.a - q.p - q.b + q.gamma) * std::pow(znorm, -q.gamma) *
                 std::pow(u, q.p);
        }
        sn += fn;
        sd += fd;
        snn += fn * fn;
        sdd += fd * fd;
        snd += fn * fd;
    }
    const double n = double(samples);
    const double mn = sn / n, md = sd / n;
    if (md == 0.0) throw std::runtime_error("mc_quotient: zero denominator estimate");
    MonteCarloEstimate out;
    out.samples = samples;
    out.seed = seed;
    out.value = mn / md;  // volume factor cancels in the ratio
    (void)volume;
    const double varn = (snn / n - mn * mn) / n;
    const double vard = (sdd / n - md * md) / n;
    const double cov = (snd / n - mn * md) / n;
    const double rel2 = varn / (mn * mn) + vard / (md * md) - 2.0 * cov / (mn * md);
    out.std_error = std::abs(out.value) * std::sqrt(std::max(rel2, 0.0));
    return out;
}

struct SlopeEstimate {
    double slope = 0.0;
    double std_error = 0.0;
    std::vector<double> shifts;
    std::vector<MonteCarloEstimate> values;
};

// Weighted log-log regression of the quotient against the shift h; for large
// shifts the quotient scales like h^{gamma - b}.
inline SlopeEstimate scaling_slope(const ProblemParams& q, const std::vector<double>& shifts,
                                   long samples, std::uint64_t seed, const BumpSpec* spec = nullptr) {
    if (shifts.size() < 2) throw std::invalid_argument("scaling_slope: need >= 2 shifts");
    BumpSpec sp;
    if (spec) {
        sp = *spec;
    } else {
        sp.center.assign(q.d, 0.0);
        sp.center[0] = 2.0;
        sp.radius = 1.0;
    }
    SlopeEstimate out;
    out.shifts = shifts;
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (size_t i = 0; i < shifts.size(); ++i) {
        const MonteCarloEstimate mc =
            mc_quotient(q, sp, shifts[i], samples, seed + 1000003ULL * i);
        out.values.push_back(mc);
        const double xlog = std::log(shifts[i]);
        const double ylog = std::log(mc.value);
        const double sig = std::max(mc.std_error / mc.value, 1e-12);
        const double w = 1.0 / (sig * sig);
        sw += w;
        swx += w * xlog;
        swy += w * ylog;
        swxx += w * xlog * xlog;
        swxy += w * xlog * ylog;
    }
    const double det = sw * swxx - swx * swx;
    out.slope = (sw * swxy - swx * swy) / det;
    out.std_error = std::sqrt(sw / det);
    return out;
}

// ---------------------------------------------------------------------------
// p = 2 pointwise PDE residual.  For U = |y|^{-lambda} |z|^{lambda - h_b},
//   -div(|y|^a |z|^{-b} grad U)
//     = lambda (2 lambda_0 - lambda) |y|^{a-2} |z|^{-b}   U
//     + ((h_b - lambda)^2 - b lambda) |y|^a     |z|^{-b-2} U.
// The residual is evaluated with an analytic flux and a central
// finite-difference divergence, normalized by the right-hand-side magnitude.
// ---------------------------------------------------------------------------

namespace detail {

// U(x) = |y|^{-lambda} |z|^{-h_b + lambda}
inline double power_profile(const std::vector<double>& x, int k, double lambda, double h_b) {
    double y2 = 0.0, z2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (int(i) < k) y2 += x[i] * x[i];
        z2 += x[i] * x[i];
    }
    return std::pow(y2, -0.5 * lambda) * std::pow(z2, 0.5 * (lambda - h_b));
}

inline void power_profile_grad(const std::vector<double>& x, int k, double lambda, double h_b,
                               std::vector<double>& g) {
    double y2 = 0.0, z2 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (int(i) < k) y2 += x[i] * x[i];
        z2 += x[i] * x[i];
    }
    const double u = std::pow(y2, -0.5 * lambda) * std::pow(z2, 0.5 * (lambda - h_b));
    for (size_t i = 0; i < x.size(); ++i) {
        double gi = (lambda - h_b) * x[i] / z2;
        if (int(i) < k) gi += -lambda * x[i] / y2;
        g[i] = u * gi;
    }
}

}  // namespace detail

// max over sampled points of |div F + rhs| / |rhs| with F = |y|^a |z|^{-b} grad U
// and rhs the two-term right-hand side above.
inline double p2_pde_residual(const ProblemParams& q, double lambda, int n_points,
                              std::uint64_t seed, double fd_step_rel = 1e-4) {
    if (q.p != 2.0) throw std::invalid_argument("p2_pde_residual requires p = 2");
    if (q.d > kMaxFullDim) throw std::invalid_argument("p2_pde_residual: d exceeds limit");
    const DerivedConstants c = derived(q);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.5, 1.5);

    auto flux = [&](const std::vector<double>& x, std::vector<double>& f) {
        double y2 = 0.0, z2 = 0.0;
        for (int i = 0; i < q.d; ++i) {
            if (i < q.k) y2 += x[i] * x[i];
            z2 += x[i] * x[i];
        }
        detail::power_profile_grad(x, q.k, lambda, c.h_b, f);
        const double wgt = std::pow(y2, 0.5 * q.a) * std::pow(z2, -0.5 * q.b);
        for (int i = 0; i < q.d; ++i) f[i] *= wgt;
    };

    std::vector<double> x(q.d), fp(q.d), fm(q.d), xp(q.d);
    double worst = 0.0;
    for (int s = 0; s < n_points; ++s) {
        // points with |y| and |z| of order 1, away from the degeneracy set
        double y2 = 0.0;
        do {
            y2 = 0.0;
            for (int i = 0; i < q.d; ++i) x[i] = gauss(rng);
            double z2 = 0.0;
            for (int i = 0; i < q.d; ++i) z2 += x[i] * x[i];
            const double zn = std::sqrt(z2);
            const double target = uni(rng);
            for (int i = 0; i < q.d; ++i) x[i] *= target / zn;
            for (int i = 0; i < q.k; ++i) y2 += x[i] * x[i];
        } while (std::sqrt(y2) < 0.3);

        double div = 0.0;
        for (int i = 0; i < q.d; ++i) {
            const double h = fd_step_rel * std::max(std::abs(x[i]), 1.0);
            xp = x;
            xp[i] = x[i] + h;
            flux(xp, fp);
            xp[i] = x[i] - h;
            flux(xp, fm);
            div += (fp[i] - fm[i]) / (2.0 * h);
        }
        double z2 = 0.0;
        for (int i = 0; i < q.d; ++i) z2 += x[i] * x[i];
        const double u = detail::power_profile(x, q.k, lambda, c.h_b);
        const double c_y = lambda * (2.0 * c.lambda_0 - lambda);
        const double c_z = (c.h_b - lambda) * (c.h_b - lambda) - q.b * lambda;
        const double term_y = c_y * std::pow(y2, 0.5 * (q.a - 2.0)) * std::pow(z2, -0.5 * q.b) * u;
        const double term_z = c_z * std::pow(y2, 0.5 * q.a) * std::pow(z2, -0.5 * (q.b + 2.0)) * u;
        const double scale = std::abs(term_y) + std::abs(term_z);
        worst = std::max(worst, std::abs(div + term_y + term_z) / scale);
    }
    return worst;
}

// Sampled check of the tangential-gradient identity behind the sphere moments:
// for f(z) = |Pi_k z| / |z| (0-homogeneous), the ambient gradient computed by
// finite differences must be tangent to the sphere and have the analytic
// magnitude |grad f|^2 = (1 - f^2) / |z|^2 ... evaluated at |z| = 1:
// |grad f| = cos(theta)/1 with f = sin(theta).  Returns the worst absolute
// mismatch over the sampled directions.
inline double useful_identity_residual(int d, int k, int n_samples, std::uint64_t seed,
                                       double fd_step = 1e-6) {
    if (d > kMaxFullDim || k < 1 || k >= d)
        throw std::invalid_argument("useful_identity_residual: bad dimensions");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    auto f = [&](const std::vector<double>& x) {
        double y2 = 0.0, z2 = 0.0;
        for (int i = 0; i < d; ++i) {
            if (i < k) y2 += x[i] * x[i];
            z2 += x[i] * x[i];
        }
        return std::sqrt(y2 / z2);
    };
    std::vector<double> x(d), xp(d);
    double worst = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        double z2 = 0.0, y2 = 0.0;
        do {
            z2 = 0.0;
            y2 = 0.0;
            for (int i = 0; i < d; ++i) x[i] = gauss(rng);
            for (int i = 0; i < d; ++i) z2 += x[i] * x[i];
            const double zn = std::sqrt(z2);
            for (int i = 0; i < d; ++i) x[i] /= zn;
            for (int i = 0; i < k; ++i) y2 += x[i] * x[i];
        } while (y2 < 0.01 || y2 > 0.99);

        const double fv = f(x);
        double g2 = 0.0, gdotx = 0.0;
        for (int i = 0; i < d; ++i) {
            xp = x;
            xp[i] = x[i] + fd_step;
            const double fpv = f(xp);
            xp[i] = x[i] - fd_step;
            const double fmv = f(xp);
            const double gi = (fpv - fmv) / (2.0 * fd_step);
            g2 += gi * gi;
            gdotx += gi * x[i];
        }
        // 0-homogeneity: radial component vanishes; magnitude = sqrt(1 - f^2)
        const double mag_err = std::abs(std::sqrt(g2) - std::sqrt(std::max(1.0 - fv * fv, 0.0)));
        worst = std::max({worst, std::abs(gdotx), mag_err});
    }
    return worst;
}

}  // namespace cylhardy
