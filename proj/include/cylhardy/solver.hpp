#pragma once

// High-level drivers: sharp-constant estimation with closed-form dispatch and
// cross-checks, borderline-exponent location on the line gamma = b, and
// parameter sweeps with monotonicity diagnostics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cylhardy/bounds.hpp"
#include "cylhardy/closedform.hpp"
#include "cylhardy/estimate.hpp"
#include "cylhardy/params.hpp"
#include "cylhardy/rayleigh1d.hpp"

namespace cylhardy {

struct SolverOpts {
    RefineOpts refine;
    bool force_numerical = false;    // skip the closed-form shortcut
    bool verify = false;     // run the numerics alongside a closed form
    std::vector<double> delta_grid{0.2, 0.1, 0.05};  // s_delta upper bounds (bottom line)
    double bound_slack = 1e-6;
};

namespace detail {

inline void attach_bound_checks(const ProblemParams& q, const SolverOpts& opts,
                                ConstantEstimate& est) {
    const DerivedConstants c = derived(q);
    const Regime reg = classify_regime(q);
    const double slack = opts.bound_slack + est.error_indicator;

    auto add_upper = [&](const std::string& name, double bound) {
        BoundCheck bc;
        bc.name = name;
        bc.bound = bound;
        bc.is_upper = true;
        bc.satisfied = est.value <= bound + slack;
        est.bound_checks.push_back(bc);
    };

    // power trial profiles (lambda = 0 is the constant profile)
    std::vector<double> lambdas{0.0};
    if (c.lambda_0 > 0.0 && q.gamma >= q.b) {
        lambdas.push_back(0.5 * c.lambda_0);
        lambdas.push_back(0.9 * c.lambda_0);
    }
    for (double lam : lambdas) {
        try {
            add_upper("trial_power(lambda=" + std::to_string(lam) + ")",
                      trial_power(q, lam));
        } catch (const std::exception&) {
            // lambda outside the admissible range for these parameters
        }
    }

    if ((reg == Regime::Bottom || reg == Regime::Cylindrical) && c.lambda_0 > 0.0 &&
        q.b >= 0.0) {
        for (double delta : opts.delta_grid) {
            if (delta > 0.0 && delta <= c.lambda_0)
                add_upper("s_delta(" + std::to_string(delta) + ")", s_delta_bound(q, delta));
        }
        add_upper("plateau_level(lambda0^p)", std::pow(c.lambda_0, q.p));
        if (q.b > 0.0) {
            const Certificate cert = certify_lower_bound(q);
            if (cert.valid) {
                BoundCheck bc;
                bc.name = "supersolution_certificate(alpha=" + std::to_string(cert.alpha) + ")";
                bc.bound = cert.value;
                bc.is_upper = false;
                bc.satisfied = est.value >= bc.bound - slack;
                est.bound_checks.push_back(bc);
            }
        }
    }
}

}  // namespace detail

// Sharp-constant estimate: closed form where one exists, numerical
// minimization otherwise, with analytic upper/lower bound checks attached.
inline ConstantEstimate compute_constant(const ProblemParams& q, const SolverOpts& opts = {}) {
    const ValidityReport vr = validate(q);
    if (!vr.ok) throw std::invalid_argument(validity_message(vr));

    const Regime reg = classify_regime(q);
    ConstantEstimate est;

    if (reg == Regime::Degenerate) {
        est.value = est.extrapolated = 0.0;
        est.provenance = Provenance::TheoremDegenerate;
        return est;
    }

    const bool closed = has_closed_form(q) && !opts.force_numerical;
    if (closed) {
        est.value = est.extrapolated = closed_form_constant(q);
        switch (reg) {
            case Regime::QuasiSpherical:
                est.provenance = Provenance::ClosedFormQuasiSpherical;
                break;
            case Regime::Cylindrical:
                est.provenance = Provenance::ClosedFormCylindrical;
                break;
            default:
                est.provenance = Provenance::ClosedFormBottomP2;
                break;
        }
        if (opts.verify) {
            const ConstantEstimate num = refine_and_extrapolate(q, opts.refine);
            est.levels = num.levels;
            est.error_indicator = std::max(num.error_indicator,
                                           std::abs(num.extrapolated - est.value));
            est.possibly_plateau = num.possibly_plateau;
            est.converged = num.converged;
        }
        detail::attach_bound_checks(q, opts, est);
        return est;
    }

    est = refine_and_extrapolate(q, opts.refine);
    detail::attach_bound_checks(q, opts, est);
    return est;
}

// ---------------------------------------------------------------------------
// Borderline exponent b* on the line gamma = b: the largest b for which
// S_{b,b} stays at the plateau value lambda_0^p.  Located by fitting
// sqrt(defect(b)) = sqrt(lambda_0^p - S_num(b)), which is asymptotically
// linear in b just above b*, and extracting its root.
// ---------------------------------------------------------------------------

struct BStarOpts {
    RefineOpts anchor;  // cheap runs driving the defect-target bisection
    RefineOpts deep;    // accurate runs for the local fit
    double anchor_target_lo = 0.005;
    double anchor_target_hi = 0.04;
    double defect_lo = 3e-3;   // fit window in defect units
    double defect_hi = 3e-2;
    int fit_points = 9;
    int fit_degree = 3;
    int refine_iters = 2;
    double halfwidth = 2.5e-3;  // reported bracket half-width
    int bisect_iters = 60;
};

inline BStarOpts default_bstar_opts(double p) {
    BStarOpts o;
    o.anchor.levels = 3;
    o.anchor.cells = 256;
    o.anchor.theta_min = 1e-8;
    o.anchor.plateau_model = false;
    o.deep.levels = 4;
    o.deep.cells = 512;
    o.deep.theta_min = 1e-24;
    o.deep.plateau_model = false;
    if (p != 2.0) {
        o.anchor.levels = 2;
        o.anchor.cells = 128;
        o.deep.levels = 3;
        o.deep.cells = 256;
        o.deep.theta_min = 1e-16;
        o.halfwidth = 0.05;
    }
    return o;
}

struct BStarEstimate {
    double estimate = 0.0;
    double lo = 0.0, hi = 0.0;  // reported bracket
    double margin = 0.0;        // 10x the deepest-run error indicator
    int iterations = 0;         // total per-level minimizations performed
    bool inconclusive = false;
    std::optional<double> closed_form_ref;  // p = 2 reference value
};

namespace detail {

// least-squares polynomial fit in a centered/scaled variable; returns
// coefficients c[0..deg] of sum c_j x'^j with x' = (x - shift) / scale
struct PolyFit {
    std::vector<double> c;
    double shift = 0.0, scale = 1.0;

    double eval(double x) const {
        const double t = (x - shift) / scale;
        double v = 0.0;
        for (size_t j = c.size(); j-- > 0;) v = v * t + c[j];
        return v;
    }
};

inline PolyFit polyfit(const std::vector<double>& xs, const std::vector<double>& ys, int deg) {
    const int n = static_cast<int>(xs.size());
    const int m = deg + 1;
    PolyFit f;
    double mean = 0.0, spread = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    for (double x : xs) spread = std::max(spread, std::abs(x - mean));
    f.shift = mean;
    f.scale = spread > 0 ? spread : 1.0;

    // normal equations
    std::vector<double> M(m * m, 0.0), rhs(m, 0.0);
    for (int i = 0; i < n; ++i) {
        const double t = (xs[i] - f.shift) / f.scale;
        std::vector<double> pw(m);
        pw[0] = 1.0;
        for (int j = 1; j < m; ++j) pw[j] = pw[j - 1] * t;
        for (int r = 0; r < m; ++r) {
            rhs[r] += pw[r] * ys[i];
            for (int cix = 0; cix < m; ++cix) M[r * m + cix] += pw[r] * pw[cix];
        }
    }
    // gaussian elimination with partial pivoting
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(M[r * m + col]) > std::abs(M[piv * m + col])) piv = r;
        if (piv != col) {
            for (int cix = 0; cix < m; ++cix) std::swap(M[col * m + cix], M[piv * m + cix]);
            std::swap(rhs[col], rhs[piv]);
        }
        const double d = M[col * m + col];
        if (d == 0.0) throw std::runtime_error("polyfit: singular normal equations");
        for (int r = col + 1; r < m; ++r) {
            const double fac = M[r * m + col] / d;
            for (int cix = col; cix < m; ++cix) M[r * m + cix] -= fac * M[col * m + cix];
            rhs[r] -= fac * rhs[col];
        }
    }
    f.c.assign(m, 0.0);
    for (int r = m - 1; r >= 0; --r) {
        double s = rhs[r];
        for (int cix = r + 1; cix < m; ++cix) s -= M[r * m + cix] * f.c[cix];
        f.c[r] = s / M[r * m + r];
    }
    return f;
}

}  // namespace detail

// Defect lambda_0^p - S_num(b) on the line gamma = b (plain Richardson, no
// plateau snapping); positive above b*, indistinguishable from 0 below it.
inline double bottom_defect(const ProblemParams& base, double b, const RefineOpts& ro,
                            int* iterations = nullptr) {
    ProblemParams q = base;
    q.b = b;
    q.gamma = b;
    const DerivedConstants c = derived(q);
    const ConstantEstimate est = refine_and_extrapolate(q, ro);
    if (iterations) *iterations += ro.levels;
    return std::pow(c.lambda_0, q.p) - est.extrapolated;
}

inline BStarEstimate compute_bstar(const ProblemParams& base, const BStarOpts& opts) {
    ProblemParams q0 = base;
    q0.b = 0.0;
    q0.gamma = 0.0;
    const DerivedConstants c = derived(q0);
    if (c.lambda_0 <= 0.0) throw std::domain_error("compute_bstar needs k + a > p");

    BStarEstimate out;
    if (base.p == 2.0) out.closed_form_ref = bstar_p2(base);

    const double bhi = std::min(double(base.d - base.k), base.p * c.h_0 - 0.01);

    // stage 1: bisection to two defect targets gives a rough linear model of
    // sqrt(defect) vs b
    auto solve_target = [&](double target) {
        double lo = 0.0, hi = bhi;
        const double tol = 1e-3 * bhi;
        for (int i = 0; i < opts.bisect_iters && hi - lo > tol; ++i) {
            const double mid = 0.5 * (lo + hi);
            const double defc = bottom_defect(base, mid, opts.anchor, &out.iterations);
            (defc < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    const double dtop = bottom_defect(base, bhi, opts.anchor, &out.iterations);
    if (dtop <= opts.anchor_target_hi) {
        out.inconclusive = true;
        out.estimate = bhi;
        out.lo = 0.0;
        out.hi = bhi;
        return out;
    }
    const double b1 = solve_target(opts.anchor_target_lo);
    const double b2 = solve_target(opts.anchor_target_hi);
    double slope = (std::sqrt(opts.anchor_target_hi) - std::sqrt(opts.anchor_target_lo)) /
                   std::max(b2 - b1, 1e-6);
    double b0 = b1 - std::sqrt(opts.anchor_target_lo) / slope;

    // stage 2: refit sqrt(defect) with deep runs on a window where the defect
    // is well above the mesh error, then take the nearest root
    for (int iter = 0; iter < opts.refine_iters; ++iter) {
        const double wlo = b0 + std::sqrt(opts.defect_lo) / slope;
        const double whi = std::min(b0 + std::sqrt(opts.defect_hi) / slope, bhi);
        if (!(whi > wlo)) {
            out.inconclusive = true;
            break;
        }
        std::vector<double> xs(opts.fit_points), ys(opts.fit_points);
        for (int i = 0; i < opts.fit_points; ++i) {
            const double bb = wlo + (whi - wlo) * i / (opts.fit_points - 1);
            xs[i] = bb;
            ys[i] = std::sqrt(std::max(bottom_defect(base, bb, opts.deep, &out.iterations),
                                       0.0));
        }
        const detail::PolyFit pf = detail::polyfit(xs, ys, opts.fit_degree);
        // scan downward from the window for the sign change of the fit
        const double width = whi - wlo;
        const double scan_lo = wlo - 2.0 * width;
        double root = std::numeric_limits<double>::quiet_NaN();
        double prev_x = wlo, prev_y = pf.eval(wlo);
        const int steps = 400;
        for (int i = 1; i <= steps; ++i) {
            const double x = wlo - (wlo - scan_lo) * i / steps;
            const double y = pf.eval(x);
            if (prev_y > 0.0 && y <= 0.0) {
                double lo = x, hi = prev_x;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (pf.eval(mid) <= 0.0 ? lo : hi) = mid;
                }
                root = 0.5 * (lo + hi);
                break;
            }
            prev_x = x;
            prev_y = y;
        }
        if (!std::isfinite(root)) {
            out.inconclusive = true;
            break;
        }
        const double h = 1e-6 * std::max(std::abs(root), 1.0);
        slope = std::abs(pf.eval(root + h) - pf.eval(root - h)) / (2.0 * h);
        if (!(slope > 0.0)) slope = 1.0;
        b0 = root;
    }

    out.estimate = b0;
    out.lo = std::max(0.0, b0 - opts.halfwidth);
    out.hi = std::min(bhi, b0 + opts.halfwidth);
    {
        // honesty check on the deepest runs at the bracket edges
        ProblemParams q = base;
        q.b = out.hi;
        q.gamma = out.hi;
        const ConstantEstimate e = refine_and_extrapolate(q, opts.deep);
        out.iterations += opts.deep.levels;
        out.margin = 10.0 * e.error_indicator;
    }
    return out;
}

inline BStarEstimate compute_bstar(const ProblemParams& base) {
    return compute_bstar(base, default_bstar_opts(base.p));
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

enum class ScanAxis { B, Gamma };

struct ScanPoint {
    ProblemParams params;
    bool valid = false;
    ConstantEstimate estimate;
};

struct ScanDiagnostics {
    bool monotone = true;      // nondecreasing in gamma / nonincreasing in b
    bool lipschitz_ok = true;  // bottom-line continuity sandwich
    int violations = 0;
};

struct ScanResult {
    ScanAxis axis = ScanAxis::Gamma;
    std::vector<ScanPoint> points;
    ScanDiagnostics diag;
};

// Sweep gamma at fixed b (axis Gamma) or b (axis B; gamma stays tied to b
// when the base parameters lie on the line gamma = b).
inline ScanResult scan(const ProblemParams& base, ScanAxis axis, double lo, double hi, int n,
                       const SolverOpts& opts = {}) {
    if (n < 2) throw std::invalid_argument("scan: need at least 2 points");
    ScanResult res;
    res.axis = axis;
    const bool tied = axis == ScanAxis::B && std::abs(base.gamma - base.b) <= 1e-12;
    for (int i = 0; i < n; ++i) {
        ScanPoint pt;
        pt.params = base;
        const double x = lo + (hi - lo) * i / (n - 1);
        if (axis == ScanAxis::Gamma) {
            pt.params.gamma = x;
        } else {
            pt.params.b = x;
            if (tied) pt.params.gamma = x;
        }
        if (validate(pt.params).ok) {
            pt.valid = true;
            pt.estimate = compute_constant(pt.params, opts);
        }
        res.points.push_back(std::move(pt));
    }

    for (size_t i = 1; i < res.points.size(); ++i) {
        const ScanPoint& a = res.points[i - 1];
        const ScanPoint& b = res.points[i];
        if (!a.valid || !b.valid) continue;
        const double slack =
            1e-9 + a.estimate.error_indicator + b.estimate.error_indicator;
        if (axis == ScanAxis::Gamma) {
            if (b.estimate.value < a.estimate.value - slack) {
                res.diag.monotone = false;
                ++res.diag.violations;
            }
        } else {
            if (b.estimate.value > a.estimate.value + slack) {
                res.diag.monotone = false;
                ++res.diag.violations;
            }
            if (tied && b.params.b >= 0.0 && a.params.b >= 0.0) {
                const double hb_prev = (a.params.d + a.params.a - a.params.p - a.params.b) /
                                       a.params.p;
                const double drop = a.estimate.value / hb_prev * (b.params.b - a.params.b);
                if (b.estimate.value < a.estimate.value - drop - slack) {
                    res.diag.lipschitz_ok = false;
                    ++res.diag.violations;
                }
            }
        }
    }
    return res;
}

}  // namespace cylhardy
