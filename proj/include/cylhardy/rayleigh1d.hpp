#pragma once

// One-dimensional reduced Rayleigh quotient on (0, pi/2).  Separating the
// angular profile phi(theta) from the radial power |z|^{-h_b} reduces the
// full-space quotient (up to a fixed measure factor common to both sides) to
//
//           int_0^{pi/2} w_num(theta) ((phi')^2 + h_b^2 phi^2)^{p/2} dtheta
//   R(phi) = -----------------------------------------------------------------,
//           int_0^{pi/2} w_den(theta) |phi|^p dtheta
//
//   w_num = sin^{k+a-1} cos^{d-k-1},  w_den = sin^{k+a-1-p+gamma-b} cos^{d-k-1}.
//
// Discretization: piecewise-linear profiles on a geometric mesh graded toward
// theta = 0, first cell absorbing the endpoint power weight exactly.  For
// p = 2 the minimum is a generalized tridiagonal eigenvalue (Sturm-count
// bisection plus shifted inverse iteration); for general p an iteratively
// reweighted quadratic surrogate with a monotone blending line search.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cylhardy/estimate.hpp"
#include "cylhardy/params.hpp"
#include "cylhardy/quadrature.hpp"

namespace cylhardy {

struct ThetaMesh {
    double theta_min = 1e-8;
    std::vector<double> nodes;  // nodes[0] = 0, nodes.back() = pi/2

    static ThetaMesh build(double theta_min, int cells) {
        if (cells < 16 || theta_min <= 0.0 || theta_min >= 1e-4)
            throw std::invalid_argument("ThetaMesh: need cells >= 16, 0 < theta_min < 1e-4");
        ThetaMesh m;
        m.theta_min = theta_min;
        m.nodes.resize(cells + 1);
        m.nodes[0] = 0.0;
        const double rho = std::pow(M_PI / 2 / theta_min, 1.0 / (cells - 1));
        double t = theta_min;
        for (int i = 1; i <= cells; ++i) {
            m.nodes[i] = t;
            t *= rho;
        }
        m.nodes[cells] = M_PI / 2;
        return m;
    }

    int cells() const { return static_cast<int>(nodes.size()) - 1; }

    // next refinement level: twice the cells, half the clustering scale
    ThetaMesh refined() const { return build(theta_min / 2.0, cells() * 2); }
};

struct DiscreteProfile {
    ThetaMesh mesh;
    std::vector<double> values;  // nodal values, size cells() + 1
};

struct QuotientBreakdown {
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

struct GradientResult {
    std::vector<double> grad;  // d(ratio)/d(nodal values)
    bool nonsmooth = false;    // hit a p < 2 degenerate point; subgradient 0 used there
};

struct MinimizeResult {
    double value = 0.0;
    DiscreteProfile profile;
    bool converged = false;
    int iterations = 0;
    bool nonsmooth = false;
};

namespace detail {

// Per-cell quadrature data for the two weights.  For the first cell the
// numerator and denominator use different power-absorbing substitutions, so
// nodes are stored separately.
struct QuadTable {
    int npts = 8;
    double p = 2.0;
    double h_b = 0.0;
    std::vector<double> t0, t1;          // cell endpoints
    std::vector<double> xn, wn, xd, wd;  // cells * npts entries each

    static QuadTable build(const ProblemParams& q, const ThetaMesh& mesh, int gauss_points = 8) {
        const DerivedConstants c = derived(q);
        const double an = q.k + q.a - 1.0;
        const double ad = q.k + q.a - 1.0 - q.p + q.gamma - q.b;
        const double beta = q.d - q.k - 1.0;
        if (an <= -1.0 || ad <= -1.0)
            throw std::invalid_argument("QuadTable: weight exponent out of range");
        const GaussRule& gr = gauss_rule(gauss_points);
        const int N = mesh.cells();
        QuadTable T;
        T.npts = gauss_points;
        T.p = q.p;
        T.h_b = c.h_b;
        T.t0.resize(N);
        T.t1.resize(N);
        T.xn.resize(static_cast<size_t>(N) * gauss_points);
        T.wn.resize(static_cast<size_t>(N) * gauss_points);
        T.xd.resize(static_cast<size_t>(N) * gauss_points);
        T.wd.resize(static_cast<size_t>(N) * gauss_points);
        for (int i = 0; i < N; ++i) {
            const double a0 = mesh.nodes[i], a1 = mesh.nodes[i + 1];
            T.t0[i] = a0;
            T.t1[i] = a1;
            for (int qq = 0; qq < gauss_points; ++qq) {
                const size_t idx = static_cast<size_t>(i) * gauss_points + qq;
                if (i == 0) {
                    const double thn = a1 * std::pow(gr.x[qq], 1.0 / (an + 1.0));
                    const double sn = thn > 0 ? std::sin(thn) / thn : 1.0;
                    T.xn[idx] = thn;
                    T.wn[idx] = gr.w[qq] * std::pow(sn, an) * std::pow(a1, an + 1.0) /
                                (an + 1.0) * std::pow(std::cos(thn), beta);
                    const double thd = a1 * std::pow(gr.x[qq], 1.0 / (ad + 1.0));
                    const double sd = thd > 0 ? std::sin(thd) / thd : 1.0;
                    T.xd[idx] = thd;
                    T.wd[idx] = gr.w[qq] * std::pow(sd, ad) * std::pow(a1, ad + 1.0) /
                                (ad + 1.0) * std::pow(std::cos(thd), beta);
                } else {
                    const double h = a1 - a0;
                    const double th = a0 + h * gr.x[qq];
                    const double base = gr.w[qq] * h * std::pow(std::cos(th), beta);
                    T.xn[idx] = th;
                    T.wn[idx] = base * std::pow(std::sin(th), an);
                    T.xd[idx] = th;
                    T.wd[idx] = base * std::pow(std::sin(th), ad);
                }
            }
        }
        return T;
    }
};

inline QuotientBreakdown eval_parts(const QuadTable& T, const std::vector<double>& v) {
    const int N = static_cast<int>(T.t0.size());
    double num = 0.0, den = 0.0;
    for (int i = 0; i < N; ++i) {
        const double h = T.t1[i] - T.t0[i];
        const double dphi = (v[i + 1] - v[i]) / h;
        for (int qq = 0; qq < T.npts; ++qq) {
            const size_t idx = static_cast<size_t>(i) * T.npts + qq;
            const double phin = (v[i] * (T.t1[i] - T.xn[idx]) + v[i + 1] * (T.xn[idx] - T.t0[i])) / h;
            const double phid = (v[i] * (T.t1[i] - T.xd[idx]) + v[i + 1] * (T.xd[idx] - T.t0[i])) / h;
            const double br = dphi * dphi + T.h_b * T.h_b * phin * phin;
            num += T.wn[idx] * std::pow(br, 0.5 * T.p);
            den += T.wd[idx] * std::pow(std::abs(phid), T.p);
        }
    }
    QuotientBreakdown out;
    out.numerator = num;
    out.denominator = den;
    out.ratio = den > 0 ? num / den : std::numeric_limits<double>::infinity();
    return out;
}

// numerator/denominator values plus their nodal gradients
struct PartsGrad {
    double num = 0.0, den = 0.0;
    std::vector<double> gnum, gden;
    bool nonsmooth = false;
};

inline PartsGrad eval_parts_grad(const QuadTable& T, const std::vector<double>& v) {
    const int N = static_cast<int>(T.t0.size());
    PartsGrad r;
    r.gnum.assign(v.size(), 0.0);
    r.gden.assign(v.size(), 0.0);
    const double p = T.p;
    for (int i = 0; i < N; ++i) {
        const double h = T.t1[i] - T.t0[i];
        const double dphi = (v[i + 1] - v[i]) / h;
        for (int qq = 0; qq < T.npts; ++qq) {
            const size_t idx = static_cast<size_t>(i) * T.npts + qq;
            const double li = (T.t1[i] - T.xn[idx]) / h, lj = (T.xn[idx] - T.t0[i]) / h;
            const double lid = (T.t1[i] - T.xd[idx]) / h, ljd = (T.xd[idx] - T.t0[i]) / h;
            const double phin = v[i] * li + v[i + 1] * lj;
            const double phid = v[i] * lid + v[i + 1] * ljd;
            const double br = dphi * dphi + T.h_b * T.h_b * phin * phin;
            r.num += T.wn[idx] * std::pow(br, 0.5 * p);
            r.den += T.wd[idx] * std::pow(std::abs(phid), p);
            double fac;
            if (br > 0.0) {
                fac = T.wn[idx] * 0.5 * p * std::pow(br, 0.5 * p - 1.0);
            } else {
                fac = 0.0;
                if (p < 2.0) r.nonsmooth = true;
            }
            r.gnum[i] += fac * (2.0 * dphi * (-1.0 / h) + 2.0 * T.h_b * T.h_b * phin * li);
            r.gnum[i + 1] += fac * (2.0 * dphi * (1.0 / h) + 2.0 * T.h_b * T.h_b * phin * lj);
            double gfac;
            if (phid != 0.0) {
                gfac = T.wd[idx] * p * std::pow(std::abs(phid), p - 1.0) * (phid > 0 ? 1.0 : -1.0);
            } else {
                gfac = 0.0;
                if (p < 2.0) r.nonsmooth = true;
            }
            r.gden[i] += gfac * lid;
            r.gden[i + 1] += gfac * ljd;
        }
    }
    return r;
}

struct TriDiag {
    std::vector<double> d;  // size n
    std::vector<double> e;  // size n - 1 (symmetric off-diagonal)

    void matvec(const std::vector<double>& x, std::vector<double>& y) const {
        const size_t n = d.size();
        for (size_t i = 0; i < n; ++i) {
            double s = d[i] * x[i];
            if (i > 0) s += e[i - 1] * x[i - 1];
            if (i + 1 < n) s += e[i] * x[i + 1];
            y[i] = s;
        }
    }

    double quad(const std::vector<double>& x) const {
        const size_t n = d.size();
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) {
            s += d[i] * x[i] * x[i];
            if (i + 1 < n) s += 2.0 * e[i] * x[i] * x[i + 1];
        }
        return s;
    }
};

// LU factorization of a general tridiagonal matrix with partial pivoting
struct TriLU {
    std::vector<double> dl, dd, du, du2;
    std::vector<int> piv;
    bool singular = false;

    static TriLU factor(const TriDiag& A, const TriDiag& B, double sigma) {
        const int n = static_cast<int>(A.d.size());
        TriLU f;
        f.dd.resize(n);
        f.dl.resize(std::max(n - 1, 0));
        f.du.resize(std::max(n - 1, 0));
        f.du2.assign(std::max(n - 2, 0), 0.0);
        f.piv.assign(std::max(n - 1, 0), 0);
        for (int i = 0; i < n; ++i) f.dd[i] = A.d[i] - sigma * B.d[i];
        for (int i = 0; i < n - 1; ++i) f.dl[i] = f.du[i] = A.e[i] - sigma * B.e[i];
        for (int i = 0; i < n - 1; ++i) {
            if (std::abs(f.dd[i]) >= std::abs(f.dl[i])) {
                if (f.dd[i] == 0.0) {
                    f.singular = true;
                    continue;
                }
                const double fact = f.dl[i] / f.dd[i];
                f.dl[i] = fact;
                f.dd[i + 1] -= fact * f.du[i];
            } else {
                const double fact = f.dd[i] / f.dl[i];
                f.dd[i] = f.dl[i];
                f.dl[i] = fact;
                const double tmp = f.du[i];
                f.du[i] = f.dd[i + 1];
                f.dd[i + 1] = tmp - fact * f.dd[i + 1];
                if (i < n - 2) {
                    f.du2[i] = f.du[i + 1];
                    f.du[i + 1] = -fact * f.du[i + 1];
                }
                f.piv[i] = 1;
            }
        }
        if (n > 0 && f.dd[n - 1] == 0.0) f.singular = true;
        return f;
    }

    void solve(std::vector<double>& rhs) const {
        const int n = static_cast<int>(dd.size());
        for (int i = 0; i < n - 1; ++i) {
            if (piv[i] == 0) {
                rhs[i + 1] -= dl[i] * rhs[i];
            } else {
                const double tmp = rhs[i];
                rhs[i] = rhs[i + 1];
                rhs[i + 1] = tmp - dl[i] * rhs[i];
            }
        }
        rhs[n - 1] /= dd[n - 1];
        if (n > 1) rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / dd[n - 2];
        for (int i = n - 3; i >= 0; --i)
            rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / dd[i];
    }
};

// assemble A (weighted stiffness + h_b^2 mass) and B (denominator mass); the
// optional per-quadrature-point factors cn, cd turn this into the reweighted
// quadratic surrogate used for general p
inline void assemble_p2(const QuadTable& T, TriDiag& A, TriDiag& B,
                        const std::vector<double>* cn = nullptr,
                        const std::vector<double>* cd = nullptr) {
    const int N = static_cast<int>(T.t0.size());
    A.d.assign(N + 1, 0.0);
    A.e.assign(N, 0.0);
    B.d.assign(N + 1, 0.0);
    B.e.assign(N, 0.0);
    for (int i = 0; i < N; ++i) {
        const double h = T.t1[i] - T.t0[i];
        double wsum = 0.0, mii = 0.0, mjj = 0.0, mij = 0.0;
        double bii = 0.0, bjj = 0.0, bij = 0.0;
        for (int qq = 0; qq < T.npts; ++qq) {
            const size_t idx = static_cast<size_t>(i) * T.npts + qq;
            const double wn = cn ? T.wn[idx] * (*cn)[idx] : T.wn[idx];
            const double wd = cd ? T.wd[idx] * (*cd)[idx] : T.wd[idx];
            const double li = (T.t1[i] - T.xn[idx]) / h, lj = (T.xn[idx] - T.t0[i]) / h;
            wsum += wn;
            mii += wn * li * li;
            mjj += wn * lj * lj;
            mij += wn * li * lj;
            const double lid = (T.t1[i] - T.xd[idx]) / h, ljd = (T.xd[idx] - T.t0[i]) / h;
            bii += wd * lid * lid;
            bjj += wd * ljd * ljd;
            bij += wd * lid * ljd;
        }
        const double s = wsum / (h * h);
        const double hb2 = T.h_b * T.h_b;
        A.d[i] += s + hb2 * mii;
        A.d[i + 1] += s + hb2 * mjj;
        A.e[i] += -s + hb2 * mij;
        B.d[i] += bii;
        B.d[i + 1] += bjj;
        B.e[i] += bij;
    }
}

}  // namespace detail

inline QuotientBreakdown eval_quotient(const ProblemParams& q, const DiscreteProfile& phi,
                                       int gauss_points = 8) {
    const detail::QuadTable T = detail::QuadTable::build(q, phi.mesh, gauss_points);
    return detail::eval_parts(T, phi.values);
}

inline GradientResult eval_gradient(const ProblemParams& q, const DiscreteProfile& phi,
                                    int gauss_points = 8) {
    const detail::QuadTable T = detail::QuadTable::build(q, phi.mesh, gauss_points);
    const detail::PartsGrad pg = detail::eval_parts_grad(T, phi.values);
    GradientResult r;
    r.nonsmooth = pg.nonsmooth;
    r.grad.resize(phi.values.size());
    const double R = pg.num / pg.den;
    for (size_t i = 0; i < r.grad.size(); ++i)
        r.grad[i] = (pg.gnum[i] - R * pg.gden[i]) / pg.den;
    return r;
}

namespace detail {

// number of eigenvalues of the pencil (A, B) strictly below sigma, from the
// inertia of A - sigma B (Sturm count on the symmetric tridiagonal pencil)
inline int sturm_count(const TriDiag& A, const TriDiag& B, double sigma) {
    const int n = static_cast<int>(A.d.size());
    int count = 0;
    double qprev = 0.0;
    for (int i = 0; i < n; ++i) {
        double qi = A.d[i] - sigma * B.d[i];
        if (i > 0) {
            const double off = A.e[i - 1] - sigma * B.e[i - 1];
            qi -= off * off / qprev;
        }
        if (qi == 0.0) qi = -std::numeric_limits<double>::min();
        if (qi < 0.0) ++count;
        qprev = qi;
    }
    return count;
}

struct EigResult {
    double value = 0.0;
    std::vector<double> vec;  // B-normalized, mean-positive
    bool converged = false;
    int iterations = 0;
};

// smallest generalized eigenvalue of the SPD pencil (A, B) by Sturm-count
// bisection, eigenvector by shifted inverse iteration
inline EigResult smallest_eigenpair(const TriDiag& A, const TriDiag& B) {
    const int n = static_cast<int>(A.d.size());
    EigResult res;
    std::vector<double> x(n, 1.0), bx(n), y(n);
    auto rayleigh = [&](const std::vector<double>& v) {
        B.matvec(v, bx);
        const double vBv = std::inner_product(v.begin(), v.end(), bx.begin(), 0.0);
        return A.quad(v) / vBv;
    };
    double hi = rayleigh(x);
    while (sturm_count(A, B, hi) < 1) {
        hi *= 2.0;
        ++res.iterations;
        if (!std::isfinite(hi)) throw std::runtime_error("eigensolver: bracket search failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sturm_count(A, B, mid) >= 1 ? hi : lo) = mid;
        ++res.iterations;
    }

    const double sigma = lo * (1.0 - 1e-10);
    TriLU lu = TriLU::factor(A, B, sigma);
    bool vec_ok = !lu.singular;
    if (vec_ok) {
        for (int it = 0; it < 3; ++it) {
            B.matvec(x, y);
            lu.solve(y);
            double mx = 0.0;
            for (double v : y) mx = std::max(mx, std::abs(v));
            if (!(mx > 0.0) || !std::isfinite(mx)) {
                vec_ok = false;
                break;
            }
            for (int i = 0; i < n; ++i) x[i] = y[i] / mx;
        }
    }
    if (!vec_ok) x.assign(n, 1.0);
    B.matvec(x, bx);
    const double nb = std::sqrt(std::inner_product(x.begin(), x.end(), bx.begin(), 0.0));
    if (nb > 0.0 && std::isfinite(nb))
        for (auto& xi : x) xi /= nb;
    double mean = std::accumulate(x.begin(), x.end(), 0.0);
    if (mean < 0.0)
        for (auto& xi : x) xi = -xi;

    res.value = 0.5 * (lo + hi);
    res.converged = hi - lo <= 1e-13 * std::abs(hi) + 1e-300;
    res.vec = std::move(x);
    return res;
}

}  // namespace detail

// p = 2: smallest generalized eigenvalue of the PL discretization.  The pencil
// is extremely stiff on deeply graded meshes, so the eigenvalue is bracketed
// by Sturm-count bisection (robust against clustering) and the eigenvector is
// recovered by shifted inverse iteration from just below the bracket.
inline MinimizeResult minimize_p2(const ProblemParams& q, const ThetaMesh& mesh,
                                  int gauss_points = 8) {
    if (q.p != 2.0) throw std::invalid_argument("minimize_p2 requires p = 2");
    const detail::QuadTable T = detail::QuadTable::build(q, mesh, gauss_points);
    detail::TriDiag A, B;
    detail::assemble_p2(T, A, B);
    detail::EigResult er = detail::smallest_eigenpair(A, B);
    MinimizeResult res;
    res.value = er.value;
    res.converged = er.converged;
    res.iterations = er.iterations;
    res.profile.mesh = mesh;
    res.profile.values = std::move(er.vec);
    return res;
}

struct GeneralOpts {
    double tol = 1e-12;   // relative ratio stagnation threshold
    int max_iters = 200;  // outer reweighting iterations
    int stall_limit = 3;  // consecutive stagnant iterations before stopping
    int gauss_points = 8;
    double weight_floor = 1e-12;  // relative floor for the reweighting factors
};

// General p: iteratively reweighted quadratic minimization.  At the current
// profile the p-quotient is replaced by the quadratic surrogate with frozen
// factors
//   c = ((phi')^2 + h_b^2 phi^2)^{p/2 - 1}   (numerator),
//   e = |phi|^{p - 2}                        (denominator),
// whose minimizer is a tridiagonal eigenproblem; a blending line search on
// the true quotient guarantees monotone descent.  Plain gradient descent is
// hopeless here: the graded mesh makes the quotient's Hessian conditioning
// scale like the square of the mesh-width range.
inline MinimizeResult minimize_general(const ProblemParams& q, const ThetaMesh& mesh,
                                       const GeneralOpts& opts = {},
                                       const std::vector<double>* init = nullptr) {
    const detail::QuadTable T = detail::QuadTable::build(q, mesh, opts.gauss_points);
    const size_t n = mesh.nodes.size();
    const size_t m = T.xn.size();
    const double p = q.p;
    std::vector<double> v(n, 1.0);
    if (init) {
        if (init->size() != n) throw std::invalid_argument("minimize_general: bad init size");
        v = *init;
    }

    MinimizeResult res;
    {
        const double scale = std::pow(detail::eval_parts(T, v).denominator, 1.0 / p);
        for (auto& vi : v) vi /= scale;
    }
    double J = detail::eval_parts(T, v).ratio;

    std::vector<double> cn(m), cd(m), cand(n);
    detail::TriDiag A, B;
    int stall = 0;

    for (int it = 0; it < opts.max_iters; ++it) {
        res.iterations = it + 1;
        if (p == 2.0 && it >= 1) {
            res.converged = true;
            break;
        }

        // reweighting factors at the quadrature points
        double brmax = 0.0, phmax = 0.0;
        std::vector<double> brv(m), phv(m);
        const int N = static_cast<int>(T.t0.size());
        for (int i = 0; i < N; ++i) {
            const double h = T.t1[i] - T.t0[i];
            const double dphi = (v[i + 1] - v[i]) / h;
            for (int qq = 0; qq < T.npts; ++qq) {
                const size_t idx = static_cast<size_t>(i) * T.npts + qq;
                const double phin =
                    (v[i] * (T.t1[i] - T.xn[idx]) + v[i + 1] * (T.xn[idx] - T.t0[i])) / h;
                const double phid =
                    (v[i] * (T.t1[i] - T.xd[idx]) + v[i + 1] * (T.xd[idx] - T.t0[i])) / h;
                brv[idx] = dphi * dphi + T.h_b * T.h_b * phin * phin;
                phv[idx] = std::abs(phid);
                brmax = std::max(brmax, brv[idx]);
                phmax = std::max(phmax, phv[idx]);
            }
        }
        const double brfloor = opts.weight_floor * std::max(brmax, 1e-300);
        const double phfloor = opts.weight_floor * std::max(phmax, 1e-300);
        bool floored = false;
        for (size_t idx = 0; idx < m; ++idx) {
            if (brv[idx] < brfloor || phv[idx] < phfloor) floored = true;
            cn[idx] = std::pow(std::max(brv[idx], brfloor), 0.5 * p - 1.0);
            cd[idx] = std::pow(std::max(phv[idx], phfloor), p - 2.0);
        }
        if (floored && p < 2.0) res.nonsmooth = true;

        detail::assemble_p2(T, A, B, &cn, &cd);
        detail::EigResult er = detail::smallest_eigenpair(A, B);

        // put the surrogate minimizer on the same normalization as v
        {
            const QuotientBreakdown qe = detail::eval_parts(T, er.vec);
            if (qe.denominator > 0.0) {
                const double s = std::pow(qe.denominator, 1.0 / p);
                for (auto& x : er.vec) x /= s;
            }
        }

        // blend toward the surrogate minimizer until the true quotient drops
        bool improved = false;
        double omega = 1.0;
        for (int bt = 0; bt < 40; ++bt, omega *= 0.5) {
            for (size_t i = 0; i < n; ++i) cand[i] = (1.0 - omega) * v[i] + omega * er.vec[i];
            const QuotientBreakdown qb = detail::eval_parts(T, cand);
            if (qb.denominator > 0.0 && qb.ratio < J) {
                const double scale = std::pow(qb.denominator, 1.0 / p);
                for (size_t i = 0; i < n; ++i) v[i] = cand[i] / scale;
                const double Jn = qb.ratio;
                if (std::abs(J - Jn) <= opts.tol * std::abs(Jn))
                    ++stall;
                else
                    stall = 0;
                J = Jn;
                improved = true;
                break;
            }
        }
        if (!improved || stall >= opts.stall_limit) {
            res.converged = true;
            break;
        }
    }
    if (res.iterations >= opts.max_iters && !res.converged) res.converged = false;

    double mean = std::accumulate(v.begin(), v.end(), 0.0);
    if (mean < 0.0)
        for (auto& vi : v) vi = -vi;
    for (auto& vi : v)
        if (std::abs(vi) < 1e-14) vi = std::max(vi, 0.0);
    res.value = J;
    res.profile.mesh = mesh;
    res.profile.values = std::move(v);
    return res;
}

struct RefineOpts {
    double theta_min = 1e-8;  // coarsest-level clustering scale
    int cells = 256;          // coarsest-level cell count
    int levels = 4;
    int gauss_points = 8;
    GeneralOpts general;      // used when p != 2
    double regime_tol = 1e-12;
    bool plateau_model = true;  // logarithmic extrapolation on the line gamma = b
};

// linear interpolation of a profile onto another mesh (used to warm-start
// finer levels)
inline std::vector<double> interpolate_profile(const DiscreteProfile& phi,
                                               const ThetaMesh& target) {
    const auto& xs = phi.mesh.nodes;
    const auto& vs = phi.values;
    std::vector<double> out(target.nodes.size());
    size_t j = 0;
    for (size_t i = 0; i < target.nodes.size(); ++i) {
        const double t = target.nodes[i];
        while (j + 2 < xs.size() && xs[j + 1] < t) ++j;
        const double x0 = xs[j], x1 = xs[j + 1];
        const double w = x1 > x0 ? std::clamp((t - x0) / (x1 - x0), 0.0, 1.0) : 0.0;
        out[i] = vs[j] * (1.0 - w) + vs[j + 1] * w;
    }
    return out;
}

// Minimize on a sequence of refined meshes, Richardson-extrapolate, and flag
// estimates indistinguishable from the bottom plateau lambda_0^p.
//
// On the line gamma = b the mesh error decays only like 1/log^2(1/theta_min)
// whenever the infimum is not attained (plateau regime), so there a
// logarithmic two-point model replaces geometric Richardson extrapolation.
inline ConstantEstimate refine_and_extrapolate(const ProblemParams& q, const RefineOpts& opts = {}) {
    if (!validate(q).ok) throw std::invalid_argument(validity_message(validate(q)));
    if (opts.levels < 2) throw std::invalid_argument("refine_and_extrapolate: levels >= 2");

    ConstantEstimate est;
    est.provenance = Provenance::Numerical;
    ThetaMesh mesh = ThetaMesh::build(opts.theta_min, opts.cells);
    bool all_converged = true;
    DiscreteProfile warm;
    for (int l = 0; l < opts.levels; ++l) {
        MinimizeResult mr;
        if (q.p == 2.0) {
            mr = minimize_p2(q, mesh, opts.gauss_points);
        } else if (warm.values.empty()) {
            mr = minimize_general(q, mesh, opts.general);
        } else {
            const std::vector<double> init = interpolate_profile(warm, mesh);
            mr = minimize_general(q, mesh, opts.general, &init);
        }
        all_converged = all_converged && mr.converged;
        est.levels.push_back(mr.value);
        warm = std::move(mr.profile);
        if (l + 1 < opts.levels) mesh = mesh.refined();
    }
    est.converged = all_converged;

    const size_t L = est.levels.size();
    est.extrapolated = est.levels.back();
    est.error_indicator = L >= 2 ? std::abs(est.levels[L - 1] - est.levels[L - 2])
                                 : std::abs(est.levels.back());
    if (L >= 3) {
        const double d1 = est.levels[L - 2] - est.levels[L - 3];
        const double d2 = est.levels[L - 1] - est.levels[L - 2];
        if (d1 != 0.0) {
            const double qr = d2 / d1;
            if (qr > 0.0 && qr < 1.0) est.extrapolated = est.levels[L - 1] + d2 * qr / (1.0 - qr);
        }
    }

    const Regime reg = classify_regime(q, opts.regime_tol);
    const bool bottom_line = reg == Regime::Bottom || reg == Regime::Cylindrical;
    if (opts.plateau_model && bottom_line && L >= 2 && (q.k + q.a - q.p) > 0.0) {
        const double plateau = std::pow((q.k + q.a - q.p) / q.p, q.p);
        // two-point fit of v = S + c / log^2(1/theta_min)
        const double lgA = std::log(1.0 / (opts.theta_min / std::pow(2.0, double(L - 2))));
        const double lgB = std::log(1.0 / (opts.theta_min / std::pow(2.0, double(L - 1))));
        const double c = (est.levels[L - 2] - est.levels[L - 1]) /
                         (1.0 / (lgA * lgA) - 1.0 / (lgB * lgB));
        const double fit = est.levels[L - 1] - c / (lgB * lgB);
        if (std::abs(fit - plateau) <= 10.0 * est.error_indicator) {
            est.possibly_plateau = true;
            est.extrapolated = fit;
            est.error_indicator = std::max({est.error_indicator,
                                            std::abs(est.levels[L - 1] - fit),
                                            std::abs(fit - plateau)});
        }
    }

    est.value = est.extrapolated;
    return est;
}

}  // namespace cylhardy
