#pragma once

// Laurent expansion of omega in the neck coordinate v = 1/g_k near a_{k,i}
// (and mirrored in w = 1/g_{k+1} near b_{k,i}), with the scale constants
// r, r', eps, eps', rho chosen so that |r phi| <= 1/2, |r psi| <= 1/2 and the
// series tails decay at least geometrically.  All coefficients are computed
// from the explicit t = 0 forms; t-dependent quantities are evaluated through
// the series.

#include <cmath>
#include <vector>

#include "catena/chart.hpp"
#include "catena/quadrature.hpp"

namespace catena {

struct ConstantSet {
    double eps = 0;    // node-disk radius: |g_k| <= r/2 outside the eps-disks
    double epsp = 0;   // |g| >= 2r on the 2*eps'-disks about each neck node
    double r = 0;
    double rp = 0;     // |g_k| <= r'/2 outside the eps'-disks
    double rho = 0;    // v/w coordinate disk radius, 1/(2r)
    double t_max = 0;  // min(rho, 1/sqrt(r r'))
};

namespace laurent_detail {

inline double circle_max_abs(const RationalForm& f, cx center, double radius,
                             int samples = 1440) {
    double m = 0.0;
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * PI * j / samples;
        m = std::max(m, std::abs(f.eval(center + radius * cx(std::cos(th), std::sin(th)))));
    }
    return m;
}

inline double circle_min_abs(const RationalForm& f, cx center, double radius,
                             int samples = 720) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < samples; ++j) {
        const double th = 2.0 * PI * j / samples;
        m = std::min(m, std::abs(f.eval(center + radius * cx(std::cos(th), std::sin(th)))));
    }
    return m;
}

}  // namespace laurent_detail

// Automated constant selection over a chart stack; throws with the violated
// bound when the search fails.
inline ConstantSet select_constants(const ChartStack& stack) {
    ConstantSet cs;
    const double gap = stack.min_node_gap();
    if (!std::isfinite(gap) || gap <= 0)
        throw ConstantSelectionError("constants: no finite node gap");
    cs.eps = 0.45 * gap;

    double gmax = 0.0;
    for (int k = stack.k_min(); k <= stack.k_max(); ++k) {
        const auto g = stack.chart(k).g();
        for (cx n : stack.chart(k).nodes())
            gmax = std::max(gmax, laurent_detail::circle_max_abs(g, n, cs.eps, 1440));
    }
    cs.r = 2.0 * 1.002 * gmax;

    // eps': largest s with |g| >= 2r on the closed eps'-disks about every
    // neck node and no zero of g inside (checked via numerator roots); coarse
    // descent then bisection refinement.  The node positions are fixed at
    // their central values here, so the eps'-disk condition already yields
    // |r phi| <= 1/2, which is asserted on every Laurent block.
    auto epsp_ok = [&](double s) {
        for (int k = stack.k_min(); k < stack.k_max(); ++k) {
            const auto g_dn = stack.chart(k).g();
            const auto g_up = stack.chart(k + 1).g();
            const auto zeros_dn = g_dn.numerator().roots();
            const auto zeros_up = g_up.numerator().roots();
            for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
                const cx a = stack.neck_a(k, i);
                const cx b = stack.neck_b(k, i);
                if (laurent_detail::circle_min_abs(g_dn, a, s) < 2.0 * cs.r)
                    return false;
                if (laurent_detail::circle_min_abs(g_up, b, s) < 2.0 * cs.r)
                    return false;
                for (cx z : zeros_dn)
                    if (std::abs(z - a) <= s) return false;
                for (cx z : zeros_up)
                    if (std::abs(z - b) <= s) return false;
            }
        }
        return true;
    };
    double hi = cs.eps / 2.0, lo = 0.0;
    for (int iter = 0; iter < 60 && lo == 0.0; ++iter) {
        if (epsp_ok(hi))
            lo = hi;
        else
            hi *= 0.8;
    }
    if (lo == 0.0)
        throw ConstantSelectionError(
            "constants: no eps' with |g| >= 2r on the eps'-disks about the neck nodes");
    if (lo < cs.eps / 2.0) {
        double bad = lo / 0.8;
        for (int iter = 0; iter < 30; ++iter) {
            const double mid = 0.5 * (lo + bad);
            if (epsp_ok(mid))
                lo = mid;
            else
                bad = mid;
        }
    }
    cs.epsp = 0.98 * lo;

    double gpmax = 0.0;
    for (int k = stack.k_min(); k <= stack.k_max(); ++k) {
        const auto g = stack.chart(k).g();
        for (cx n : stack.chart(k).nodes())
            gpmax = std::max(gpmax, laurent_detail::circle_max_abs(g, n, cs.epsp));
    }
    cs.rp = 2.0 * 1.002 * gpmax;

    cs.rho = 1.0 / (2.0 * cs.r);
    cs.t_max = std::min(cs.rho, 1.0 / std::sqrt(cs.r * cs.rp));
    return cs;
}

// Coefficients of omega near neck (k, i).  v-side family (around a_{k,i}):
//   c_{-1} = -gamma_{k,i},  c_n = r^{n+1} cplus[n]  (n >= 0),
//   c_{-m} = (r t^2)^{m-1} cminus[m]  (m >= 2);
// w-side family (around b_{k,i}): d_{-1} = +gamma_{k,i}, dplus, dminus.
struct LaurentBlock {
    int k = 0, i = 0;
    cx gamma{};
    int cutoff = 40;
    ConstantSet constants;
    cx phi{}, psi{};              // v(a + eps'), w(b + eps')
    std::vector<cx> cplus;        // index n = 0 .. cutoff
    std::vector<cx> cminus;       // index m = 2 .. cutoff stored at [m - 2]
    std::vector<cx> dplus;
    std::vector<cx> dminus;
    double c_minus1_dev = 0;      // |computed c_{-1} + gamma|
    double d_minus1_dev = 0;      // |computed d_{-1} - gamma|
    double tail_magnitude = 0;    // |last cplus| / 2^cutoff, decay indicator

    cx cplus_folded(int n) const {  // n >= -1, with the residue term folded in
        return n == -1 ? -gamma : cplus[n];
    }
    cx dplus_folded(int n) const { return n == -1 ? gamma : dplus[n]; }
};

namespace laurent_detail {

// S_p = (1/2 pi i) oint omega (g/r)^p dz for p = 0..pmax on one circle,
// single trapezoid pass refined until stable.
inline std::vector<cx> power_moments(const RationalForm& omega, const RationalForm& g,
                                     cx center, double radius, double r, int pmax) {
    auto pass = [&](int N) {
        std::vector<cx> S(pmax + 1, cx(0.0));
        for (int j = 0; j < N; ++j) {
            const double th = 2.0 * PI * j / N;
            const cx e{std::cos(th), std::sin(th)};
            const cx z = center + radius * e;
            const cx dz = I * radius * e * (2.0 * PI / N);
            const cx w = omega.eval(z) * dz;
            const cx q = g.eval(z) / r;
            cx qp = 1.0;
            for (int p = 0; p <= pmax; ++p) {
                S[p] += w * qp;
                qp *= q;
            }
        }
        for (auto& v : S) v /= 2.0 * PI * I;
        return S;
    };
    int N = 512;
    auto prev = pass(N);
    while (N <= 4096) {
        auto cur = pass(2 * N);
        double err = 0.0;
        for (int p = 0; p <= pmax; ++p)
            err = std::max(err, std::abs(cur[p] - prev[p]) / (1.0 + std::abs(cur[p])));
        if (err <= 1e-12) return cur;
        prev = std::move(cur);
        N *= 2;
    }
    throw QuadratureError("laurent: coefficient quadrature did not stabilize");
}

}  // namespace laurent_detail

inline LaurentBlock laurent(const ChartStack& stack, int k, int i,
                            const ConstantSet& cs, int cutoff = 40) {
    if (!stack.has_neck(k, i)) throw CoverageError("laurent: neck outside the window");
    LaurentBlock blk;
    blk.k = k;
    blk.i = i;
    blk.cutoff = cutoff;
    blk.constants = cs;
    blk.gamma = stack.neck_gamma(k, i);

    const auto& dn = stack.chart(k);
    const auto& up = stack.chart(k + 1);
    const auto g_dn = dn.g(), g_up = up.g();
    const auto w_dn = dn.omega(), w_up = up.omega();
    const cx a = stack.neck_a(k, i), b = stack.neck_b(k, i);

    blk.phi = 1.0 / g_dn.eval(a + cs.epsp);
    blk.psi = 1.0 / g_up.eval(b + cs.epsp);
    if (std::abs(cs.r * blk.phi) > 0.5 || std::abs(cs.r * blk.psi) > 0.5)
        throw ConstantSelectionError("laurent: |r phi| or |r psi| exceeds 1/2");

    const auto S = laurent_detail::power_moments(w_dn, g_dn, a, cs.eps, cs.r, cutoff + 1);
    const auto T = laurent_detail::power_moments(w_up, g_up, b, cs.eps, cs.r, cutoff + 1);

    blk.c_minus1_dev = std::abs(S[0] + blk.gamma);
    blk.d_minus1_dev = std::abs(T[0] - blk.gamma);
    for (int n = 0; n <= cutoff; ++n) {
        blk.cplus.push_back(S[n + 1]);
        blk.dplus.push_back(T[n + 1]);
    }
    for (int m = 2; m <= cutoff; ++m) {
        blk.cminus.push_back(-T[m - 1]);
        blk.dminus.push_back(-S[m - 1]);
    }
    blk.tail_magnitude = std::abs(blk.cplus.back()) * std::pow(0.5, cutoff);
    return blk;
}

// Series evaluation of omega/dv at a point of the neck annulus (t = 0 terms).
inline cx omega_series_dv(const LaurentBlock& blk, cx v) {
    cx s = -blk.gamma / v;
    cx vp = 1.0;
    double rp = blk.constants.r;
    for (int n = 0; n <= blk.cutoff; ++n) {
        s += rp * blk.cplus[n] * vp;
        vp *= v;
        rp *= blk.constants.r;
    }
    return s;
}

// ---------------------------------------------------------------------------
// Vertical period across the neck and its renormalized finite part:
//   int_{a+eps'}^{b+eps'} omega = -2 gamma log t + gamma log(phi psi) + tails,
// finite part = period + 2 gamma log t extends smoothly to t = 0.
// ---------------------------------------------------------------------------

struct VerticalPeriod {
    double t = 0;
    cx period{};
    cx finite_part{};
};

namespace laurent_detail {

inline void check_t(const LaurentBlock& blk, double t) {
    if (!(t > 0.0) || t >= blk.constants.t_max)
        throw Error("neck series: t outside the guarded range (0, " +
                    std::to_string(blk.constants.t_max) + ")");
}

}  // namespace laurent_detail

inline VerticalPeriod vertical_period(const LaurentBlock& blk, double t) {
    laurent_detail::check_t(blk, t);
    const double r = blk.constants.r;
    const cx rt2 = cx(r * t * t);

    cx tails = 0.0;
    for (int n = 0; n <= blk.cutoff; ++n)
        tails += blk.cplus[n] / double(n + 1) *
                 (std::pow(rt2 / blk.psi, n + 1) - std::pow(r * blk.phi, n + 1));
    for (int m = 2; m <= blk.cutoff; ++m)
        tails += blk.cminus[m - 2] / double(m - 1) *
                 (std::pow(rt2 / blk.phi, m - 1) - std::pow(r * blk.psi, m - 1));

    VerticalPeriod out;
    out.t = t;
    out.finite_part = blk.gamma * std::log(blk.phi * blk.psi) + tails;
    out.period = out.finite_part - 2.0 * blk.gamma * std::log(t);
    return out;
}

// w-route evaluation of the same period (independent coefficient families);
// agreement with vertical_period validates the whole pipeline.
inline VerticalPeriod vertical_period_wroute(const LaurentBlock& blk, double t) {
    laurent_detail::check_t(blk, t);
    const double r = blk.constants.r;
    const cx rt2 = cx(r * t * t);

    cx tails = 0.0;
    for (int n = 0; n <= blk.cutoff; ++n)
        tails += blk.dplus[n] / double(n + 1) *
                 (std::pow(r * blk.psi, n + 1) - std::pow(rt2 / blk.phi, n + 1));
    for (int m = 2; m <= blk.cutoff; ++m)
        tails += blk.dminus[m - 2] / double(m - 1) *
                 (std::pow(r * blk.phi, m - 1) - std::pow(rt2 / blk.psi, m - 1));

    VerticalPeriod out;
    out.t = t;
    out.finite_part = blk.gamma * std::log(blk.phi * blk.psi) + tails;
    out.period = out.finite_part - 2.0 * blk.gamma * std::log(t);
    return out;
}

// ---------------------------------------------------------------------------
// Neck integrals int v omega and int w omega from a+eps' to b+eps'; their
// tau = 0 limits are int_{a+eps'}^{a} g_k^{-1} omega_k and
// int_{b}^{b+eps'} g_{k+1}^{-1} omega_{k+1}.
// ---------------------------------------------------------------------------

struct NeckIntegrals {
    double t = 0;
    cx v_integral{};
    cx w_integral{};
    cx v_limit0{};
    cx w_limit0{};
};

inline NeckIntegrals neck_integrals(const LaurentBlock& blk, double t) {
    laurent_detail::check_t(blk, t);
    const double r = blk.constants.r;
    const cx rt2 = cx(r * t * t);
    NeckIntegrals out;
    out.t = t;

    // int v omega
    {
        cx s = 0.0;
        for (int n = -1; n <= blk.cutoff; ++n)
            s += blk.cplus_folded(n) / double(n + 2) *
                 (std::pow(rt2 / blk.psi, n + 2) - std::pow(r * blk.phi, n + 2));
        s /= r;
        if (blk.cutoff >= 2)
            s += rt2 * blk.cminus[0] *
                 (std::log(t * t) - std::log(blk.phi * blk.psi));
        for (int m = 3; m <= blk.cutoff; ++m)
            s += rt2 * blk.cminus[m - 2] / double(m - 2) *
                 (std::pow(rt2 / blk.phi, m - 2) - std::pow(r * blk.psi, m - 2));
        out.v_integral = s;

        cx lim = 0.0;
        for (int n = -1; n <= blk.cutoff; ++n)
            lim -= blk.cplus_folded(n) / double(n + 2) * std::pow(r * blk.phi, n + 2);
        out.v_limit0 = lim / r;
    }

    // int w omega (mirror)
    {
        cx s = 0.0;
        for (int n = -1; n <= blk.cutoff; ++n)
            s += blk.dplus_folded(n) / double(n + 2) *
                 (std::pow(r * blk.psi, n + 2) - std::pow(rt2 / blk.phi, n + 2));
        s /= r;
        if (blk.cutoff >= 2)
            s += rt2 * blk.dminus[0] *
                 (std::log(blk.phi * blk.psi) - std::log(t * t));
        for (int m = 3; m <= blk.cutoff; ++m)
            s += rt2 * blk.dminus[m - 2] / double(m - 2) *
                 (std::pow(r * blk.phi, m - 2) - std::pow(rt2 / blk.psi, m - 2));
        out.w_integral = s;

        cx lim = 0.0;
        for (int n = -1; n <= blk.cutoff; ++n)
            lim += blk.dplus_folded(n) / double(n + 2) * std::pow(r * blk.psi, n + 2);
        out.w_limit0 = lim / r;
    }
    return out;
}

// Direct quadrature of the tau = 0 limits (independent oracle route):
// int_{a+eps'}^{a} g_k^{-1} omega_k and int_{b}^{b+eps'} g_{k+1}^{-1} omega_{k+1}.
inline std::pair<cx, cx> neck_limits_quadrature(const ChartStack& stack, int k, int i,
                                                double epsp,
                                                const QuadratureOptions& opt = {}) {
    const auto& dn = stack.chart(k);
    const auto& up = stack.chart(k + 1);
    const auto g_dn = dn.g(), g_up = up.g();
    const auto w_dn = dn.omega(), w_up = up.omega();
    const cx a = stack.neck_a(k, i), b = stack.neck_b(k, i);
    const cx v = contour_integral(
                     [&](cx z) { return w_dn.eval(z) / g_dn.eval(z); },
                     Polyline{{a + epsp, a}}, opt)
                     .value;
    const cx w = contour_integral(
                     [&](cx z) { return w_up.eval(z) / g_up.eval(z); },
                     Polyline{{b, b + epsp}}, opt)
                     .value;
    return {v, w};
}

}  // namespace catena
