#pragma once

// Period computations on the t = 0 charts: A-period prescription checks,
// the renormalized balancing limit (residues of g_k^2), the horizontal limit
// H at tau = 0, and zero alignment of omega against the numerator of g.

#include <cmath>
#include <vector>

#include "catena/chart.hpp"
#include "catena/config.hpp"
#include "catena/quadrature.hpp"

namespace catena {

// ---------------------------------------------------------------------------
// A-periods
// ---------------------------------------------------------------------------

struct APeriodCheck {
    int k = 0, i = 0;          // neck label
    cx period{};               // quadrature of omega_{k+1} around C(b_{k,i}, eps)
    cx expected{};             // 2 pi i gamma_{k,i}
    double deviation = 0.0;
    double orientation_dev = 0.0;  // |period + quadrature around C(a_{k,i}, eps)|
};

// The A_{k,i} class is the circle C(b_{k,i}, eps) in sphere k+1, homologous
// to C(a_{k,i}, eps) in sphere k with the opposite orientation.
inline std::vector<APeriodCheck> a_period_checks(const ChartStack& stack, double eps,
                                                 const QuadratureOptions& opt = {}) {
    std::vector<APeriodCheck> out;
    for (int k = stack.k_min(); k < stack.k_max(); ++k) {
        const auto omega_up = omega0(stack.chart(k + 1));
        const auto omega_dn = stack.chart(k).omega();
        for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
            APeriodCheck chk;
            chk.k = k;
            chk.i = i;
            const auto up = contour_integral(
                [&](cx z) { return omega_up.eval(z); },
                Circle{stack.neck_b(k, i), eps}, opt);
            const auto dn = contour_integral(
                [&](cx z) { return omega_dn.eval(z); },
                Circle{stack.neck_a(k, i), eps}, opt);
            chk.period = up.value;
            chk.expected = 2.0 * PI * I * stack.neck_gamma(k, i);
            chk.deviation = std::abs(chk.period - chk.expected);
            chk.orientation_dev = std::abs(up.value + dn.value);
            out.push_back(chk);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Balancing limit (residue route): boF_{k,i} = conj^k(2 pi i Res_{a}(g_k)^2)
//                                            + conj^{k+1}(2 pi i Res_{b}(g_{k+1})^2)
// equals 4 pi i F_{k,i}; boG_k = -sum_i boF^-_{k,i} equals 4 pi i G_k.
// ---------------------------------------------------------------------------

struct LimitBalanceEntry {
    int k = 0, i = 0;
    cx boF{};
    cx boF_minus{}, boF_plus{};
    double deviation = 0.0;  // |boF - 4 pi i F_{k,i}|
};

struct LimitBalanceReport {
    std::vector<LimitBalanceEntry> entries;   // levels k_min .. k_max-1
    std::vector<cx> boG;                      // per level with a lower neighbor
    std::vector<double> boG_deviation;        // |boG_k - 4 pi i G_k|
    double max_force_deviation = 0.0;
    double max_G_deviation = 0.0;
};

inline LimitBalanceReport limit_balance(const ChartStack& stack) {
    const auto& cfg = stack.configuration();
    const auto fs = forces(cfg);

    LimitBalanceReport rep;
    std::vector<cx> boFminus_sum(cfg.level_count(), cx(0.0));

    for (int k = stack.k_min(); k < stack.k_max(); ++k) {
        const auto g_dn = stack.chart(k).g();
        const auto g_up = stack.chart(k + 1).g();
        for (int i = 1; i <= cfg.n(k); ++i) {
            LimitBalanceEntry e;
            e.k = k;
            e.i = i;
            e.boF_minus =
                cjk(k, 2.0 * PI * I * residue_product(g_dn, g_dn, stack.neck_a(k, i)));
            e.boF_plus = cjk(k + 1, 2.0 * PI * I *
                                        residue_product(g_up, g_up, stack.neck_b(k, i)));
            e.boF = e.boF_minus + e.boF_plus;
            e.deviation = std::abs(e.boF - 4.0 * PI * I * fs.force(k, i));
            rep.max_force_deviation = std::max(rep.max_force_deviation, e.deviation);
            rep.entries.push_back(e);
        }
    }

    // boG_k = -boF^-_k computed on chart k; defined for levels with a lower
    // neighbor (G exists there)
    for (int k = stack.k_min() + 1; k <= stack.k_max(); ++k) {
        const auto g_k = stack.chart(k).g();
        cx s = 0.0;
        for (int i = 1; i <= cfg.n(k); ++i)
            s += cjk(k, 2.0 * PI * I *
                            residue_product(g_k, g_k, stack.chart(k).a[i - 1]));
        const cx boG = -s;
        rep.boG.push_back(boG);
        const double dev = std::abs(boG - 4.0 * PI * I * fs.g(k));
        rep.boG_deviation.push_back(dev);
        rep.max_G_deviation = std::max(rep.max_G_deviation, dev);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Horizontal limit: H_{k,i}(0) = int_{b_{k,1}}^{b_{k,i}} g_{k+1}^{-1} omega_{k+1}
//                              - conj(int_{a_{k,i}}^{a_{k,1}} g_k^{-1} omega_k)
// for 2 <= i <= n_k.  Paths avoid the zeros of g (poles of the ratio).
// ---------------------------------------------------------------------------

struct HorizontalLimitEntry {
    int k = 0, i = 0;
    cx value{};
};

namespace periods_detail {

inline cx ratio_integral(const SphereChart& chart, cx from, cx to,
                         const QuadratureOptions& opt) {
    const auto g = chart.g();
    const auto w = chart.omega();
    // poles of (omega/dz)/g are the zeros of g
    const auto zeros = g.numerator().roots();
    const double margin = 0.05 * (1.0 + std::abs(to - from));
    const auto path = polyline_avoiding(from, to, zeros, margin);
    return contour_integral([&](cx z) { return w.eval(z) / g.eval(z); }, path, opt)
        .value;
}

}  // namespace periods_detail

inline std::vector<HorizontalLimitEntry> horizontal_limit(
    const ChartStack& stack, const QuadratureOptions& opt = {}) {
    std::vector<HorizontalLimitEntry> out;
    for (int k = stack.k_min(); k < stack.k_max(); ++k) {
        const int nk = stack.configuration().n(k);
        for (int i = 2; i <= nk; ++i) {
            HorizontalLimitEntry e;
            e.k = k;
            e.i = i;
            const cx up = periods_detail::ratio_integral(
                stack.chart(k + 1), stack.neck_b(k, 1), stack.neck_b(k, i), opt);
            const cx dn = periods_detail::ratio_integral(
                stack.chart(k), stack.neck_a(k, i), stack.neck_a(k, 1), opt);
            e.value = up - std::conj(dn);
            out.push_back(e);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Zero alignment: with g_k = P_k/Q_k, the functionals
//   Z_{k,i} = int_{dU_k} z^i omega / P_k,  0 <= i <= deg P_k - 1,
// vanish iff omega/P_k is holomorphic in U_k; the argument-principle count
// of zeros of omega in U_k must equal deg P_k = n_k + n_{k-1} - 2.
// ---------------------------------------------------------------------------

struct ZeroAlignmentReport {
    int k = 0;
    int expected_zero_count = 0;   // n_k + n_{k-1} - 2
    int zero_count = 0;            // argument-principle count in U_k
    double count_roundoff = 0.0;   // distance of the raw count from an integer
    std::vector<cx> Z;             // alignment functionals
    double max_Z = 0.0;
    bool pass = false;
};

inline ZeroAlignmentReport zero_alignment(const SphereChart& chart, double eps,
                                          double tol = 1e-9,
                                          const QuadratureOptions& opt = {}) {
    if (chart.partial)
        throw Error("zero_alignment: boundary chart lacks the b-side data");
    ZeroAlignmentReport rep;
    rep.k = chart.k;
    rep.expected_zero_count = chart.n_a() + chart.n_b() - 2;

    const auto g = chart.g();
    const auto w = omega0(chart);
    const Polynomial P = g.numerator();
    const auto proots = P.roots();

    // contour dU_k: outer circle minus the node circles, all zeros enclosed.
    // The disk radius shrinks when zeros of g approach the nodes, keeping the
    // eps/2 clearance margin; an unreachable margin is reported as an error.
    double zero_node_dist = std::numeric_limits<double>::infinity();
    for (cx r : proots)
        for (cx n : chart.nodes())
            zero_node_dist = std::min(zero_node_dist, std::abs(r - n));
    if (!proots.empty()) eps = std::min(eps, 0.6 * zero_node_dist);
    if (!(eps > 0))
        throw Error("zero_alignment: contour selection failure (zero of g on a node)");

    double R = 1.0;
    for (cx n : chart.nodes()) R = std::max(R, std::abs(n));
    for (cx r : proots) R = std::max(R, std::abs(r));
    R = 2.0 * R + 1.0;
    for (cx r : proots) {
        for (cx n : chart.nodes())
            if (std::abs(r - n) < 1.5 * eps)
                throw Error("zero_alignment: contour selection failure (zero of g "
                            "within margin of a removed disk)");
        if (std::abs(r) > R / 1.2)
            throw Error("zero_alignment: contour selection failure (zero near the "
                        "outer circle)");
    }

    auto around = [&](auto&& f) {
        cx total = contour_integral(f, Circle{cx(0.0), R}, opt).value;
        for (cx n : chart.nodes())
            total -= contour_integral(f, Circle{n, eps}, opt).value;
        return total;
    };

    const int dP = rep.expected_zero_count;
    for (int i = 0; i < dP; ++i) {
        const cx Zi = around([&](cx z) {
            cx zp = 1.0;
            for (int j = 0; j < i; ++j) zp *= z;
            return zp * w.eval(z) / P.eval(z);
        });
        rep.Z.push_back(Zi);
        rep.max_Z = std::max(rep.max_Z, std::abs(Zi));
    }

    // argument principle on f = omega/dz
    const cx raw = around([&](cx z) { return w.eval_deriv(z) / w.eval(z); }) /
                   (2.0 * PI * I);
    rep.zero_count = static_cast<int>(std::lround(raw.real()));
    rep.count_roundoff = std::abs(raw - cx(double(rep.zero_count)));

    rep.pass = rep.zero_count == rep.expected_zero_count && rep.max_Z <= tol &&
               rep.count_roundoff < 1e-6;
    return rep;
}

// ---------------------------------------------------------------------------
// Telescoping of sum_i oint_{A_{k,i}} g^{(-1)^k} omega across consecutive
// levels: within sphere k the total residue of g_k omega_k vanishes, so the
// level-k sum (over a-circles, A-orientation) minus the level-(k-1) sum
// (over b-circles) is zero.
// ---------------------------------------------------------------------------

inline double telescoping_deviation(const SphereChart& chart, double eps,
                                    const QuadratureOptions& opt = {}) {
    const auto g = chart.g();
    const auto w = chart.omega();
    auto f = [&](cx z) { return g.eval(z) * w.eval(z); };
    cx level_k = 0.0, level_below = 0.0;
    for (cx an : chart.a)
        level_k -= contour_integral(f, Circle{an, eps}, opt).value;
    for (cx bn : chart.b)
        level_below += contour_integral(f, Circle{bn, eps}, opt).value;
    return std::abs(level_k - level_below);
}

}  // namespace catena
