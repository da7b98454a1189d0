#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "catena/types.hpp"

namespace catena {

// Sequence of level sizes n_k over a contiguous window of level indices.
struct LevelType {
    int k_min = 0;
    std::vector<int> sizes;

    int level_count() const { return static_cast<int>(sizes.size()); }
    int k_max() const { return k_min + level_count() - 1; }
    bool contains(int k) const { return k >= k_min && k <= k_max(); }

    // n_k, with n = 0 outside the window (empty neighbor sums at the edges).
    int size_at(int k) const { return contains(k) ? sizes[k - k_min] : 0; }

    int width() const {
        int w = 0;
        for (int n : sizes) w = std::max(w, n);
        return w;
    }

    void validate() const {
        if (sizes.empty()) throw FormatError("level type: empty window");
        for (int n : sizes)
            if (n < 1) throw FormatError("level type: every n_k must be >= 1");
    }
};

// Points p_{k,i} of a configuration over a contiguous window of levels.
// Weights c_k = 1/n_k are derived.
struct Configuration {
    int k_min = 0;
    std::vector<std::vector<cx>> pts;  // pts[k - k_min][i - 1]

    int level_count() const { return static_cast<int>(pts.size()); }
    int k_max() const { return k_min + level_count() - 1; }
    bool contains(int k) const { return k >= k_min && k <= k_max(); }

    int n(int k) const {
        return contains(k) ? static_cast<int>(pts[k - k_min].size()) : 0;
    }
    double c(int k) const { return 1.0 / static_cast<double>(n(k)); }

    const std::vector<cx>& level(int k) const { return pts[k - k_min]; }
    std::vector<cx>& level(int k) { return pts[k - k_min]; }
    cx point(int k, int i) const { return pts[k - k_min][i - 1]; }  // i is 1-based

    LevelType type() const {
        LevelType t;
        t.k_min = k_min;
        t.sizes.reserve(pts.size());
        for (const auto& lv : pts) t.sizes.push_back(static_cast<int>(lv.size()));
        return t;
    }

    int total_points() const {
        int m = 0;
        for (const auto& lv : pts) m += static_cast<int>(lv.size());
        return m;
    }

    // Bounding-box diagonal; scale reference for the distinctness guard.
    double diameter() const {
        double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
        for (const auto& lv : pts)
            for (cx p : lv) {
                xlo = std::min(xlo, p.real());
                xhi = std::max(xhi, p.real());
                ylo = std::min(ylo, p.imag());
                yhi = std::max(yhi, p.imag());
            }
        double d = std::hypot(xhi - xlo, yhi - ylo);
        return d > 0 ? d : 1.0;
    }

    // Points must be distinct within a level and across adjacent levels.
    void validate(double rel_tol = kDistinctRelTol) const {
        if (pts.empty()) throw FormatError("configuration: empty window");
        for (const auto& lv : pts)
            if (lv.empty()) throw FormatError("configuration: empty level");
        const double tol = rel_tol * diameter();
        auto fail = [](int k, int i, int k2, int j) {
            std::ostringstream os;
            os << "degenerate configuration: points (" << k << "," << i << ") and ("
               << k2 << "," << j << ") coincide within tolerance";
            throw DegenerateConfiguration(os.str());
        };
        for (int k = k_min; k <= k_max(); ++k) {
            const auto& lv = level(k);
            for (size_t i = 0; i < lv.size(); ++i)
                for (size_t j = i + 1; j < lv.size(); ++j)
                    if (std::abs(lv[i] - lv[j]) <= tol)
                        fail(k, int(i) + 1, k, int(j) + 1);
            if (contains(k + 1)) {
                const auto& up = level(k + 1);
                for (size_t i = 0; i < lv.size(); ++i)
                    for (size_t j = 0; j < up.size(); ++j)
                        if (std::abs(lv[i] - up[j]) <= tol)
                            fail(k, int(i) + 1, k + 1, int(j) + 1);
            }
        }
    }

    Configuration translated(cx w) const {
        Configuration out = *this;
        for (auto& lv : out.pts)
            for (auto& p : lv) p += w;
        return out;
    }

    Configuration scaled(cx lambda) const {
        if (lambda == cx(0.0)) throw Error("scale: lambda must be nonzero");
        Configuration out = *this;
        for (auto& lv : out.pts)
            for (auto& p : lv) p *= lambda;
        return out;
    }

    Configuration conjugated() const {
        Configuration out = *this;
        for (auto& lv : out.pts)
            for (auto& p : lv) p = std::conj(p);
        return out;
    }
};

// Forces F_{k,i} and level quantities G_k.  G_k exists for levels with a
// lower neighbor inside the window.  Levels missing a neighbor are flagged
// partial; balance checks skip them.
struct ForceStack {
    int k_min = 0;
    std::vector<std::vector<cx>> F;        // F[k - k_min][i - 1]
    std::vector<std::optional<cx>> G;      // G[k - k_min]
    std::vector<bool> partial;             // level lacks a neighbor in-window
    std::vector<cx> stacked;               // (G_k, F_{k,2..n_k}) for k >= k_min+1

    int k_max() const { return k_min + static_cast<int>(F.size()) - 1; }
    cx force(int k, int i) const { return F[k - k_min][i - 1]; }
    bool has_G(int k) const { return G[k - k_min].has_value(); }
    cx g(int k) const { return *G[k - k_min]; }
    bool is_partial(int k) const { return partial[k - k_min]; }

    // max |F_{k,i}| over non-partial levels
    double interior_residual() const {
        double r = 0.0;
        for (size_t lk = 0; lk < F.size(); ++lk) {
            if (partial[lk]) continue;
            for (cx f : F[lk]) r = std::max(r, std::abs(f));
        }
        return r;
    }
};

// Change of variables (l_k, u_{k,i}): l_k = p_{k,1} - p_{k-1,1} for
// k >= k_min+1, u_{k,i} = p_{k,i} - p_{k,1} (u_{k,1} = 0 implicit), plus the
// anchor p_{k0,1} fixing the translation gauge.
struct ReducedParams {
    int k_min = 0;
    int k0 = 0;
    cx anchor{};
    std::vector<int> sizes;                // n_k over the window
    std::vector<cx> ells;                  // l_k for k = k_min+1 .. k_max
    std::vector<std::vector<cx>> us;       // us[k - k_min][i - 2] for i >= 2

    int level_count() const { return static_cast<int>(sizes.size()); }
    int k_max() const { return k_min + level_count() - 1; }
    int n(int k) const { return sizes[k - k_min]; }
    cx ell(int k) const { return ells[k - k_min - 1]; }
    cx u(int k, int i) const {  // i >= 1, u_{k,1} = 0
        return i == 1 ? cx(0.0) : us[k - k_min][i - 2];
    }

    // Parameter vector per Eq-(3) interleaving: (l_k, u_{k,2..n_k}) per level,
    // levels k_min+1 .. k_max.
    std::vector<cx> stacked() const {
        std::vector<cx> v;
        for (int k = k_min + 1; k <= k_max(); ++k) {
            v.push_back(ell(k));
            for (int i = 2; i <= n(k); ++i) v.push_back(u(k, i));
        }
        return v;
    }
};

// Banded analytic Jacobian of the stacked force vector with respect to the
// stacked parameter vector.  Row/column blocks are indexed by the stacked
// levels k = k_first .. k_first + nblocks - 1; the block coupling row level k
// to column level m is identically zero unless |m - k| <= 1.
struct JacobianBand {
    int k_first = 0;                      // first stacked level (k_min + 1)
    std::vector<int> block_sizes;         // n_k per stacked level
    // blocks[r][d]: rows = level k_first+r, cols = level k_first+r+(d-1).
    // d = 0: sub-diagonal, d = 1: diagonal, d = 2: super-diagonal.
    std::vector<std::array<Eigen::MatrixXcd, 3>> blocks;

    int nblocks() const { return static_cast<int>(block_sizes.size()); }

    int dimension() const {
        int d = 0;
        for (int s : block_sizes) d += s;
        return d;
    }

    Eigen::MatrixXcd dense() const {
        const int N = dimension();
        Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(N, N);
        std::vector<int> off(block_sizes.size() + 1, 0);
        for (size_t r = 0; r < block_sizes.size(); ++r)
            off[r + 1] = off[r] + block_sizes[r];
        for (int r = 0; r < nblocks(); ++r)
            for (int d = 0; d < 3; ++d) {
                const int m = r + d - 1;
                if (m < 0 || m >= nblocks()) continue;
                const auto& B = blocks[r][d];
                if (B.size() == 0) continue;
                M.block(off[r], off[m], block_sizes[r], block_sizes[m]) = B;
            }
        return M;
    }
};

// ---------------------------------------------------------------------------
// forces
// ---------------------------------------------------------------------------

// F_{k,i} = 2 sum_{j!=i} c_k^2/(p_{k,i}-p_{k,j})
//           - sum_j c_k c_{k+1}/(p_{k,i}-p_{k+1,j})
//           - sum_j c_k c_{k-1}/(p_{k,i}-p_{k-1,j}),
// with empty sums at the window edges (n_{k} = 0 outside).
// G_k = sum_{i,j} c_k c_{k-1}/(p_{k,i}-p_{k-1,j}) for levels with a lower
// neighbor.
inline ForceStack forces(const Configuration& cfg) {
    cfg.validate();
    ForceStack out;
    out.k_min = cfg.k_min;
    out.F.resize(cfg.level_count());
    out.G.resize(cfg.level_count());
    out.partial.resize(cfg.level_count());

    for (int k = cfg.k_min; k <= cfg.k_max(); ++k) {
        const int lk = k - cfg.k_min;
        const auto& lv = cfg.level(k);
        const int nk = static_cast<int>(lv.size());
        const double ck = 1.0 / nk;
        out.partial[lk] = !(cfg.contains(k - 1) && cfg.contains(k + 1));
        out.F[lk].assign(nk, cx(0.0));

        for (int i = 0; i < nk; ++i) {
            cx f = 0.0;
            for (int j = 0; j < nk; ++j)
                if (j != i) f += 2.0 * ck * ck / (lv[i] - lv[j]);
            if (cfg.contains(k + 1)) {
                const auto& up = cfg.level(k + 1);
                const double cu = 1.0 / static_cast<double>(up.size());
                for (cx q : up) f -= ck * cu / (lv[i] - q);
            }
            if (cfg.contains(k - 1)) {
                const auto& dn = cfg.level(k - 1);
                const double cd = 1.0 / static_cast<double>(dn.size());
                for (cx q : dn) f -= ck * cd / (lv[i] - q);
            }
            out.F[lk][i] = f;
        }

        if (cfg.contains(k - 1)) {
            const auto& dn = cfg.level(k - 1);
            const double cd = 1.0 / static_cast<double>(dn.size());
            cx g = 0.0;
            for (cx p : lv)
                for (cx q : dn) g += ck * cd / (p - q);
            out.G[lk] = g;
        }
    }

    for (int k = cfg.k_min + 1; k <= cfg.k_max(); ++k) {
        out.stacked.push_back(out.g(k));
        const auto& fk = out.F[k - cfg.k_min];
        for (size_t i = 1; i < fk.size(); ++i) out.stacked.push_back(fk[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// reduce / realize
// ---------------------------------------------------------------------------

inline ReducedParams reduce(const Configuration& cfg, int k0) {
    if (!cfg.contains(k0)) throw Error("reduce: anchor level outside window");
    ReducedParams rp;
    rp.k_min = cfg.k_min;
    rp.k0 = k0;
    rp.anchor = cfg.point(k0, 1);
    rp.sizes = cfg.type().sizes;
    for (int k = cfg.k_min + 1; k <= cfg.k_max(); ++k)
        rp.ells.push_back(cfg.point(k, 1) - cfg.point(k - 1, 1));
    rp.us.resize(cfg.level_count());
    for (int k = cfg.k_min; k <= cfg.k_max(); ++k)
        for (int i = 2; i <= cfg.n(k); ++i)
            rp.us[k - cfg.k_min].push_back(cfg.point(k, i) - cfg.point(k, 1));
    return rp;
}

inline Configuration realize(const ReducedParams& rp) {
    Configuration cfg;
    cfg.k_min = rp.k_min;
    cfg.pts.resize(rp.level_count());
    std::vector<cx> first(rp.level_count());
    first[rp.k0 - rp.k_min] = rp.anchor;
    for (int k = rp.k0 + 1; k <= rp.k_max(); ++k)
        first[k - rp.k_min] = first[k - 1 - rp.k_min] + rp.ell(k);
    for (int k = rp.k0 - 1; k >= rp.k_min; --k)
        first[k - rp.k_min] = first[k + 1 - rp.k_min] - rp.ell(k + 1);
    for (int k = rp.k_min; k <= rp.k_max(); ++k) {
        auto& lv = cfg.pts[k - rp.k_min];
        lv.push_back(first[k - rp.k_min]);
        for (int i = 2; i <= rp.n(k); ++i)
            lv.push_back(first[k - rp.k_min] + rp.u(k, i));
    }
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------------------
// jacobian
// ---------------------------------------------------------------------------

// Analytic entries: differentiating each force term w/(D) gives -w/D^2 times
// the derivative of D with respect to the parameter; D is the corresponding
// point difference expressed in (l, u) variables.
inline JacobianBand jacobian(const ReducedParams& rp) {
    const Configuration cfg = realize(rp);
    JacobianBand J;
    J.k_first = cfg.k_min + 1;
    for (int k = cfg.k_min + 1; k <= cfg.k_max(); ++k)
        J.block_sizes.push_back(cfg.n(k));
    J.blocks.resize(J.block_sizes.size());

    auto ncols = [&](int m) { return cfg.contains(m) ? cfg.n(m) : 0; };

    for (int k = cfg.k_min + 1; k <= cfg.k_max(); ++k) {
        const int r = k - (cfg.k_min + 1);
        const int nk = cfg.n(k);
        const double ck = cfg.c(k);
        const auto& lv = cfg.level(k);

        for (int d = 0; d < 3; ++d) {
            const int m = k + d - 1;
            if (m < cfg.k_min + 1 || m > cfg.k_max()) continue;
            J.blocks[r][d] = Eigen::MatrixXcd::Zero(nk, ncols(m));
        }

        auto& diag = J.blocks[r][1];

        // --- row 0: G_k ------------------------------------------------
        {
            const auto& dn = cfg.level(k - 1);
            const double cd = cfg.c(k - 1);
            // d/dl_k and d/du_{k,i}
            cx dG_dl = 0.0;
            for (int i = 0; i < nk; ++i) {
                cx s = 0.0;
                for (cx q : dn) {
                    const cx D = lv[i] - q;
                    s += ck * cd / (D * D);
                }
                dG_dl -= s;
                if (i >= 1) diag(0, i) = -s;  // column u_{k,i+1}
            }
            diag(0, 0) = dG_dl;
            // d/du_{k-1,j}, j >= 2 (sub-diagonal block; zero when k-1 is the
            // window floor and carries no parameter columns)
            if (k - 1 >= cfg.k_min + 1) {
                auto& sub = J.blocks[r][0];
                for (int j = 1; j < cfg.n(k - 1); ++j) {
                    cx s = 0.0;
                    for (int i = 0; i < nk; ++i) {
                        const cx D = lv[i] - dn[j];
                        s += ck * cd / (D * D);
                    }
                    sub(0, j) = s;
                }
            }
        }

        // --- rows F_{k,i}, i >= 2 ---------------------------------------
        for (int i = 1; i < nk; ++i) {
            const int row = i;
            cx same_diag = 0.0;
            for (int j = 0; j < nk; ++j) {
                if (j == i) continue;
                const cx S = lv[i] - lv[j];
                const cx t = 2.0 * ck * ck / (S * S);
                same_diag -= t;
                if (j >= 1) diag(row, j) = t;  // column u_{k,j+1}
            }
            cx dF_dl = 0.0;
            if (cfg.contains(k - 1)) {
                const auto& dn = cfg.level(k - 1);
                const double cd = cfg.c(k - 1);
                for (int j = 0; j < cfg.n(k - 1); ++j) {
                    const cx D = lv[i] - dn[j];
                    const cx t = ck * cd / (D * D);
                    same_diag += t;
                    dF_dl += t;
                    if (j >= 1 && k - 1 >= cfg.k_min + 1)
                        J.blocks[r][0](row, j) = -t;
                }
            }
            if (cfg.contains(k + 1)) {
                const auto& up = cfg.level(k + 1);
                const double cu = cfg.c(k + 1);
                auto& sup = J.blocks[r][2];
                for (int j = 0; j < cfg.n(k + 1); ++j) {
                    const cx D = lv[i] - up[j];
                    const cx t = ck * cu / (D * D);
                    same_diag += t;
                    sup(row, 0) -= t;                  // column l_{k+1}
                    if (j >= 1) sup(row, j) = -t;      // column u_{k+1,j+1}
                }
            }
            diag(row, i) += same_diag;
            diag(row, 0) = dF_dl;
        }
    }
    return J;
}

// Stacked force vector evaluated from reduced parameters (finite-difference
// oracle hook for the Jacobian).
inline std::vector<cx> stacked_forces(const ReducedParams& rp) {
    return forces(realize(rp)).stacked;
}

// ---------------------------------------------------------------------------
// check_hypotheses
// ---------------------------------------------------------------------------

struct LevelMeanSeparation {
    int k = 0;         // pair (k-1, k)
    double margin = 0;  // |mean_k - mean_{k-1}|
    bool pass = false;
};

struct HypothesesReport {
    int width = 0;
    int distinct_values = 0;       // distinct entries of U up to tolerance
    double value_tolerance = 0;
    std::vector<LevelMeanSeparation> separations;
    bool pass = false;
};

inline HypothesesReport check_hypotheses(const Configuration& cfg,
                                         double rel_tol = 1e-9) {
    HypothesesReport rep;
    rep.width = cfg.type().width();

    const auto stacked = reduce(cfg, cfg.k_min).stacked();
    double scale = 0.0;
    for (cx v : stacked) scale = std::max(scale, std::abs(v));
    rep.value_tolerance = rel_tol * (1.0 + scale);
    std::vector<cx> reps;
    for (cx v : stacked) {
        bool found = false;
        for (cx r : reps)
            if (std::abs(v - r) <= rep.value_tolerance) {
                found = true;
                break;
            }
        if (!found) reps.push_back(v);
    }
    rep.distinct_values = static_cast<int>(reps.size());

    bool all = true;
    for (int k = cfg.k_min + 1; k <= cfg.k_max(); ++k) {
        cx mk = 0.0, mprev = 0.0;
        for (cx p : cfg.level(k)) mk += p;
        for (cx p : cfg.level(k - 1)) mprev += p;
        mk /= double(cfg.n(k));
        mprev /= double(cfg.n(k - 1));
        LevelMeanSeparation s;
        s.k = k;
        s.margin = std::abs(mk - mprev);
        s.pass = s.margin > rel_tol * cfg.diameter();
        all = all && s.pass;
        rep.separations.push_back(s);
    }
    rep.pass = all;
    return rep;
}

}  // namespace catena
