#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "catena/config.hpp"
#include "catena/types.hpp"

namespace catena {

// A finite block: configuration over the window [0, h] with a single first
// and last point (n_0 = n_h = 1).
struct FiniteConfiguration {
    Configuration cfg;

    int height() const { return cfg.k_max(); }
    cx first_point() const { return cfg.point(0, 1); }
    cx last_point() const { return cfg.point(height(), 1); }

    void validate() const {
        cfg.validate();
        if (cfg.k_min != 0) throw FormatError("finite configuration: window must start at level 0");
        if (height() < 1) throw FormatError("finite configuration: height must be >= 1");
        if (cfg.n(0) != 1 || cfg.n(height()) != 1)
            throw FormatError("finite configuration: n_0 and n_h must equal 1");
    }
};

struct ResidualReport {
    cx F_C{};                       // residual force F_{0,1}
    double sum_force_dev = 0;       // |sum F_{k,i}|
    double sum_force_scale = 0;     // sum |F_{k,i}|
    double moment_dev = 0;          // |sum p F - (1 - sum_{k=0}^h 1/n_k)|
    double moment_scale = 0;        // 1 + sum |p||F|
    double endpoint_identity_dev = 0;  // |(p_h - p_0) F_C - sum_{k=1}^h 1/n_k|
    double interior_residual = 0;   // max |F_{k,i}| over 1 <= k <= h-1
    bool balanced = false;
};

inline double balance_tolerance(cx residual_force) {
    return 1e-12 * (1.0 + std::abs(residual_force));
}

inline ResidualReport residual(const FiniteConfiguration& fc) {
    fc.validate();
    const auto fs = forces(fc.cfg);
    const int h = fc.height();

    ResidualReport rep;
    rep.F_C = fs.force(0, 1);

    cx sumF = 0.0, sumPF = 0.0;
    double sumAbsF = 0.0, sumAbsPF = 0.0;
    for (int k = 0; k <= h; ++k)
        for (int i = 1; i <= fc.cfg.n(k); ++i) {
            const cx f = fs.force(k, i);
            const cx p = fc.cfg.point(k, i);
            sumF += f;
            sumPF += p * f;
            sumAbsF += std::abs(f);
            sumAbsPF += std::abs(p) * std::abs(f);
        }
    double inv = 0.0;
    for (int k = 0; k <= h; ++k) inv += 1.0 / fc.cfg.n(k);

    rep.sum_force_dev = std::abs(sumF);
    rep.sum_force_scale = sumAbsF;
    rep.moment_dev = std::abs(sumPF - (1.0 - inv));
    rep.moment_scale = 1.0 + sumAbsPF;

    double invInner = 0.0;
    for (int k = 1; k <= h; ++k) invInner += 1.0 / fc.cfg.n(k);
    rep.endpoint_identity_dev =
        std::abs((fc.last_point() - fc.first_point()) * rep.F_C - invInner);

    double r = 0.0;
    for (int k = 1; k <= h - 1; ++k)
        for (int i = 1; i <= fc.cfg.n(k); ++i)
            r = std::max(r, std::abs(fs.force(k, i)));
    rep.interior_residual = r;
    rep.balanced = r <= balance_tolerance(rep.F_C);
    return rep;
}

inline FiniteConfiguration scale(const FiniteConfiguration& fc, cx lambda) {
    FiniteConfiguration out{fc.cfg.scaled(lambda)};
    return out;
}

// Rescale so the residual force equals `target` (compatibility workflow).
inline FiniteConfiguration scale_to_residual(const FiniteConfiguration& fc,
                                             cx target = cx(0.0, -0.5)) {
    if (target == cx(0.0)) throw Error("scale_to_residual: target must be nonzero");
    const cx fC = residual(fc).F_C;
    return scale(fc, fC / target);
}

// ---------------------------------------------------------------------------
// Non-degeneracy certificate: the map (l_1, u_{1,2..}, ..., l_h) ->
// (G_1, F_{1,2..}, ..., G_h) assembled analytically; sigma_min taken in
// doubled real coordinates.
// ---------------------------------------------------------------------------

struct NondegeneracyCertificate {
    cx determinant{};
    double sigma_min = 0;
    int dimension = 0;  // complex dimension = sum_{k=1}^h n_k
    bool pass = false;
};

inline Eigen::MatrixXd realify(const Eigen::MatrixXcd& M) {
    const int n = static_cast<int>(M.rows());
    const int m = static_cast<int>(M.cols());
    Eigen::MatrixXd R(2 * n, 2 * m);
    R.topLeftCorner(n, m) = M.real();
    R.topRightCorner(n, m) = -M.imag();
    R.bottomLeftCorner(n, m) = M.imag();
    R.bottomRightCorner(n, m) = M.real();
    return R;
}

inline Eigen::MatrixXcd block_matrix(const FiniteConfiguration& fc) {
    return jacobian(reduce(fc.cfg, 0)).dense();
}

inline NondegeneracyCertificate certify(const FiniteConfiguration& fc) {
    fc.validate();
    const Eigen::MatrixXcd M = block_matrix(fc);
    NondegeneracyCertificate cert;
    cert.dimension = static_cast<int>(M.rows());
    cert.determinant = M.determinant();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(realify(M));
    cert.sigma_min = svd.singularValues().tail(1)(0);
    cert.pass = cert.sigma_min > 0;
    return cert;
}

// ---------------------------------------------------------------------------
// Newton balancing
// ---------------------------------------------------------------------------

struct NewtonOptions {
    int max_iterations = 50;
    double sigma_min_floor = 1e-10;
    double backtrack_growth = 1.10;  // accept step if residual <= growth * old
    int max_halvings = 20;
};

struct NewtonResult {
    FiniteConfiguration config;
    int iterations = 0;
    std::vector<double> residual_history;  // max interior |F| per iterate
    cx residual_force{};
    bool converged = false;
};

namespace detail {

// Jacobian of the interior force equations with respect to the interior
// points (endpoints pinned).
inline Eigen::MatrixXcd interior_jacobian(const Configuration& cfg,
                                          const std::vector<std::pair<int, int>>& idx) {
    const int N = static_cast<int>(idx.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
    auto col_of = [&](int k, int i) -> int {
        for (int c = 0; c < N; ++c)
            if (idx[c].first == k && idx[c].second == i) return c;
        return -1;
    };
    for (int r = 0; r < N; ++r) {
        const auto [k, i] = idx[r];
        const cx p = cfg.point(k, i);
        const double ck = cfg.c(k);
        cx self = 0.0;
        for (int j = 1; j <= cfg.n(k); ++j) {
            if (j == i) continue;
            const cx S = p - cfg.point(k, j);
            const cx t = 2.0 * ck * ck / (S * S);
            self -= t;
            const int c = col_of(k, j);
            if (c >= 0) A(r, c) += t;
        }
        for (int dk : {-1, +1}) {
            if (!cfg.contains(k + dk)) continue;
            const double cn = cfg.c(k + dk);
            for (int j = 1; j <= cfg.n(k + dk); ++j) {
                const cx D = p - cfg.point(k + dk, j);
                const cx t = ck * cn / (D * D);
                self += t;
                const int c = col_of(k + dk, j);
                if (c >= 0) A(r, c) -= t;
            }
        }
        A(r, r) += self;
    }
    return A;
}

inline double interior_residual_norm(const Configuration& cfg) {
    const auto fs = forces(cfg);
    double r = 0.0;
    for (int k = cfg.k_min + 1; k <= cfg.k_max() - 1; ++k)
        for (int i = 1; i <= cfg.n(k); ++i)
            r = std::max(r, std::abs(fs.force(k, i)));
    return r;
}

inline bool distinct_ok(const Configuration& cfg) {
    try {
        cfg.validate();
        return true;
    } catch (const DegenerateConfiguration&) {
        return false;
    }
}

}  // namespace detail

// Solve F_{k,i} = 0 for 1 <= k <= h-1 by damped Newton iteration in the
// interior point coordinates, endpoints pinned (translation/scale gauge).
inline NewtonResult newton_balance(const FiniteConfiguration& init,
                                   const NewtonOptions& opt = {}) {
    init.validate();
    Configuration cfg = init.cfg;
    const int h = init.height();

    std::vector<std::pair<int, int>> idx;  // (level k, 1-based i)
    for (int k = 1; k <= h - 1; ++k)
        for (int i = 1; i <= cfg.n(k); ++i) idx.emplace_back(k, i);
    const int N = static_cast<int>(idx.size());

    NewtonResult res;
    res.residual_history.push_back(detail::interior_residual_norm(cfg));

    if (N == 0) {
        res.config = FiniteConfiguration{cfg};
        res.residual_force = residual(res.config).F_C;
        res.converged = true;
        return res;
    }

    for (int it = 0; it < opt.max_iterations; ++it) {
        const double fC = std::abs(forces(cfg).force(0, 1));
        if (res.residual_history.back() <= 1e-12 * (1.0 + fC)) break;

        const auto fs = forces(cfg);
        Eigen::VectorXcd R(N);
        for (int r = 0; r < N; ++r) R(r) = fs.force(idx[r].first, idx[r].second);

        const Eigen::MatrixXcd A = detail::interior_jacobian(cfg, idx);
        {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(realify(A));
            const double smin = svd.singularValues().tail(1)(0);
            if (smin < opt.sigma_min_floor)
                throw SolveError("newton_balance: Jacobian singular at iterate (sigma_min="
                                     + std::to_string(smin) + ")",
                                 res.residual_history);
        }
        const Eigen::VectorXcd step = A.partialPivLu().solve(-R);

        double lambda = 1.0;
        bool accepted = false;
        const double old = res.residual_history.back();
        for (int half = 0; half <= opt.max_halvings; ++half, lambda *= 0.5) {
            Configuration trial = cfg;
            for (int r = 0; r < N; ++r)
                trial.level(idx[r].first)[idx[r].second - 1] += lambda * step(r);
            if (!detail::distinct_ok(trial)) continue;
            const double rnew = detail::interior_residual_norm(trial);
            if (rnew <= opt.backtrack_growth * old || rnew <= 1e-14) {
                cfg = trial;
                res.residual_history.push_back(rnew);
                accepted = true;
                break;
            }
        }
        if (!accepted)
            throw SolveError("newton_balance: step rejected after backtracking",
                             res.residual_history);
        res.iterations = it + 1;
    }

    res.config = FiniteConfiguration{cfg};
    const auto rep = residual(res.config);
    res.residual_force = rep.F_C;
    res.converged = rep.interior_residual <= balance_tolerance(rep.F_C);
    if (!res.converged)
        throw SolveError("newton_balance: no convergence after "
                             + std::to_string(res.iterations) + " iterations",
                         res.residual_history);
    return res;
}

// Seed for an unknown type: levels on the endpoint segment, points spread by
// symmetric cot offsets perpendicular to the axis.
inline FiniteConfiguration seed_configuration(const LevelType& type, cx p0, cx ph) {
    type.validate();
    const int h = static_cast<int>(type.sizes.size()) - 1;
    if (type.k_min != 0 || h < 1 || type.sizes.front() != 1 || type.sizes.back() != 1)
        throw FormatError("seed_configuration: type must be (1, ..., 1) over [0,h]");
    const cx axis = (ph - p0) / double(h);
    const cx perp = -I * axis;
    Configuration cfg;
    cfg.k_min = 0;
    cfg.pts.resize(h + 1);
    for (int k = 0; k <= h; ++k) {
        const int nk = type.sizes[k];
        const cx base = p0 + double(k) * axis;
        for (int j = 1; j <= nk; ++j) {
            const double off =
                nk == 1 ? 0.0 : 1.0 / std::tan(double(j) * PI / double(nk + 1));
            cfg.pts[k].push_back(base + off * perp);
        }
    }
    FiniteConfiguration fc{cfg};
    fc.validate();
    return fc;
}

// ---------------------------------------------------------------------------
// Built-in blocks
// ---------------------------------------------------------------------------

// Evenly spaced chain p_{k,1} = k a, type (1,...,1), residual force 1/a.
inline FiniteConfiguration chain(cx a, int h) {
    if (a == cx(0.0)) throw FormatError("chain: a must be nonzero");
    if (h < 1) throw FormatError("chain: height must be >= 1");
    Configuration cfg;
    cfg.k_min = 0;
    cfg.pts.resize(h + 1);
    for (int k = 0; k <= h; ++k) cfg.pts[k].push_back(double(k) * a);
    FiniteConfiguration fc{cfg};
    fc.validate();
    return fc;
}

// Height-2 block of type (1,n,1): endpoints 0 and 2i, middle points
// i + cot(j pi/(n+1)); residual force (n+1)/(2ni).
inline FiniteConfiguration fan(int n) {
    if (n < 1) throw FormatError("fan: n must be >= 1");
    Configuration cfg;
    cfg.k_min = 0;
    cfg.pts.resize(3);
    cfg.pts[0].push_back(cx(0.0));
    for (int j = 1; j <= n; ++j)
        cfg.pts[1].push_back(I + 1.0 / std::tan(double(j) * PI / double(n + 1)));
    cfg.pts[2].push_back(2.0 * I);
    FiniteConfiguration fc{cfg};
    fc.validate();
    return fc;
}

// Height-3 block of type (1,2,2,1); residual force 2/(3i).
inline FiniteConfiguration ladder22() {
    const double s = std::sqrt(2.0) / 2.0;
    Configuration cfg;
    cfg.k_min = 0;
    cfg.pts = {{cx(0.0)},
               {cx(-s, 1.0), cx(s, 1.0)},
               {cx(-s, 2.0), cx(s, 2.0)},
               {cx(0.0, 3.0)}};
    FiniteConfiguration fc{cfg};
    fc.validate();
    return fc;
}

struct BuiltinParams {
    cx a{1.0, 0.0};
    int h = 1;
    int n = 1;
};

inline FiniteConfiguration builtin(const std::string& name, const BuiltinParams& p = {}) {
    if (name == "chain") return chain(p.a, p.h);
    if (name == "fan") return fan(p.n);
    if (name == "ladder22") return ladder22();
    throw FormatError("builtin: unknown block name '" + name + "'");
}

}  // namespace catena
