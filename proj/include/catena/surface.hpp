#pragma once

// First-order geometric model: limit sheet graphs h_k with parity maps,
// matched catenoid-like neck patches, the Gauss map, and embeddedness
// diagnostics.  The necks are an explicit approximate model (log-growth and
// gluing heights matched to the sheets), not the exact minimal surface.

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "catena/chart.hpp"
#include "catena/config.hpp"

namespace catena {

// Gauss map g = (t g_k)^{(-1)^k} on sphere k.
inline cx gauss(const SphereChart& chart, double t, cx z) {
    const auto g = chart.g();
    for (cx n : chart.nodes())
        if (std::abs(z - n) < 1e-12)
            throw Error("gauss: evaluation at a pole of g");
    const cx v = t * g.eval(z);
    return parity_even(chart.k) ? v : 1.0 / v;
}

// Solve 1/g_{k+1}(z) = w near the node b (Newton on the rational form);
// used to realize the neck identification v(z) w(z') = t^2.
inline cx invert_w(const SphereChart& chart_up, cx b_node, cx w_target) {
    const auto g = chart_up.g();
    const cx beta = g.residue_at(b_node);
    cx z = b_node + beta * w_target;  // first-order seed: w ~ (z - b)/beta
    for (int it = 0; it < 60; ++it) {
        const cx f = 1.0 / g.eval(z) - w_target;
        if (std::abs(f) < 1e-14 * (1.0 + std::abs(w_target))) return z;
        const cx df = -g.eval_deriv(z) / (g.eval(z) * g.eval(z));
        z -= f / df;
    }
    throw SolveError("invert_w: Newton iteration for the neck coordinate failed");
}

// ---------------------------------------------------------------------------
// Sheets
// ---------------------------------------------------------------------------

// Limit graph of level k in the affine-scaled frame.  The local chart height
//   h_k(z) = sum c_{k-1} log|z - b_{k-1,i}| - sum c_k log|z - a_{k,i}|
// is realized over a physical horizontal coordinate zeta: even sheets map
// zeta -> conj(z), odd sheets zeta -> -z, plus a per-level frame shift; in
// physical coordinates every node of level k sits at conj(p_{k,i}).
struct SheetModel {
    int k = 0;
    bool even = false;           // parity flag
    cx shift{};                  // physical = parity(z_local) + shift
    std::vector<cx> below;       // physical b-node positions (weight c_below)
    std::vector<cx> above;       // physical a-node positions (weight c_above)
    double c_below = 0, c_above = 0;
    double H = 0;                // vertical offset of the sheet
    cx origin{};                 // normalization point O (physical)
    double glue_radius = 0;      // removed-disk radius
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    double sup_height = 0;       // sampled sup |height_rel| over the domain

    double height_rel(cx zeta) const {
        auto h = [&](cx q) {
            double v = 0.0;
            for (cx n : below) v += c_below * std::log(std::abs(q - n));
            for (cx n : above) v -= c_above * std::log(std::abs(q - n));
            return v;
        };
        return h(zeta) - h(origin);
    }

    double surface_height(cx zeta) const { return H + height_rel(zeta); }

    bool in_domain(cx zeta) const {
        if (zeta.real() < x_lo || zeta.real() > x_hi || zeta.imag() < y_lo ||
            zeta.imag() > y_hi)
            return false;
        for (cx n : below)
            if (std::abs(zeta - n) < glue_radius) return false;
        for (cx n : above)
            if (std::abs(zeta - n) < glue_radius) return false;
        return true;
    }
};

struct SheetStack {
    std::vector<SheetModel> sheets;  // levels k_min .. k_max
    double t = 0;
    bool offsets_ordered = false;    // H strictly increasing
    bool slabs_disjoint = false;     // consecutive slabs separated
    double min_slab_separation = 0;

    const SheetModel& sheet(int k) const { return sheets[k - sheets.front().k]; }
};

struct SheetOptions {
    double glue_radius = 0.3;
    double box_inflate = 3.0;
    int sup_samples = 96;       // grid used to sample sup |h|
    bool include_finite_part = false;  // add per-gap Laurent finite parts
    std::vector<double> finite_parts;  // per gap, when included
};

// Sheets with offsets H_{k+1} - H_k = -2 c_k log t.  Throws only when the
// offsets fail to increase (t >= 1); slab overlap at larger t is recorded so
// the embeddedness report can fail diagnostically.
inline SheetStack build_sheets(const Configuration& cfg, double t,
                               const SheetOptions& opt = {}) {
    cfg.validate();
    if (!(t > 0.0) || t >= 1.0)
        throw Error("build_sheets: t must lie in (0, 1)");

    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (int k = cfg.k_min; k <= cfg.k_max(); ++k)
        for (cx p : cfg.level(k)) {
            const cx q = std::conj(p);
            xlo = std::min(xlo, q.real());
            xhi = std::max(xhi, q.real());
            ylo = std::min(ylo, q.imag());
            yhi = std::max(yhi, q.imag());
        }
    xlo -= opt.box_inflate;
    xhi += opt.box_inflate;
    ylo -= opt.box_inflate;
    yhi += opt.box_inflate;

    SheetStack stack;
    stack.t = t;
    double H = 0.0;
    for (int k = cfg.k_min; k <= cfg.k_max(); ++k) {
        SheetModel sh;
        sh.k = k;
        sh.even = parity_even(k);
        sh.shift = cfg.contains(k - 1) ? std::conj(cfg.point(k - 1, 1)) : cx(0.0);
        if (cfg.contains(k - 1)) {
            sh.c_below = cfg.c(k - 1);
            for (cx p : cfg.level(k - 1)) sh.below.push_back(std::conj(p));
        }
        sh.c_above = cfg.c(k);
        for (cx p : cfg.level(k)) sh.above.push_back(std::conj(p));
        sh.H = H;
        sh.glue_radius = opt.glue_radius;
        sh.x_lo = xlo;
        sh.x_hi = xhi;
        sh.y_lo = ylo;
        sh.y_hi = yhi;

        // origin: box corner pulled inward, forced away from all nodes
        cx O{xlo + 0.5, ylo + 0.5};
        for (int tries = 0; tries < 64; ++tries) {
            bool ok = true;
            for (cx n : sh.below)
                if (std::abs(O - n) < 2.0 * opt.glue_radius) ok = false;
            for (cx n : sh.above)
                if (std::abs(O - n) < 2.0 * opt.glue_radius) ok = false;
            if (ok) break;
            O += cx(0.37, 0.23);
        }
        sh.origin = O;

        double sup = 0.0;
        for (int ix = 0; ix <= opt.sup_samples; ++ix)
            for (int iy = 0; iy <= opt.sup_samples; ++iy) {
                const cx z{xlo + (xhi - xlo) * ix / opt.sup_samples,
                           ylo + (yhi - ylo) * iy / opt.sup_samples};
                if (!sh.in_domain(z)) continue;
                sup = std::max(sup, std::abs(sh.height_rel(z)));
            }
        sh.sup_height = sup;
        stack.sheets.push_back(std::move(sh));

        if (k < cfg.k_max()) {
            double gap = -2.0 * cfg.c(k) * std::log(t);
            if (opt.include_finite_part &&
                static_cast<size_t>(k - cfg.k_min) < opt.finite_parts.size())
                gap += opt.finite_parts[k - cfg.k_min];
            H += gap;
        }
    }

    stack.offsets_ordered = true;
    stack.slabs_disjoint = true;
    stack.min_slab_separation = std::numeric_limits<double>::infinity();
    for (size_t s = 0; s + 1 < stack.sheets.size(); ++s) {
        const auto& lo = stack.sheets[s];
        const auto& hi = stack.sheets[s + 1];
        if (hi.H <= lo.H) stack.offsets_ordered = false;
        const double sep = (hi.H - hi.sup_height) - (lo.H + lo.sup_height);
        stack.min_slab_separation = std::min(stack.min_slab_separation, sep);
        if (sep <= 0) stack.slabs_disjoint = false;
    }
    if (!stack.offsets_ordered)
        throw Error("build_sheets: t too large, sheet offsets not increasing");
    return stack;
}

// ---------------------------------------------------------------------------
// Necks
// ---------------------------------------------------------------------------

// Catenoid-like patch rho = w cosh((x3 - z_mid)/c) between the gluing
// circles; w solves glue_radius = w cosh(Delta/(2c)).
struct NeckModel {
    int k = 0, i = 0;
    cx center{};          // physical axis position conj(p_{k,i})
    double c = 0;         // log growth c_k
    double waist = 0;
    double glue_radius = 0;
    double z_bottom = 0, z_top = 0, z_mid = 0;
    double sigma_max = 0;  // patch parameter bound, x3 = z_mid + c sigma
    double continuity_tol = 0;  // sheet height variation absorbed by the blend
    bool matched = true;        // false when the sheets overlap at this neck

    double radius_at_sigma(double sigma) const { return waist * std::cosh(sigma); }
    double height_at_sigma(double sigma) const { return z_mid + c * sigma; }
};

// Necks whose gluing heights cannot be matched (sheets overlapping, t too
// large) come back with matched = false so the embeddedness report can fail
// diagnostically.
inline std::vector<NeckModel> build_necks(const SheetStack& stack,
                                          int circle_samples = 64) {
    std::vector<NeckModel> out;
    for (size_t s = 0; s + 1 < stack.sheets.size(); ++s) {
        const auto& lo = stack.sheets[s];
        const auto& hi = stack.sheets[s + 1];
        for (size_t i = 0; i < lo.above.size(); ++i) {
            NeckModel nk;
            nk.k = lo.k;
            nk.i = static_cast<int>(i) + 1;
            nk.center = lo.above[i];
            nk.c = lo.c_above;
            nk.glue_radius = lo.glue_radius;

            double mean_lo = 0.0, mean_hi = 0.0;
            for (int q = 0; q < circle_samples; ++q) {
                const double th = 2.0 * PI * q / circle_samples;
                const cx z = nk.center + nk.glue_radius * cx(std::cos(th), std::sin(th));
                mean_lo += lo.surface_height(z);
                mean_hi += hi.surface_height(z);
            }
            mean_lo /= circle_samples;
            mean_hi /= circle_samples;
            nk.z_bottom = mean_lo;
            nk.z_top = mean_hi;
            const double delta = nk.z_top - nk.z_bottom;
            if (delta <= 0) {
                nk.matched = false;
                out.push_back(nk);
                continue;
            }
            nk.z_mid = 0.5 * (nk.z_bottom + nk.z_top);
            nk.sigma_max = delta / (2.0 * nk.c);
            nk.waist = nk.glue_radius / std::cosh(nk.sigma_max);

            double tol = 0.0;
            for (int q = 0; q < circle_samples; ++q) {
                const double th = 2.0 * PI * q / circle_samples;
                const cx z = nk.center + nk.glue_radius * cx(std::cos(th), std::sin(th));
                tol = std::max(tol, std::abs(lo.surface_height(z) - nk.z_bottom));
                tol = std::max(tol, std::abs(hi.surface_height(z) - nk.z_top));
            }
            nk.continuity_tol = tol;
            out.push_back(nk);
        }
    }
    return out;
}

// Independent 1-d oracle for the waist: bisection on the matching residual
// glue = w cosh(Delta/(2c)) in w.
inline double waist_by_bisection(double glue, double delta, double c) {
    double lo = 1e-300, hi = glue;
    auto f = [&](double w) { return w * std::cosh(delta / (2.0 * c)) - glue; };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) > 0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Embeddedness diagnostics
// ---------------------------------------------------------------------------

struct EmbeddednessCheck {
    std::string name;
    double margin = 0;
    bool pass = false;
};

struct EmbeddednessReport {
    std::vector<EmbeddednessCheck> checks;
    bool pass = false;
};

// forward declaration; the mesh spot check lives in mesh.hpp
struct SurfaceMesh;
int count_triangle_intersections(const SurfaceMesh& mesh, int samples, unsigned seed);

inline EmbeddednessReport embeddedness_report(const SheetStack& stack,
                                              const std::vector<NeckModel>& necks,
                                              const SurfaceMesh* mesh = nullptr,
                                              int spot_samples = 4000,
                                              unsigned seed = 12345) {
    EmbeddednessReport rep;

    {
        EmbeddednessCheck c;
        c.name = "slab separation";
        c.margin = stack.sheets.size() >= 2 ? stack.min_slab_separation
                                            : std::numeric_limits<double>::infinity();
        c.pass = c.margin > 0;
        rep.checks.push_back(c);
    }
    {
        EmbeddednessCheck c;
        c.name = "neck gluing matched";
        int unmatched = 0;
        for (const auto& nk : necks)
            if (!nk.matched) ++unmatched;
        c.margin = -double(unmatched);
        c.pass = unmatched == 0;
        rep.checks.push_back(c);
    }
    {
        EmbeddednessCheck c;
        c.name = "neck cylinders disjoint";
        c.margin = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < necks.size(); ++a)
            for (size_t b = a + 1; b < necks.size(); ++b) {
                if (necks[a].k != necks[b].k) continue;
                c.margin = std::min(c.margin,
                                    std::abs(necks[a].center - necks[b].center) -
                                        2.0 * necks[a].glue_radius);
            }
        c.pass = c.margin > 0;
        rep.checks.push_back(c);
    }
    if (mesh != nullptr) {
        EmbeddednessCheck c;
        c.name = "triangle spot check";
        const int hits = count_triangle_intersections(*mesh, spot_samples, seed);
        c.margin = -double(hits);
        c.pass = hits == 0;
        rep.checks.push_back(c);
    }

    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

}  // namespace catena
