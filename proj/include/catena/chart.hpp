#pragma once

// Per-level Weierstrass data at t = 0: nodes a_{k,i} (this level) and
// b_{k-1,i} (level below) on the k-th sphere, weight families alpha/beta for
// the rational function g_k and gamma for the differential omega_k.

#include <optional>
#include <vector>

#include "catena/config.hpp"
#include "catena/poly.hpp"
#include "catena/types.hpp"

namespace catena {

// Finite sum of simple-pole terms  sum_i res_i / (z - p_i).
struct RationalForm {
    std::vector<cx> poles;
    std::vector<cx> residues;

    cx eval(cx z) const {
        cx v = 0.0;
        for (size_t i = 0; i < poles.size(); ++i) v += residues[i] / (z - poles[i]);
        return v;
    }

    cx eval_deriv(cx z) const {
        cx v = 0.0;
        for (size_t i = 0; i < poles.size(); ++i) {
            const cx d = z - poles[i];
            v -= residues[i] / (d * d);
        }
        return v;
    }

    int find_pole(cx p, double tol = 1e-12) const {
        for (size_t i = 0; i < poles.size(); ++i)
            if (std::abs(poles[i] - p) <= tol) return static_cast<int>(i);
        return -1;
    }

    cx residue_at(cx p) const {
        const int i = find_pole(p);
        if (i < 0) throw Error("residue: pole not present in the form");
        return residues[i];
    }

    // value at p with the pole term at p removed
    cx regular_at(cx p) const {
        cx v = 0.0;
        for (size_t i = 0; i < poles.size(); ++i) {
            if (std::abs(poles[i] - p) <= 1e-12) continue;
            v += residues[i] / (p - poles[i]);
        }
        return v;
    }

    cx total_residue() const {
        cx s = 0.0;
        for (cx r : residues) s += r;
        return s;
    }

    Polynomial denominator() const { return Polynomial::from_roots(poles); }

    // numerator over the common denominator prod (z - p_i)
    Polynomial numerator() const {
        Polynomial num = Polynomial::zero();
        for (size_t i = 0; i < poles.size(); ++i) {
            std::vector<cx> others;
            for (size_t j = 0; j < poles.size(); ++j)
                if (j != i) others.push_back(poles[j]);
            num = num + Polynomial::from_roots(others, residues[i]);
        }
        return num;
    }
};

// Residue of a product of two simple-pole forms at p: with f = A/(z-p) + F,
// g = B/(z-p) + G (F, G regular at p), Res_p(fg) = A G(p) + B F(p).
inline cx residue_product(const RationalForm& f, const RationalForm& g, cx p) {
    const int fi = f.find_pole(p);
    const int gi = g.find_pole(p);
    if (fi < 0 && gi < 0) throw Error("residue: pole not present in the product");
    const cx A = fi >= 0 ? f.residues[fi] : cx(0.0);
    const cx B = gi >= 0 ? g.residues[gi] : cx(0.0);
    return A * g.regular_at(p) + B * f.regular_at(p);
}

struct SphereChart {
    int k = 0;
    bool partial = false;          // level below lies outside the window
    std::vector<cx> a;             // a_{k,i}, i = 1..n_k
    std::vector<cx> b;             // b_{k-1,i}, i = 1..n_{k-1}
    std::vector<cx> alpha;         // weights on a (sum 1)
    std::vector<cx> beta;          // weights on b (sum 1)
    std::vector<cx> gamma_a;       // gamma_{k,i}
    std::vector<cx> gamma_b;       // gamma_{k-1,i}

    int n_a() const { return static_cast<int>(a.size()); }
    int n_b() const { return static_cast<int>(b.size()); }

    // g_k(z) = sum beta/(z - b) - sum alpha/(z - a)
    RationalForm g() const {
        RationalForm f;
        for (int i = 0; i < n_b(); ++i) {
            f.poles.push_back(b[i]);
            f.residues.push_back(beta[i]);
        }
        for (int i = 0; i < n_a(); ++i) {
            f.poles.push_back(a[i]);
            f.residues.push_back(-alpha[i]);
        }
        return f;
    }

    // omega_k/dz = sum gamma_b/(z - b) - sum gamma_a/(z - a)
    RationalForm omega() const {
        RationalForm f;
        for (int i = 0; i < n_b(); ++i) {
            f.poles.push_back(b[i]);
            f.residues.push_back(gamma_b[i]);
        }
        for (int i = 0; i < n_a(); ++i) {
            f.poles.push_back(a[i]);
            f.residues.push_back(-gamma_a[i]);
        }
        return f;
    }

    std::vector<cx> nodes() const {
        std::vector<cx> v = a;
        v.insert(v.end(), b.begin(), b.end());
        return v;
    }

    double min_node_gap() const {
        const auto v = nodes();
        double gap = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j)
                gap = std::min(gap, std::abs(v[i] - v[j]));
        return gap;
    }

    cx sum_alpha() const {
        cx s = 0.0;
        for (cx v : alpha) s += v;
        return s;
    }
    cx sum_beta() const {
        cx s = 0.0;
        for (cx v : beta) s += v;
        return s;
    }
    cx sum_gamma_a() const {
        cx s = 0.0;
        for (cx v : gamma_a) s += v;
        return s;
    }
    cx sum_gamma_b() const {
        cx s = 0.0;
        for (cx v : gamma_b) s += v;
        return s;
    }

    // leading coefficient of z^2 g_k(z) at infinity (exact):
    // sum beta b - sum alpha a, valid when sum beta = sum alpha
    cx infinity_coefficient() const {
        cx s = 0.0;
        for (int i = 0; i < n_b(); ++i) s += beta[i] * b[i];
        for (int i = 0; i < n_a(); ++i) s -= alpha[i] * a[i];
        return s;
    }

    void validate() const {
        if (a.empty()) throw FormatError("chart: a-node list empty");
        if (alpha.size() != a.size() || gamma_a.size() != a.size() ||
            beta.size() != b.size() || gamma_b.size() != b.size())
            throw FormatError("chart: weight/node count mismatch");
        // nodes pairwise distinct
        const auto v = nodes();
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j)
                if (std::abs(v[i] - v[j]) < 1e-12)
                    throw DegenerateConfiguration("chart: coincident nodes");
        if (!partial) {
            if (std::abs(sum_alpha() - 1.0) > 1e-10 || std::abs(sum_beta() - 1.0) > 1e-10)
                throw FormatError("chart: alpha/beta weights must sum to 1");
        }
    }
};

// omega_k as a rational form, enforcing the gamma compatibility relation
// (equal gamma sums across consecutive levels) so omega is holomorphic at
// infinity.  Partial boundary charts bypass the check.
inline RationalForm omega0(const SphereChart& chart) {
    if (!chart.partial) {
        if (std::abs(chart.sum_gamma_a() - chart.sum_gamma_b()) > 1e-10)
            throw FormatError(
                "omega0: gamma sums differ across the level (compatibility relation "
                "violated)");
        const auto w = chart.omega();
        if (std::abs(w.total_residue()) > 1e-10)
            throw Error("omega0: nonzero residue at infinity");
        return w;
    }
    return chart.omega();
}

// Charts over a window of levels with the central values
//   a0_{k,i} = (-1)^k conj^k(p_{k,i} - p_{k-1,1}),
//   b0_{k,i} = (-1)^{k+1} conj^{k+1}(p_{k,i} - p_{k,1}),
//   alpha0 = beta0 = gamma0 = 1/n_k.
// The window floor has no b-side (partial); its a-nodes use the convention
// p_{k_min-1,1} = 0, which only fixes a translation within that sphere.
class ChartStack {
public:
    explicit ChartStack(const Configuration& cfg) : cfg_(cfg) {
        cfg.validate();
        for (int k = cfg.k_min; k <= cfg.k_max(); ++k) {
            SphereChart ch;
            ch.k = k;
            ch.partial = !cfg.contains(k - 1);
            const cx pk1_below = ch.partial ? cx(0.0) : cfg.point(k - 1, 1);
            const double ck = cfg.c(k);
            for (int i = 1; i <= cfg.n(k); ++i) {
                ch.a.push_back(neg1k(k) * cjk(k, cfg.point(k, i) - pk1_below));
                ch.alpha.push_back(ck);
                ch.gamma_a.push_back(ck);
            }
            if (!ch.partial) {
                const double cb = cfg.c(k - 1);
                for (int i = 1; i <= cfg.n(k - 1); ++i) {
                    ch.b.push_back(neg1k(k) *
                                   cjk(k, cfg.point(k - 1, i) - cfg.point(k - 1, 1)));
                    ch.beta.push_back(cb);
                    ch.gamma_b.push_back(cb);
                }
            }
            ch.validate();
            charts_.push_back(std::move(ch));
        }
    }

    const Configuration& configuration() const { return cfg_; }
    int k_min() const { return cfg_.k_min; }
    int k_max() const { return cfg_.k_max(); }
    bool has_chart(int k) const { return k >= k_min() && k <= k_max(); }

    const SphereChart& chart(int k) const { return charts_[k - k_min()]; }
    SphereChart& chart(int k) { return charts_[k - k_min()]; }

    // neck (k, i): a_{k,i} on sphere k, b_{k,i} on sphere k+1; requires both
    // charts.  i is 1-based.
    bool has_neck(int k, int i) const {
        return has_chart(k) && has_chart(k + 1) && i >= 1 && i <= chart(k).n_a();
    }

    cx neck_a(int k, int i) const { return chart(k).a[i - 1]; }
    cx neck_b(int k, int i) const { return chart(k + 1).b[i - 1]; }
    cx neck_gamma(int k, int i) const { return chart(k).gamma_a[i - 1]; }

    double min_node_gap() const {
        double g = std::numeric_limits<double>::infinity();
        for (const auto& ch : charts_)
            if (ch.nodes().size() >= 2) g = std::min(g, ch.min_node_gap());
        return g;
    }

private:
    Configuration cfg_;
    std::vector<SphereChart> charts_;
};

}  // namespace catena
