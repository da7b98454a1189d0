#pragma once

// Dense complex polynomials: arithmetic, evaluation, roots via the companion
// matrix, and division with remainder.

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "catena/types.hpp"

namespace catena {

struct Polynomial {
    std::vector<cx> c;  // ascending coefficients; c[j] multiplies z^j

    static Polynomial zero() { return {}; }
    static Polynomial one() { return {{cx(1.0)}}; }
    static Polynomial from_roots(const std::vector<cx>& roots, cx lead = cx(1.0)) {
        Polynomial p{{lead}};
        for (cx r : roots) p = p * Polynomial{{-r, cx(1.0)}};
        return p;
    }

    int degree() const {
        for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j)
            if (c[j] != cx(0.0)) return j;
        return -1;  // zero polynomial
    }

    Polynomial trimmed(double tol = 0.0) const {
        Polynomial p = *this;
        while (!p.c.empty() && std::abs(p.c.back()) <= tol) p.c.pop_back();
        return p;
    }

    cx eval(cx z) const {
        cx v = 0.0;
        for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) v = v * z + c[j];
        return v;
    }

    Polynomial derivative() const {
        Polynomial d;
        for (size_t j = 1; j < c.size(); ++j) d.c.push_back(double(j) * c[j]);
        return d;
    }

    Polynomial operator*(const Polynomial& o) const {
        if (c.empty() || o.c.empty()) return {};
        Polynomial p;
        p.c.assign(c.size() + o.c.size() - 1, cx(0.0));
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) p.c[i + j] += c[i] * o.c[j];
        return p;
    }

    Polynomial operator+(const Polynomial& o) const {
        Polynomial p;
        p.c.assign(std::max(c.size(), o.c.size()), cx(0.0));
        for (size_t j = 0; j < c.size(); ++j) p.c[j] += c[j];
        for (size_t j = 0; j < o.c.size(); ++j) p.c[j] += o.c[j];
        return p;
    }

    Polynomial operator-() const {
        Polynomial p = *this;
        for (auto& v : p.c) v = -v;
        return p;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial operator*(cx s) const {
        Polynomial p = *this;
        for (auto& v : p.c) v *= s;
        return p;
    }

    // Roots via the companion matrix of the monic normalization.  The
    // leading coefficient is detected with a relative tolerance so that
    // analytically cancelled top coefficients do not produce huge spurious
    // roots.
    std::vector<cx> roots(double lead_rel_tol = 1e-11) const {
        double scale = 0.0;
        for (cx v : c) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return {};
        const Polynomial p = trimmed(lead_rel_tol * scale);
        const int d = static_cast<int>(p.c.size()) - 1;
        if (d <= 0) return {};
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
        for (int j = 0; j < d; ++j) C(j, d - 1) = -p.c[j] / p.c[d];
        for (int j = 1; j < d; ++j) C(j, j - 1) = 1.0;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
        std::vector<cx> out;
        for (int j = 0; j < d; ++j) out.push_back(es.eigenvalues()(j));
        return out;
    }
};

// Quotient and remainder with deg(rem) < deg(divisor).
struct PolyDivision {
    Polynomial quotient, remainder;
};

inline PolyDivision divide(const Polynomial& num, const Polynomial& den) {
    const int dd = den.degree();
    if (dd < 0) throw Error("polynomial division by zero");
    Polynomial r = num.trimmed();
    int dn = r.degree();
    Polynomial q;
    if (dn >= dd) q.c.assign(dn - dd + 1, cx(0.0));
    while (dn >= dd) {
        const int k = dn - dd;
        const cx f = r.c[dn] / den.c[dd];
        q.c[k] = f;
        for (int j = 0; j <= dd; ++j) r.c[k + j] -= f * den.c[j];
        r.c[dn] = cx(0.0);  // the leading term cancels exactly
        r = r.trimmed();
        dn = r.degree();
    }
    return {q.trimmed(), r};
}

}  // namespace catena
