#pragma once

// Contour integration: trapezoid rule on circles (spectrally accurate for
// analytic integrands), composite Gauss-Legendre on polylines, both refined
// until an N vs 2N comparison stabilizes.

#include <cmath>
#include <functional>
#include <vector>

#include "catena/types.hpp"

namespace catena {

struct Circle {
    cx center{};
    double radius = 1.0;
};

struct Polyline {
    std::vector<cx> points;  // straight segments between consecutive points
};

struct QuadratureOptions {
    int initial_nodes = 256;   // per circle / per segment
    int max_nodes = 4096;
    double tol = 1e-10;
    int min_nodes = 16;
};

struct QuadratureResult {
    cx value{};
    double error_estimate = 0.0;
    int nodes = 0;
};

namespace quad_detail {

template <typename F>
cx trapezoid_circle(F&& f, const Circle& c, int n) {
    cx sum = 0.0;
    for (int j = 0; j < n; ++j) {
        const double th = 2.0 * PI * j / n;
        const cx e{std::cos(th), std::sin(th)};
        const cx z = c.center + c.radius * e;
        sum += f(z) * (I * c.radius * e);
    }
    return sum * (2.0 * PI / n);
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = -t;
        x[n - 1 - i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

template <typename F>
cx gl_segment(F&& f, cx a, cx b, int panels) {
    static thread_local std::vector<double> x16, w16;
    if (x16.empty()) gauss_legendre(16, x16, w16);
    cx sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        const cx pa = a + (b - a) * (double(p) / panels);
        const cx pb = a + (b - a) * (double(p + 1) / panels);
        const cx mid = 0.5 * (pa + pb), half = 0.5 * (pb - pa);
        for (int j = 0; j < 16; ++j) sum += w16[j] * f(mid + half * x16[j]) * half;
    }
    return sum;
}

}  // namespace quad_detail

template <typename F>
QuadratureResult contour_integral(F&& f, const Circle& c,
                                  const QuadratureOptions& opt = {}) {
    int n = std::max(opt.min_nodes, opt.initial_nodes);
    cx prev = quad_detail::trapezoid_circle(f, c, n);
    while (n <= opt.max_nodes) {
        const int n2 = 2 * n;
        const cx cur = quad_detail::trapezoid_circle(f, c, n2);
        const double err = std::abs(cur - prev);
        if (err <= opt.tol * (1.0 + std::abs(cur)))
            return {cur, err, n2};
        prev = cur;
        n = n2;
    }
    throw QuadratureError("contour_integral: circle quadrature did not stabilize at " +
                          std::to_string(opt.max_nodes) + " nodes");
}

template <typename F>
QuadratureResult contour_integral(F&& f, const Polyline& path,
                                  const QuadratureOptions& opt = {}) {
    if (path.points.size() < 2)
        throw QuadratureError("contour_integral: polyline needs >= 2 points");
    auto eval = [&](int panels) {
        cx sum = 0.0;
        for (size_t s = 0; s + 1 < path.points.size(); ++s)
            sum += quad_detail::gl_segment(f, path.points[s], path.points[s + 1], panels);
        return sum;
    };
    int panels = 2;
    cx prev = eval(panels);
    while (16 * panels <= opt.max_nodes) {
        const cx cur = eval(2 * panels);
        const double err = std::abs(cur - prev);
        if (err <= opt.tol * (1.0 + std::abs(cur)))
            return {cur, err, 16 * 2 * panels};
        prev = cur;
        panels *= 2;
    }
    throw QuadratureError("contour_integral: segment quadrature did not stabilize");
}

// Distance from point q to segment [a, b].
inline double segment_distance(cx a, cx b, cx q) {
    const cx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(q - a);
    double t = ((q - a).real() * d.real() + (q - a).imag() * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(q - (a + t * d));
}

// Straight path from `from` to `to`, detouring around obstacles that come
// closer than `margin` (half-circle arcs, recursively cleared).
inline Polyline polyline_avoiding(cx from, cx to, const std::vector<cx>& obstacles,
                                  double margin, int depth = 0) {
    if (depth > 8) throw QuadratureError("polyline_avoiding: cannot clear obstacles");
    for (cx q : obstacles) {
        if (std::abs(q - from) < 1e-14 || std::abs(q - to) < 1e-14) continue;
        if (segment_distance(from, to, q) >= margin) continue;
        // replace the straight run past q by an arc of radius 2*margin
        const cx d = (to - from) / std::abs(to - from);
        const cx n = I * d;
        const double side = ((q - from).real() * n.real() + (q - from).imag() * n.imag()) >= 0
                                ? -1.0
                                : 1.0;  // pass on the far side
        const double t = ((q - from).real() * d.real() + (q - from).imag() * d.imag());
        const cx foot = from + t * d;
        std::vector<cx> pts{from};
        for (int s = 0; s <= 8; ++s) {
            const double th = PI * s / 8.0;
            pts.push_back(foot - 2.0 * margin * d * std::cos(th) +
                          side * 2.0 * margin * n * std::sin(th));
        }
        pts.push_back(to);
        // verify clearance of the replacement; recurse if other obstacles intrude
        Polyline out;
        out.points.push_back(pts.front());
        for (size_t s = 0; s + 1 < pts.size(); ++s) {
            bool clear = true;
            for (cx o : obstacles) {
                if (std::abs(o - pts[s]) < 1e-14 || std::abs(o - pts[s + 1]) < 1e-14)
                    continue;
                if (segment_distance(pts[s], pts[s + 1], o) < 0.5 * margin) clear = false;
            }
            if (!clear) {
                const auto sub =
                    polyline_avoiding(pts[s], pts[s + 1], obstacles, margin, depth + 1);
                out.points.insert(out.points.end(), sub.points.begin() + 1,
                                  sub.points.end());
            } else {
                out.points.push_back(pts[s + 1]);
            }
        }
        return out;
    }
    return Polyline{{from, to}};
}

}  // namespace catena
