#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "catena/chart.hpp"
#include "catena/poly.hpp"
#include "catena/quadrature.hpp"

using namespace catena;

TEST_CASE("circle quadrature: winding integral and analytic exactness") {
    QuadratureOptions opt;
    opt.initial_nodes = 64;
    const auto r = contour_integral([](cx z) { return 1.0 / z; },
                                    Circle{cx(0.0), 1.0}, opt);
    CHECK(std::abs(r.value - 2.0 * PI * I) < 1e-12);

    const auto zero = contour_integral([](cx z) { return z * z + 3.0; },
                                       Circle{cx(0.5, 0.5), 2.0}, opt);
    CHECK(std::abs(zero.value) < 1e-12);
}

TEST_CASE("segment quadrature matches antiderivatives") {
    const auto r = contour_integral([](cx z) { return std::exp(z); },
                                    Polyline{{cx(0.0), cx(1.0, 1.0)}});
    CHECK(std::abs(r.value - (std::exp(cx(1.0, 1.0)) - 1.0)) < 1e-12);

    // path through two segments
    const auto r2 = contour_integral([](cx z) { return z * z; },
                                     Polyline{{cx(0.0), cx(1.0), cx(1.0, 1.0)}});
    const cx expect = std::pow(cx(1.0, 1.0), 3) / 3.0;
    CHECK(std::abs(r2.value - expect) < 1e-12);
}

TEST_CASE("singularity proximity raises a quadrature error") {
    QuadratureOptions opt;
    opt.max_nodes = 512;
    CHECK_THROWS_AS(contour_integral([](cx z) { return 1.0 / (z - 1.0000001); },
                                     Circle{cx(0.0), 1.0}, opt),
                    QuadratureError);
}

TEST_CASE("polyline_avoiding detours around obstacles") {
    const std::vector<cx> obstacles{cx(0.5, 0.0)};
    const auto path = polyline_avoiding(cx(0.0), cx(1.0), obstacles, 0.05);
    REQUIRE(path.points.size() > 2);
    for (size_t s = 0; s + 1 < path.points.size(); ++s)
        CHECK(segment_distance(path.points[s], path.points[s + 1], obstacles[0]) >=
              0.05 * 0.5);
    // a detoured integral of an entire function still matches the endpoints
    const auto r = contour_integral([](cx z) { return 2.0 * z; }, path);
    CHECK(std::abs(r.value - 1.0) < 1e-12);
}

TEST_CASE("residues: listed poles, products, quadrature agreement") {
    SECTION("dz/z at 0") {
        RationalForm f;
        f.poles = {cx(0.0)};
        f.residues = {cx(1.0)};
        CHECK(f.residue_at(cx(0.0)) == cx(1.0));
        CHECK_THROWS_AS(f.residue_at(cx(2.0)), Error);
    }
    SECTION("g = -1/z: residue of g^2 dz at 0 vanishes") {
        RationalForm g;
        g.poles = {cx(0.0)};
        g.residues = {cx(-1.0)};
        CHECK(std::abs(residue_product(g, g, cx(0.0))) < 1e-15);
    }
    SECTION("random products vs quadrature") {
        std::mt19937 rng(4711);
        std::uniform_real_distribution<double> d(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            RationalForm f, g;
            for (int p = 0; p < 3; ++p) {
                f.poles.push_back(cx(d(rng), d(rng)));
                f.residues.push_back(cx(d(rng), d(rng)));
            }
            g.poles = f.poles;  // shared poles exercise the double-pole case
            g.poles.push_back(cx(d(rng) + 3.0, d(rng)));
            for (size_t p = 0; p < g.poles.size(); ++p)
                g.residues.push_back(cx(d(rng), d(rng)));
            const cx p0 = f.poles[0];
            bool well_separated = true;
            for (size_t a = 0; a < g.poles.size(); ++a)
                if (std::abs(g.poles[a] - p0) > 1e-12 &&
                    std::abs(g.poles[a] - p0) < 0.2)
                    well_separated = false;
            for (size_t a = 1; a < f.poles.size(); ++a)
                if (std::abs(f.poles[a] - p0) < 0.2) well_separated = false;
            if (!well_separated) continue;
            const cx analytic = residue_product(f, g, p0);
            const auto quad = contour_integral(
                [&](cx z) { return f.eval(z) * g.eval(z); }, Circle{p0, 0.1});
            CHECK(std::abs(analytic - quad.value / (2.0 * PI * I)) <=
                  1e-10 * (1.0 + std::abs(analytic)));
        }
    }
}

TEST_CASE("polynomials: arithmetic, division, roots") {
    SECTION("division with remainder") {
        const Polynomial num{{cx(1.0), cx(2.0), cx(0.0), cx(3.0)}};  // 1+2z+3z^3
        const Polynomial den{{cx(-1.0), cx(1.0)}};                    // z-1
        const auto d = divide(num, den);
        // check num = q*den + r
        const auto back = d.quotient * den + d.remainder;
        for (size_t j = 0; j < num.c.size(); ++j)
            CHECK(std::abs(back.c[j] - num.c[j]) < 1e-12);
        CHECK(d.remainder.degree() < den.degree());
    }
    SECTION("roots of (z-1)(z-2i)(z+3)") {
        const auto p = Polynomial::from_roots({cx(1.0), cx(0.0, 2.0), cx(-3.0)});
        auto roots = p.roots();
        REQUIRE(roots.size() == 3);
        for (cx want : {cx(1.0), cx(0.0, 2.0), cx(-3.0)}) {
            double best = 1e300;
            for (cx r : roots) best = std::min(best, std::abs(r - want));
            CHECK(best < 1e-10);
        }
    }
    SECTION("rational numerator/denominator of a chart-like form") {
        RationalForm g;
        g.poles = {cx(0.0), cx(1.0), cx(0.5, 1.0)};
        g.residues = {cx(0.5), cx(0.5), cx(-1.0)};  // sums to zero -> degree drop
        const auto N = g.numerator();
        const auto D = g.denominator();
        CHECK(N.degree() <= 1);
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> d(-2.0, 2.0);
        for (int s = 0; s < 10; ++s) {
            const cx z(d(rng), d(rng));
            const cx direct = g.eval(z);
            const cx viaPoly = N.eval(z) / D.eval(z);
            CHECK(std::abs(direct - viaPoly) <= 1e-11 * (1.0 + std::abs(direct)));
        }
    }
}
