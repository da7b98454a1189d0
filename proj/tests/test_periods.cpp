#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "catena/balance.hpp"
#include "catena/periods.hpp"
#include "catena/testutil.hpp"

using namespace catena;

namespace {

double suggest_eps(const ChartStack& stack) { return 0.45 * stack.min_node_gap(); }

}  // namespace

TEST_CASE("central charts: node formulas and Prop-4.7-style b values") {
    const auto cfg = test::fan_config(2);
    const ChartStack stack(cfg);

    // chart 1 holds a_{1,i} and b_{0,1}
    const auto& ch1 = stack.chart(1);
    REQUIRE(ch1.n_a() == 2);
    REQUIRE(ch1.n_b() == 1);
    // a_{1,i} = -conj(p_{1,i} - p_{0,1}) for odd level
    CHECK(std::abs(ch1.a[0] - (-std::conj(cfg.point(1, 1)))) < 1e-15);
    CHECK(std::abs(ch1.a[1] - (-std::conj(cfg.point(1, 2)))) < 1e-15);

    // b_{k,i} = -conj(a_{k,i}) + conj(a_{k,1}) holds at the central values
    for (int k : {0, 1}) {
        for (int i = 1; i <= cfg.n(k); ++i) {
            const cx b = stack.neck_b(k, i);
            const cx want = -std::conj(stack.neck_a(k, i)) + std::conj(stack.neck_a(k, 1));
            CHECK(std::abs(b - want) < 1e-14);
        }
        CHECK(std::abs(stack.neck_b(k, 1)) < 1e-15);  // normalization b_{k,1} = 0
    }
}

TEST_CASE("omega0: Riemann form, central identity with g, compatibility errors") {
    SECTION("Riemann chart: omega = dz/(z-b) - dz/(z-a)") {
        Configuration cfg;
        cfg.k_min = 0;
        for (int k = 0; k <= 2; ++k) cfg.pts.push_back({cx(double(k), 0.0)});
        const ChartStack stack(cfg);
        const auto w = omega0(stack.chart(1));
        REQUIRE(w.poles.size() == 2);
        CHECK(std::abs(w.residues[0] - 1.0) < 1e-15);   // +1 at b
        CHECK(std::abs(w.residues[1] + 1.0) < 1e-15);   // -1 at a
        CHECK(std::abs(w.total_residue()) < 1e-15);
    }
    SECTION("central weights make omega = g dz") {
        const ChartStack stack(test::ladder22_config());
        for (int k = 1; k <= 3; ++k) {
            const auto w = omega0(stack.chart(k));
            const auto g = stack.chart(k).g();
            std::mt19937 rng(5);
            std::uniform_real_distribution<double> d(-3.0, 3.0);
            for (int s = 0; s < 8; ++s) {
                const cx z(d(rng), d(rng));
                CHECK(std::abs(w.eval(z) - g.eval(z)) <= 1e-12 * (1.0 + std::abs(g.eval(z))));
            }
        }
    }
    SECTION("gamma sum mismatch is rejected") {
        ChartStack stack(test::fan_config(2));
        auto& ch = stack.chart(1);
        ch.gamma_a = {cx(0.7), cx(0.7)};  // sums to 1.4 vs gamma_b sum 1
        CHECK_THROWS_AS(omega0(ch), FormatError);
    }
}

TEST_CASE("A-periods are 2 pi i gamma with the orientation identity") {
    for (const auto& cfg :
         {test::fan_config(2), test::fan_config(3), test::ladder22_config()}) {
        const ChartStack stack(cfg);
        const auto checks = a_period_checks(stack, suggest_eps(stack));
        REQUIRE(!checks.empty());
        for (const auto& c : checks) {
            CHECK(c.deviation <= 1e-10);
            CHECK(c.orientation_dev <= 1e-10);
        }
    }
}

TEST_CASE("limit balance: boF = 4 pi i F and boG = 4 pi i G") {
    SECTION("Riemann: boF = 0, boG = 4 pi i") {
        Configuration cfg;
        cfg.k_min = -2;
        for (int k = -2; k <= 2; ++k) cfg.pts.push_back({cx(0.0, 0.0) + double(k)});
        const auto rep = limit_balance(ChartStack(cfg));
        for (const auto& e : rep.entries)
            if (e.k >= -1 && e.k <= 1) CHECK(std::abs(e.boF) < 1e-12);
        for (size_t q = 0; q < rep.boG.size(); ++q)
            CHECK(std::abs(rep.boG[q] - 4.0 * PI * I) < 1e-12);
        CHECK(rep.max_force_deviation < 1e-12);
        CHECK(rep.max_G_deviation < 1e-12);
    }
    SECTION("balanced fan interior entries vanish") {
        const auto rep = limit_balance(ChartStack(test::fan_config(2)));
        for (const auto& e : rep.entries)
            if (e.k == 1) CHECK(std::abs(e.boF) <= 1e-10);
        CHECK(rep.max_force_deviation <= 1e-10);
    }
    SECTION("random unbalanced configurations satisfy the factor identity") {
        std::mt19937 rng(6001);
        const std::vector<std::vector<int>> types{{1, 1}, {1, 2, 1}, {1, 2, 2, 1}, {1, 3, 1}};
        for (int trial = 0; trial < 60; ++trial) {
            const auto cfg = test::random_configuration(rng, types[trial % types.size()]);
            const auto rep = limit_balance(ChartStack(cfg));
            const auto fs = forces(cfg);
            for (const auto& e : rep.entries) {
                const cx want = 4.0 * PI * I * fs.force(e.k, e.i);
                CHECK(std::abs(e.boF - want) <= 1e-10 * (1.0 + std::abs(want)));
            }
            CHECK(rep.max_G_deviation <= 1e-10 * (1.0 + 4.0 * PI));
        }
    }
}

TEST_CASE("oint-level telescoping and residue-vs-quadrature consistency") {
    for (const auto& cfg : {test::fan_config(2), test::ladder22_config()}) {
        const ChartStack stack(cfg);
        const double eps = suggest_eps(stack);
        for (int k = stack.k_min() + 1; k <= stack.k_max(); ++k) {
            CHECK(telescoping_deviation(stack.chart(k), eps) <= 1e-10);

            // every listed residue of omega matches its circle quadrature
            const auto w = stack.chart(k).omega();
            for (size_t p = 0; p < w.poles.size(); ++p) {
                const auto quad = contour_integral(
                    [&](cx z) { return w.eval(z); }, Circle{w.poles[p], eps});
                CHECK(std::abs(quad.value / (2.0 * PI * I) - w.residues[p]) <= 1e-10);
            }
        }
    }
}

TEST_CASE("g_k behavior at infinity: fitted coefficient of z^-2") {
    const ChartStack stack(test::ladder22_config());
    for (int k = 1; k <= 3; ++k) {
        const auto& ch = stack.chart(k);
        const auto g = ch.g();
        // (1/2 pi i) oint z g dz over a large circle picks out the z^-2 coefficient
        const auto quad =
            contour_integral([&](cx z) { return z * g.eval(z); }, Circle{cx(0.0), 40.0});
        const cx fitted = quad.value / (2.0 * PI * I);
        CHECK(std::abs(fitted - ch.infinity_coefficient()) <= 1e-8);
        CHECK(std::abs(ch.infinity_coefficient()) > 1e-3);  // hypothesis-3 margin
    }
}

TEST_CASE("horizontal limit H vanishes at the central values") {
    for (const auto& cfg :
         {test::fan_config(2), test::fan_config(3), test::ladder22_config()}) {
        const ChartStack stack(cfg);
        const auto H = horizontal_limit(stack);
        REQUIRE(!H.empty());
        for (const auto& e : H) CHECK(std::abs(e.value) <= 1e-10);
    }
}

TEST_CASE("horizontal limit responds linearly to a b-node perturbation") {
    ChartStack stack(test::fan_config(2));
    const auto base = horizontal_limit(stack);
    const cx delta(0.013, -0.007);
    // perturb b_{1,2} in sphere 2 (weights stay central)
    stack.chart(2).b[1] += delta;
    const auto moved = horizontal_limit(stack);
    REQUIRE(base.size() == moved.size());
    for (size_t q = 0; q < base.size(); ++q) {
        if (base[q].k == 1 && base[q].i == 2)
            CHECK(std::abs((moved[q].value - base[q].value) - delta) <= 1e-9);
        else
            CHECK(std::abs(moved[q].value - base[q].value) <= 1e-9);
    }
}

TEST_CASE("no H equations for width-1 levels") {
    Configuration cfg;
    cfg.k_min = 0;
    for (int k = 0; k <= 3; ++k) cfg.pts.push_back({cx(double(k), 0.0)});
    CHECK(horizontal_limit(ChartStack(cfg)).empty());
}

TEST_CASE("zero alignment: counts and central vanishing") {
    SECTION("type (1,1) level: constant numerator, no zeros") {
        Configuration cfg;
        cfg.k_min = 0;
        for (int k = 0; k <= 2; ++k) cfg.pts.push_back({cx(double(k), 0.0)});
        const ChartStack stack(cfg);
        const auto rep = zero_alignment(stack.chart(1), suggest_eps(stack));
        CHECK(rep.expected_zero_count == 0);
        CHECK(rep.zero_count == 0);
        CHECK(rep.Z.empty());
        CHECK(rep.pass);
    }
    SECTION("fan middle sphere: one zero, Z_0 = 0 centrally") {
        const ChartStack stack(test::fan_config(2));
        const auto rep = zero_alignment(stack.chart(1), suggest_eps(stack));
        CHECK(rep.expected_zero_count == 1);
        CHECK(rep.zero_count == 1);
        CHECK(rep.max_Z <= 1e-9);
        CHECK(rep.pass);
    }
    SECTION("all full charts of the builtin examples pass") {
        for (const auto& cfg : {test::fan_config(2), test::fan_config(3),
                                test::ladder22_config()}) {
            const ChartStack stack(cfg);
            for (int k = stack.k_min() + 1; k <= stack.k_max(); ++k) {
                const auto rep = zero_alignment(stack.chart(k), suggest_eps(stack));
                CHECK(rep.zero_count == rep.expected_zero_count);
                CHECK(rep.max_Z <= 1e-9);
            }
        }
    }
}

TEST_CASE("Weierstrass-division criterion detects non-divisibility") {
    // synthetic pair: f = P h + r with a known remainder; the functionals
    // int z^i f / P over a contour enclosing the zeros of P vanish iff r = 0
    const auto P = Polynomial::from_roots({cx(0.4, 0.1), cx(-0.6, -0.2)});
    const Polynomial h{{cx(1.0), cx(0.5)}};
    const Polynomial r{{cx(0.2), cx(-0.3)}};

    auto functionals = [&](const Polynomial& f) {
        std::vector<cx> F;
        for (int i = 0; i < P.degree(); ++i) {
            const auto quad = contour_integral(
                [&](cx z) {
                    cx zp = 1.0;
                    for (int j = 0; j < i; ++j) zp *= z;
                    return zp * f.eval(z) / P.eval(z);
                },
                Circle{cx(0.0), 3.0});
            F.push_back(quad.value);
        }
        return F;
    };

    // oracle: polynomial division recovers the remainder exactly
    const auto fd = divide(P * h + r, P);
    for (size_t j = 0; j < fd.remainder.c.size(); ++j)
        CHECK(std::abs(fd.remainder.c[j] - r.c[j]) < 1e-12);

    bool some_nonzero = false;
    for (cx F : functionals(P * h + r))
        if (std::abs(F) > 1e-6) some_nonzero = true;
    CHECK(some_nonzero);

    for (cx F : functionals(P * h)) CHECK(std::abs(F) < 1e-10);
}

TEST_CASE("perturbed gamma weights produce nonzero Z") {
    ChartStack stack(test::fan_config(2));
    auto& ch = stack.chart(1);
    ch.gamma_a = {cx(0.65), cx(0.35)};  // still sums to 1, no longer central
    const auto rep = zero_alignment(ch, suggest_eps(stack));
    CHECK(rep.max_Z > 1e-6);
    CHECK_FALSE(rep.pass);
}
