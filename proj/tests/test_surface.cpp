#include <catch2/catch_amalgamated.hpp>

#include "catena/concat.hpp"
#include "catena/laurent.hpp"
#include "catena/mesh.hpp"
#include "catena/surface.hpp"
#include "catena/testutil.hpp"

using namespace catena;

namespace {

Configuration riemann_window(int k_lo, int k_hi, cx a = cx(1.0)) {
    Configuration cfg;
    cfg.k_min = k_lo;
    for (int k = k_lo; k <= k_hi; ++k) cfg.pts.push_back({double(k) * a});
    return cfg;
}

BlockWord fan_in_chain_word() {
    const cx target = 1.0 / (2.0 * I);
    return BlockWord({chain(2.0 * I, 1), scale_to_residual(fan(2), target)},
                     ExplicitRule{-2, {0, 0, 1, 0, 0}});
}

}  // namespace

TEST_CASE("gauss map: parity formulas, neck matching, end behavior") {
    const ChartStack stack(test::fan_config(2));
    const double t = 0.01;

    SECTION("even sphere: g = t g_k directly") {
        const auto& ch = stack.chart(0);
        // pick z with g_0(z) computable; compare against the formula
        const cx z(1.7, 0.4);
        CHECK(std::abs(gauss(ch, t, z) - t * ch.g().eval(z)) < 1e-15);
        // a point where g_k = 1 gives exactly t; g_0 = -1/(z-a) solves to a-1
        const auto g = ch.g();
        cx z1 = ch.a[0] - 1.0;
        for (int it = 0; it < 50; ++it) z1 -= (g.eval(z1) - 1.0) / g.eval_deriv(z1);
        CHECK(std::abs(g.eval(z1) - 1.0) < 1e-12);
        CHECK(std::abs(gauss(ch, t, z1) - t) < 1e-13);
    }
    SECTION("odd sphere: reciprocal") {
        const auto& ch = stack.chart(1);
        const cx z(0.9, -1.3);
        CHECK(std::abs(gauss(ch, t, z) - 1.0 / (t * ch.g().eval(z))) < 1e-12);
    }
    SECTION("matching across the neck: v(z) w(z') = t^2 pairs agree") {
        for (int i = 1; i <= 2; ++i) {
            const cx a = stack.neck_a(1, i);
            const auto g_dn = stack.chart(1).g();
            for (int q = 0; q < 8; ++q) {
                const double th = 2.0 * PI * q / 8.0;
                const cx z = a + 0.02 * cx(std::cos(th), std::sin(th));
                const cx v = 1.0 / g_dn.eval(z);
                const cx zp = invert_w(stack.chart(2), stack.neck_b(1, i), t * t / v);
                const cx g_here = gauss(stack.chart(1), t, z);
                const cx g_there = gauss(stack.chart(2), t, zp);
                CHECK(std::abs(g_here - g_there) <= 1e-12 * (1.0 + std::abs(g_here)));
            }
        }
    }
    SECTION("double zero at infinity: z^2 g bounded, z g -> 0") {
        const auto& ch = stack.chart(1);
        for (double R : {1e3, 1e5, 1e7}) {
            const cx z(R, 0.3 * R);
            const cx g = ch.g().eval(z);
            CHECK(std::abs(z * z * g) < 10.0);
            CHECK(std::abs(z * g) < 1e-2);
        }
    }
    SECTION("evaluation at a pole is an error") {
        CHECK_THROWS_AS(gauss(stack.chart(1), t, stack.chart(1).a[0]), Error);
    }
}

TEST_CASE("build_sheets: Riemann offsets and symmetry") {
    const auto cfg = riemann_window(0, 3);
    const double t = 1e-3;
    const auto stack = build_sheets(cfg, t, {.glue_radius = 0.25});

    SECTION("offsets are -2 c_k log t = 13.8155 per gap") {
        const double want = -2.0 * std::log(t);
        for (size_t s = 0; s + 1 < stack.sheets.size(); ++s)
            CHECK(std::abs((stack.sheets[s + 1].H - stack.sheets[s].H) - want) < 1e-12);
        CHECK(std::abs(want - 13.815510557964274) < 1e-12);
    }
    SECTION("type (1,1) sheet: h is constant on the perpendicular bisector") {
        const auto& sh = stack.sheet(1);  // below node 0, above node 1
        REQUIRE(sh.below.size() == 1);
        REQUIRE(sh.above.size() == 1);
        // |zeta - below| = |zeta - above| there, so the two log terms cancel
        const cx m0 = 0.5 * (sh.below[0] + sh.above[0]);
        const cx perp = I * (sh.above[0] - sh.below[0]);
        for (double s : {-0.7, 0.4, 1.3})
            CHECK(std::abs(sh.height_rel(m0 + s * perp) - sh.height_rel(m0)) < 1e-12);
    }
    SECTION("physical node positions are conj(p)") {
        for (int k = 0; k <= 3; ++k) {
            const auto& sh = stack.sheet(k);
            for (size_t i = 0; i < sh.above.size(); ++i)
                CHECK(std::abs(sh.above[i] - std::conj(cfg.point(k, int(i) + 1))) < 1e-14);
            if (k > 0)
                for (size_t i = 0; i < sh.below.size(); ++i)
                    CHECK(std::abs(sh.below[i] - std::conj(cfg.point(k - 1, int(i) + 1))) <
                          1e-14);
        }
    }
    SECTION("local chart realization matches the physical heights") {
        // evaluate via the parity map and frame shift: even k uses conj, odd
        // k uses negation of the local coordinate
        const ChartStack charts(cfg);
        for (int k = 1; k <= 2; ++k) {
            const auto& sh = stack.sheet(k);
            const auto& ch = charts.chart(k);
            auto local_h = [&](cx z) {
                double v = 0.0;
                for (int i = 0; i < ch.n_b(); ++i)
                    v += (1.0 / ch.n_b()) * std::log(std::abs(z - ch.b[i]));
                for (int i = 0; i < ch.n_a(); ++i)
                    v -= (1.0 / ch.n_a()) * std::log(std::abs(z - ch.a[i]));
                return v;
            };
            for (const cx zeta : {cx(0.4, 0.9), cx(-1.2, 0.3), cx(2.0, -0.8)}) {
                if (!sh.in_domain(zeta)) continue;
                const cx zl = sh.even ? std::conj(zeta - sh.shift) : -(zeta - sh.shift);
                CHECK(std::abs((local_h(zl) - local_h(sh.even ? std::conj(sh.origin - sh.shift)
                                                              : -(sh.origin - sh.shift))) -
                               sh.height_rel(zeta)) < 1e-12);
            }
        }
    }
}

TEST_CASE("level lines of h: superlevel components count the nodes") {
    // glued fan2 window; sheet 1 has two above-nodes and one below-node
    const auto word = fan_in_chain_word();
    const auto cfg = concatenate(word, -1, 3).cfg;
    const auto stack = build_sheets(cfg, 1e-3, {.glue_radius = 0.25});
    const auto& sh = stack.sheet(1);
    REQUIRE(sh.above.size() == 2);
    REQUIRE(sh.below.size() == 1);

    // thresholds large enough that each level region is trapped inside the
    // radius-d disk of one node (d < half the node gap): take the max of
    // +-h on the d-circles of the corresponding family plus a margin
    const double d = 0.35;
    double eta_up = 0.0, eta_down = 0.0;
    for (cx n : sh.above)
        for (int q = 0; q < 128; ++q) {
            const double th = 2.0 * PI * q / 128.0;
            eta_up = std::max(eta_up, sh.height_rel(n + d * cx(std::cos(th), std::sin(th))));
        }
    for (cx n : sh.below)
        for (int q = 0; q < 128; ++q) {
            const double th = 2.0 * PI * q / 128.0;
            eta_down =
                std::max(eta_down, -sh.height_rel(n + d * cx(std::cos(th), std::sin(th))));
        }
    eta_up += 0.05;
    eta_down += 0.05;
    const int N = 260;
    std::vector<int> label(size_t(N) * N, 0);  // 1 = superlevel, -1 = sublevel
    auto at = [&](int ix, int iy) -> int& { return label[size_t(iy) * N + ix]; };
    const double hx = (sh.x_hi - sh.x_lo) / (N - 1), hy = (sh.y_hi - sh.y_lo) / (N - 1);
    for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) {
            const cx z(sh.x_lo + ix * hx, sh.y_lo + iy * hy);
            const double h = sh.height_rel(z);
            at(ix, iy) = h >= eta_up ? 1 : (h <= -eta_down ? -1 : 0);
        }
    // count 4-connected components of each sign
    auto count = [&](int sign) {
        std::vector<char> seen(label.size(), 0);
        int comps = 0;
        for (int iy = 0; iy < N; ++iy)
            for (int ix = 0; ix < N; ++ix) {
                if (at(ix, iy) != sign || seen[size_t(iy) * N + ix]) continue;
                ++comps;
                std::vector<std::pair<int, int>> stackv{{ix, iy}};
                seen[size_t(iy) * N + ix] = 1;
                while (!stackv.empty()) {
                    auto [cx_, cy_] = stackv.back();
                    stackv.pop_back();
                    const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
                    for (int d = 0; d < 4; ++d) {
                        const int nx = cx_ + dx[d], ny = cy_ + dy[d];
                        if (nx < 0 || ny < 0 || nx >= N || ny >= N) continue;
                        if (at(nx, ny) != sign || seen[size_t(ny) * N + nx]) continue;
                        seen[size_t(ny) * N + nx] = 1;
                        stackv.emplace_back(nx, ny);
                    }
                }
            }
        return comps;
    };
    CHECK(count(1) == 2);   // one region per above node
    CHECK(count(-1) == 1);  // one region around the below node
}

TEST_CASE("build_necks: matching, bisection oracle, monotone waist") {
    SECTION("waist solves the 1-d matching equation (bisection oracle)") {
        const auto cfg = riemann_window(0, 2);
        const auto stack = build_sheets(cfg, 1e-3, {.glue_radius = 0.1});
        const auto necks = build_necks(stack);
        REQUIRE(necks.size() == 2);
        for (const auto& nk : necks) {
            const double w_oracle =
                waist_by_bisection(nk.glue_radius, nk.z_top - nk.z_bottom, nk.c);
            CHECK(std::abs(nk.waist - w_oracle) <= 1e-10 * w_oracle);
            CHECK(nk.waist > 0);
            // boundary radii meet the gluing circles
            CHECK(std::abs(nk.radius_at_sigma(nk.sigma_max) - nk.glue_radius) < 1e-12);
            // waist centered midway between the matched heights
            CHECK(std::abs(nk.z_mid - 0.5 * (nk.z_bottom + nk.z_top)) < 1e-12);
        }
    }
    SECTION("fan level: two disjoint necks separated by the node gap") {
        const auto word = fan_in_chain_word();
        const auto cfg = concatenate(word, -1, 3).cfg;
        const auto stack = build_sheets(cfg, 1e-3, {.glue_radius = 0.25});
        const auto necks = build_necks(stack);
        std::vector<const NeckModel*> level1;
        for (const auto& nk : necks)
            if (nk.k == 1) level1.push_back(&nk);
        REQUIRE(level1.size() == 2);
        const double sep = std::abs(level1[0]->center - level1[1]->center);
        CHECK(sep >= stack.sheet(1).glue_radius * 2.0);
        const double min_gap = std::abs(cfg.point(1, 1) - cfg.point(1, 2));
        CHECK(sep >= min_gap - 1e-12);
    }
    SECTION("w decreases monotonically as t -> 0 (Riemann)") {
        double prev = 1e300;
        for (double t : {3e-2, 1e-2, 3e-3, 1e-3, 3e-4}) {
            const auto stack = build_sheets(riemann_window(0, 1), t, {.glue_radius = 0.1});
            const auto necks = build_necks(stack);
            REQUIRE(necks.size() == 1);
            CHECK(necks[0].waist < prev);
            prev = necks[0].waist;
        }
    }
}

TEST_CASE("embeddedness report") {
    SECTION("Riemann at t = 1e-3 passes with the predicted separation") {
        const auto stack = build_sheets(riemann_window(0, 2), 1e-3, {.glue_radius = 0.25});
        const auto necks = build_necks(stack);
        const auto rep = embeddedness_report(stack, necks);
        CHECK(rep.pass);
        // margin = min over gaps of (-2 c log t - sup|h_k| - sup|h_{k+1}|)
        double expect = 1e300;
        for (size_t s = 0; s + 1 < stack.sheets.size(); ++s)
            expect = std::min(expect, 13.815510557964274 - stack.sheets[s].sup_height -
                                          stack.sheets[s + 1].sup_height);
        CHECK(rep.checks[0].margin == Catch::Approx(expect));
        double supmax = 0.0;
        for (const auto& sh : stack.sheets) supmax = std::max(supmax, sh.sup_height);
        CHECK(std::abs(rep.checks[0].margin - (13.8155 - 2.0 * supmax)) < 1.5);
    }
    SECTION("single sheet is trivially embedded") {
        Configuration cfg;
        cfg.k_min = 0;
        cfg.pts = {{cx(0.0)}};
        const auto stack = build_sheets(cfg, 1e-3, {.glue_radius = 0.25});
        const auto rep = embeddedness_report(stack, {});
        CHECK(rep.pass);
    }
    SECTION("t = 0.5 on the fan word fails the separation check") {
        const auto cfg = concatenate(fan_in_chain_word(), -1, 3).cfg;
        const auto stack = build_sheets(cfg, 0.5, {.glue_radius = 0.25});
        CHECK_FALSE(stack.slabs_disjoint);
        const auto rep = embeddedness_report(stack, build_necks(stack));
        CHECK_FALSE(rep.pass);
    }
}

TEST_CASE("mesh: topology, counting, export") {
    const auto cfg = concatenate(fan_in_chain_word(), -1, 3).cfg;
    const double t = 1e-3;
    const auto stack = build_sheets(cfg, t, {.glue_radius = 0.3});
    const auto necks = build_necks(stack);
    const auto mesh = build_mesh(stack, necks, {.grid = 96, .neck_rows = 8});
    mesh.validate();

    SECTION("genus 1 after boundary correction") {
        CHECK(mesh.component_count() == 1);
        CHECK(mesh.genus_with_boundary_correction() == 1);
    }
    SECTION("Riemann window meshes to genus 0") {
        const auto rstack = build_sheets(riemann_window(0, 2), t, {.glue_radius = 0.4});
        const auto rmesh = build_mesh(rstack, build_necks(rstack), {.grid = 64, .neck_rows = 6});
        CHECK(rmesh.genus_with_boundary_correction() == 0);
        // vertex count = sheet grid vertices + necks * ring * (rows+1)
        int sheet_verts = 0, neck_verts = 0;
        for (int v = 0; v < rmesh.vertex_count(); ++v)
            (rmesh.tags[v].kind == MeshTag::Sheet ? sheet_verts : neck_verts)++;
        CHECK(sheet_verts + neck_verts == rmesh.vertex_count());
        CHECK(neck_verts % (6 + 1) == 0);  // rows+1 full rings per neck
    }
    SECTION("neck rings meet the sheets (realized boundary continuity)") {
        // every neck-tagged boundary-row vertex lies on its sheet's graph
        const int base_k = stack.sheets.front().k;
        double worst = 0.0;
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (mesh.tags[v].kind != MeshTag::Neck) continue;
            const auto& nk = *std::find_if(necks.begin(), necks.end(), [&](const NeckModel& n) {
                return n.k == mesh.tags[v].k && n.i == mesh.tags[v].i;
            });
            const cx zeta(mesh.vertices[v][0], mesh.vertices[v][1]);
            if (std::abs(std::abs(zeta - nk.center) - nk.glue_radius) > 1e-9) continue;
            const double z = mesh.vertices[v][2];
            const double lo = stack.sheets[nk.k - base_k].surface_height(zeta);
            const double hi = stack.sheets[nk.k + 1 - base_k].surface_height(zeta);
            worst = std::max(worst, std::min(std::abs(z - lo), std::abs(z - hi)));
        }
        CHECK(worst <= 1e-3);
    }
    SECTION("spot check finds no intersections at small t") {
        CHECK(count_triangle_intersections(mesh, 4000, 777) == 0);
    }
    SECTION("export: determinism, format, empty mesh") {
        const auto text1 = mesh_to_text(mesh);
        const auto text2 = mesh_to_text(mesh);
        CHECK(text1 == text2);
        CHECK(text1.find("v ") != std::string::npos);
        CHECK(text1.find("f ") != std::string::npos);
        CHECK(text1.find("# sheet") != std::string::npos);
        CHECK(text1.find("# neck") != std::string::npos);

        SurfaceMesh empty;
        const auto etext = mesh_to_text(empty);
        CHECK(etext.find("# vertices 0 faces 0") != std::string::npos);

        export_mesh(mesh, "/tmp/catena_test_mesh.obj");
        std::ifstream in("/tmp/catena_test_mesh.obj", std::ios::binary);
        std::string back((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        CHECK(back == text1);
    }
}

TEST_CASE("discrete mean curvature of the catenoid patch is O(grid^2)") {
    // true catenoid: growth equals the waist
    const double w = 0.7, smax = 1.2;
    const auto coarse = revolution_patch(w, w, smax, 16, 48);
    const auto fine = revolution_patch(w, w, smax, 32, 96);
    const double h_coarse = max_interior_mean_curvature(coarse);
    const double h_fine = max_interior_mean_curvature(fine);
    CHECK(h_coarse < 0.05);
    CHECK(h_fine <= h_coarse / 2.5);  // ~4x expected for O(h^2)
}

TEST_CASE("mesh in the unscaled frame applies phi_t^{-1}") {
    const auto stack = build_sheets(riemann_window(0, 1), 1e-2, {.glue_radius = 0.45});
    const auto necks = build_necks(stack);
    const auto scaled = build_mesh(stack, necks, {.grid = 64, .neck_rows = 4});
    const auto unscaled =
        build_mesh(stack, necks, {.grid = 64, .neck_rows = 4, .unscaled_frame = true, .t = 1e-2});
    REQUIRE(scaled.vertex_count() == unscaled.vertex_count());
    for (int v = 0; v < scaled.vertex_count(); ++v) {
        CHECK(unscaled.vertices[v][0] == Catch::Approx(scaled.vertices[v][0] / 0.02));
        CHECK(unscaled.vertices[v][1] == Catch::Approx(scaled.vertices[v][1] / 0.02));
        CHECK(unscaled.vertices[v][2] == scaled.vertices[v][2]);
    }
}
