// Command-line driver: solve blocks, evaluate forces, concatenate words,
// classify periodicity, run the verification suite, and emit meshes with
// embeddedness reports.  Exit codes: 0 success, 1 verification failure,
// 2 usage/input error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catena/io.hpp"
#include "catena/verify.hpp"

namespace {

using namespace catena;

cx parse_cx(const std::string& s) {
    // "re,im" or "re"
    const auto comma = s.find(',');
    if (comma == std::string::npos) return cx(std::stod(s), 0.0);
    return cx(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
}

std::pair<int, int> parse_window(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw FormatError("window must be given as lo:hi");
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

json forces_to_json(const Configuration& cfg) {
    const auto fs = forces(cfg);
    json levels = json::array();
    for (int k = cfg.k_min; k <= cfg.k_max(); ++k) {
        json lv;
        lv["k"] = k;
        lv["partial"] = fs.is_partial(k);
        json farr = json::array();
        for (int i = 1; i <= cfg.n(k); ++i) {
            const cx f = fs.force(k, i);
            farr.push_back(json::array({f.real(), f.imag()}));
        }
        lv["F"] = std::move(farr);
        if (fs.has_G(k)) lv["G"] = json::array({fs.g(k).real(), fs.g(k).imag()});
        levels.push_back(std::move(lv));
    }
    const auto hyp = check_hypotheses(cfg);
    json seps = json::array();
    for (const auto& sp : hyp.separations)
        seps.push_back(json{{"k", sp.k}, {"margin", sp.margin}, {"pass", sp.pass}});
    return json{{"levels", std::move(levels)},
                {"max_interior_force", fs.interior_residual()},
                {"hypotheses",
                 json{{"width", hyp.width},
                      {"distinct_values", hyp.distinct_values},
                      {"mean_separations", std::move(seps)},
                      {"pass", hyp.pass}}}};
}

int cmd_forces(const std::string& input, const std::string& output) {
    const auto cfg = configuration_from_json(load_json_file(input));
    const auto out = forces_to_json(cfg);
    const auto fs = forces(cfg);
    std::cout << "levels " << cfg.k_min << ".." << cfg.k_max() << ", "
              << cfg.total_points() << " points\n";
    for (int k = cfg.k_min; k <= cfg.k_max(); ++k) {
        std::cout << "  k=" << k << (fs.is_partial(k) ? " (partial)" : "") << " |F| =";
        for (int i = 1; i <= cfg.n(k); ++i)
            std::cout << " " << std::abs(fs.force(k, i));
        std::cout << "\n";
    }
    std::cout << "max interior |F| = " << fs.interior_residual() << "\n";
    if (!output.empty()) save_json_file(output, out);
    return 0;
}

int cmd_solve(const std::string& type_str, const std::string& end0,
              const std::string& end1, const std::string& init_path,
              const std::string& output, double tol_scale) {
    FiniteConfiguration start;
    if (!init_path.empty()) {
        start = block_from_json(load_json_file(init_path));
    } else {
        LevelType type;
        type.k_min = 0;
        std::stringstream ss(type_str);
        for (std::string item; std::getline(ss, item, ',');)
            type.sizes.push_back(std::stoi(item));
        start = seed_configuration(type, parse_cx(end0), parse_cx(end1));
    }
    NewtonOptions opt;
    (void)tol_scale;
    const auto res = newton_balance(start, opt);
    const auto rep = residual(res.config);
    std::cout << "converged in " << res.iterations << " iterations, interior |F| = "
              << rep.interior_residual << ", residual force = (" << rep.F_C.real()
              << ", " << rep.F_C.imag() << ")\n";
    json out = to_json(res.config, "solved");
    out["solver"] = json{{"converged", res.converged},
                         {"iterations", res.iterations},
                         {"residual_history", res.residual_history}};
    if (!output.empty()) save_json_file(output, out);
    return 0;
}

int cmd_concat(const std::string& word_path, const std::string& window,
               const std::string& output) {
    const auto word = word_from_json(load_json_file(word_path));
    const auto [lo, hi] = parse_window(window);
    const auto res = concatenate(word, lo, hi);
    std::cout << "window " << lo << ".." << hi << ", max interior |F| = "
              << res.max_interior_residual << "\n";
    json out = to_json(res.cfg);
    out["max_interior_force"] = res.max_interior_residual;
    json offsets = json::array();
    for (long m = res.plan.m_lo; m <= res.plan.m_hi; ++m)
        offsets.push_back(json{{"m", m}, {"phi", res.plan.phi(m)}});
    out["plan"] = std::move(offsets);
    if (!output.empty()) save_json_file(output, out);
    return 0;
}

int cmd_classify(const std::string& word_path, int max_window, long max_shift,
                 const std::string& output) {
    const auto word = word_from_json(load_json_file(word_path));
    const auto v = classify(word, max_window, max_shift);
    const json out = to_json(v);
    std::cout << out.dump(2) << "\n";
    if (!output.empty()) save_json_file(output, out);
    return 0;
}

int cmd_periods(const std::string& input, const std::string& word_path,
                const std::string& window, double t, const std::string& output) {
    Configuration cfg;
    if (!input.empty()) {
        cfg = configuration_from_json(load_json_file(input));
    } else if (!word_path.empty()) {
        const auto word = word_from_json(load_json_file(word_path));
        const auto [lo, hi] = parse_window(window);
        cfg = concatenate(word, lo, hi).cfg;
    } else {
        throw FormatError("periods: need --input or --word with --window");
    }

    CheckSuite s;
    const ChartStack stack(cfg);
    const double eps = 0.45 * stack.min_node_gap();

    {
        double worst = 0.0, worst_orient = 0.0;
        for (const auto& c : a_period_checks(stack, eps)) {
            worst = std::max(worst, c.deviation);
            worst_orient = std::max(worst_orient, c.orientation_dev);
        }
        s.add("A-periods 2 pi i gamma", worst, 0.0, worst, 1e-10);
        s.add("A-period orientation identity", worst_orient, 0.0, worst_orient, 1e-10);
    }
    {
        const auto rep = limit_balance(stack);
        s.add("boF = 4 pi i F", rep.max_force_deviation, 0.0, rep.max_force_deviation,
              1e-10);
        s.add("boG = 4 pi i G", rep.max_G_deviation, 0.0, rep.max_G_deviation, 1e-10);
    }
    {
        double worst = 0.0;
        for (const auto& e : horizontal_limit(stack))
            worst = std::max(worst, std::abs(e.value));
        s.add("H(0) with central b", worst, 0.0, worst, 1e-10);
    }
    {
        bool counts_ok = true;
        double worstZ = 0.0;
        for (int k = stack.k_min() + 1; k <= stack.k_max(); ++k) {
            const auto rep = zero_alignment(stack.chart(k), eps);
            counts_ok = counts_ok && rep.zero_count == rep.expected_zero_count;
            worstZ = std::max(worstZ, rep.max_Z);
        }
        s.add_flag("zero counts n_k + n_{k-1} - 2", counts_ok);
        s.add("alignment |Z| at central weights", worstZ, 0.0, worstZ, 1e-9);
    }
    {
        const auto cs = select_constants(stack);
        double worst_c = 0.0, worst_fp = 0.0;
        for (int k = stack.k_min(); k < stack.k_max(); ++k)
            for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
                const auto blk = laurent(stack, k, i, cs);
                worst_c = std::max(worst_c, blk.c_minus1_dev);
                if (t > 0 && t < blk.constants.t_max / 10.0) {
                    const auto p1 = vertical_period(blk, t);
                    const auto p2 = vertical_period(blk, t / 10.0);
                    worst_fp =
                        std::max(worst_fp, std::abs(p1.finite_part - p2.finite_part));
                }
            }
        s.add("Laurent c_{-1} = -gamma", worst_c, 0.0, worst_c, 1e-12);
        if (t > 0)
            s.add("vertical finite part stability at t, t/10", worst_fp,
                  "O(t^2) drift", worst_fp, 1e-4);
    }

    s.print(std::cout);
    if (!output.empty()) save_json_file(output, s.to_json());
    return s.pass() ? 0 : 1;
}

int cmd_mesh(const std::string& word_path, const std::string& input,
             const std::string& window, double t, double glue, int grid,
             bool unscaled, const std::string& output, const std::string& report_path,
             unsigned seed) {
    Configuration cfg;
    if (!word_path.empty()) {
        const auto word = word_from_json(load_json_file(word_path));
        const auto [lo, hi] = parse_window(window);
        cfg = concatenate(word, lo, hi).cfg;
    } else if (!input.empty()) {
        cfg = configuration_from_json(load_json_file(input));
    } else {
        throw FormatError("mesh: need --word with --window, or --input");
    }

    const auto stack = build_sheets(cfg, t, {.glue_radius = glue});
    const auto necks = build_necks(stack);
    MeshOptions mopt;
    mopt.grid = grid;
    mopt.unscaled_frame = unscaled;
    mopt.t = t;
    const auto mesh = build_mesh(stack, necks, mopt);
    mesh.validate();
    if (!output.empty()) export_mesh(mesh, output);

    const auto rep = embeddedness_report(stack, necks, &mesh, 4000, seed);
    json out;
    out["vertices"] = mesh.vertex_count();
    out["triangles"] = mesh.triangle_count();
    out["euler_characteristic"] = mesh.euler_characteristic();
    out["boundary_loops"] = mesh.boundary_loops();
    out["genus_with_boundary_correction"] = mesh.genus_with_boundary_correction();
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back(json{{"name", c.name}, {"margin", c.margin}, {"pass", c.pass}});
    out["embeddedness"] = json{{"checks", std::move(checks)}, {"pass", rep.pass}};

    std::cout << "mesh: " << mesh.vertex_count() << " vertices, "
              << mesh.triangle_count() << " triangles, genus "
              << mesh.genus_with_boundary_correction() << "\n";
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << " (margin " << c.margin
                  << ")\n";
    if (!report_path.empty()) save_json_file(report_path, out);
    return rep.pass ? 0 : 1;
}

int cmd_verify(unsigned seed, const std::string& output) {
    const auto suite = verify_paper_suite(seed);
    suite.print(std::cout);
    std::cout << (suite.pass() ? "all checks passed" : "some checks FAILED") << "\n";
    if (!output.empty()) save_json_file(output, suite.to_json());
    return suite.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"balanced neck configurations and first-order minimal surface geometry"};
    app.require_subcommand(1);

    std::string input, output, word_path, window = "0:3", type_str = "1,1";
    std::string end0 = "0", end1 = "0,3", init_path, report_path;
    double t = 1e-3, glue = 0.3, tol = 1e-12;
    int grid = 128, max_window = 32;
    long max_shift = 10946;
    bool unscaled = false;
    unsigned seed = 20240613;

    auto* forces_cmd = app.add_subcommand("forces", "evaluate forces of a configuration");
    forces_cmd->add_option("--input", input, "configuration JSON")->required();
    forces_cmd->add_option("--output,-o", output, "JSON output path");

    auto* solve_cmd = app.add_subcommand("solve", "balance a block by Newton iteration");
    solve_cmd->add_option("--type", type_str, "level sizes, e.g. 1,2,1");
    solve_cmd->add_option("--end0", end0, "first point re,im");
    solve_cmd->add_option("--end1", end1, "last point re,im");
    solve_cmd->add_option("--init", init_path, "initial block JSON (overrides --type)");
    solve_cmd->add_option("--tol", tol, "tolerance scale");
    solve_cmd->add_option("--output,-o", output, "solved block JSON path");

    auto* concat_cmd = app.add_subcommand("concat", "realize a word over a level window");
    concat_cmd->add_option("--word", word_path, "word JSON")->required();
    concat_cmd->add_option("--window", window, "level window lo:hi")->required();
    concat_cmd->add_option("--output,-o", output, "configuration JSON path");

    auto* classify_cmd = app.add_subcommand("classify", "periodicity of the block word");
    classify_cmd->add_option("--word", word_path, "word JSON")->required();
    classify_cmd->add_option("--max-window", max_window, "largest window half-width");
    classify_cmd->add_option("--max-shift", max_shift, "largest shift scanned");
    classify_cmd->add_option("--output,-o", output, "report JSON path");

    auto* periods_cmd = app.add_subcommand("periods", "period diagnostics at t = 0");
    periods_cmd->add_option("--input", input, "configuration JSON");
    periods_cmd->add_option("--word", word_path, "word JSON");
    periods_cmd->add_option("--window", window, "level window lo:hi");
    periods_cmd->add_option("--t", t, "neck parameter for stability checks");
    periods_cmd->add_option("--output,-o", output, "report JSON path");

    auto* mesh_cmd = app.add_subcommand("mesh", "triangulate sheets and necks");
    mesh_cmd->add_option("--word", word_path, "word JSON");
    mesh_cmd->add_option("--input", input, "configuration JSON");
    mesh_cmd->add_option("--window", window, "level window lo:hi");
    mesh_cmd->add_option("--t", t, "neck parameter");
    mesh_cmd->add_option("--epsilon", glue, "gluing radius");
    mesh_cmd->add_option("--grid", grid, "cells per sheet side");
    mesh_cmd->add_flag("--unscaled", unscaled, "emit the unscaled frame");
    mesh_cmd->add_option("--output,-o", output, "mesh file path");
    mesh_cmd->add_option("--report", report_path, "embeddedness report JSON path");
    mesh_cmd->add_option("--seed", seed, "spot-check sampling seed");

    auto* verify_cmd = app.add_subcommand("verify-paper", "run the verification suite");
    verify_cmd->add_option("--seed", seed, "seed for the randomized property checks");
    verify_cmd->add_option("--output,-o", output, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (forces_cmd->parsed()) return cmd_forces(input, output);
        if (solve_cmd->parsed())
            return cmd_solve(type_str, end0, end1, init_path, output, tol);
        if (concat_cmd->parsed()) return cmd_concat(word_path, window, output);
        if (classify_cmd->parsed())
            return cmd_classify(word_path, max_window, max_shift, output);
        if (periods_cmd->parsed())
            return cmd_periods(input, word_path, window, t, output);
        if (mesh_cmd->parsed())
            return cmd_mesh(word_path, input, window, t, glue, grid, unscaled, output,
                            report_path, seed);
        if (verify_cmd->parsed()) return cmd_verify(seed, output);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
