#pragma once

// Verification suites shared by the CLI and the acceptance runner.  Every
// check carries {computed, reference, deviation, tolerance, pass} and renders
// to JSON keyed by name.

#include <chrono>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "catena/concat.hpp"
#include "catena/io.hpp"
#include "catena/laurent.hpp"
#include "catena/mesh.hpp"
#include "catena/periods.hpp"
#include "catena/surface.hpp"

namespace catena {

struct CheckResult {
    std::string name;
    json computed;
    json reference;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct CheckSuite {
    std::vector<CheckResult> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }

    void add(std::string name, json computed, json reference, double deviation,
             double tolerance) {
        CheckResult c;
        c.name = std::move(name);
        c.computed = std::move(computed);
        c.reference = std::move(reference);
        c.deviation = deviation;
        c.tolerance = tolerance;
        c.pass = deviation <= tolerance;
        checks.push_back(std::move(c));
    }

    void add_value(std::string name, cx computed, cx reference, double tolerance) {
        add(std::move(name), json::array({computed.real(), computed.imag()}),
            json::array({reference.real(), reference.imag()}),
            std::abs(computed - reference), tolerance);
    }

    void add_flag(std::string name, bool ok, json detail = {}) {
        CheckResult c;
        c.name = std::move(name);
        c.computed = std::move(detail);
        c.reference = "pass";
        c.deviation = ok ? 0.0 : 1.0;
        c.tolerance = 0.0;
        c.pass = ok;
        checks.push_back(std::move(c));
    }

    void merge(const CheckSuite& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    }

    json to_json() const {
        json out = json::object();
        json body = json::object();
        for (const auto& c : checks)
            body[c.name] = json{{"value", c.computed},
                                {"reference", c.reference},
                                {"deviation", c.deviation},
                                {"tolerance", c.tolerance},
                                {"pass", c.pass}};
        out["checks"] = std::move(body);
        out["pass"] = pass();
        return out;
    }

    void print(std::ostream& os) const {
        for (const auto& c : checks) {
            os << (c.pass ? "PASS " : "FAIL ") << c.name << "  (deviation "
               << std::scientific << std::setprecision(3) << c.deviation
               << ", tolerance " << c.tolerance << ")\n"
               << std::defaultfloat;
        }
    }
};

// ---------------------------------------------------------------------------
// Shared example material
// ---------------------------------------------------------------------------

namespace verify_detail {

inline Configuration random_configuration(std::mt19937& rng,
                                          const std::vector<int>& sizes) {
    std::uniform_real_distribution<double> jit(-0.3, 0.3);
    for (int attempt = 0; attempt < 200; ++attempt) {
        Configuration cfg;
        cfg.k_min = 0;
        cfg.pts.resize(sizes.size());
        for (size_t lk = 0; lk < sizes.size(); ++lk) {
            const int nk = sizes[lk];
            for (int j = 0; j < nk; ++j) {
                const double x = (nk == 1 ? 0.0 : double(j) - 0.5 * (nk - 1)) + jit(rng);
                const double y = double(lk) + 0.3 * jit(rng);
                cfg.pts[lk].push_back(cx(x, y));
            }
        }
        try {
            cfg.validate(1e-3);
            return cfg;
        } catch (const DegenerateConfiguration&) {
        }
    }
    throw Error("verify: could not draw a distinct random configuration");
}

inline const std::vector<std::vector<int>>& property_types() {
    static const std::vector<std::vector<int>> t{
        {1, 1}, {1, 2, 1}, {1, 2, 2, 1}, {1, 3, 1}};
    return t;
}

inline std::vector<std::pair<std::string, Configuration>> example_charts() {
    std::vector<std::pair<std::string, Configuration>> out;
    out.emplace_back("chain", chain(cx(1.0), 3).cfg);
    out.emplace_back("fan2", fan(2).cfg);
    out.emplace_back("fan3", fan(3).cfg);
    out.emplace_back("ladder22", ladder22().cfg);
    return out;
}

}  // namespace verify_detail

// Criterion 1: closed-form residual forces.
inline CheckSuite verify_residual_forces() {
    CheckSuite s;
    for (cx a : {cx(1.0), cx(2.0), cx(0.7, -0.4)}) {
        const auto rep = residual(chain(a, 3));
        std::ostringstream nm;
        nm << "residual chain a=" << a.real() << (a.imag() < 0 ? "-" : "+")
           << std::abs(a.imag()) << "i";
        const cx want = 1.0 / a;
        s.add_value(nm.str(), rep.F_C, want, 1e-12 * std::abs(want));
    }
    for (int n = 1; n <= 6; ++n) {
        const auto rep = residual(fan(n));
        const cx want = cx(0.0, -double(n + 1) / (2.0 * n));  // (n+1)/(2 n i)
        s.add_value("residual fan n=" + std::to_string(n), rep.F_C, want,
                    1e-12 * std::abs(want));
    }
    {
        const auto rep = residual(ladder22());
        const cx want = 2.0 / (3.0 * I);
        s.add_value("residual ladder22", rep.F_C, want, 1e-12 * std::abs(want));
    }
    return s;
}

// Criterion 2: |det| of the height-3 block matrix equals 4/243.
inline CheckSuite verify_determinant() {
    CheckSuite s;
    const auto cert = certify(ladder22());
    s.add("ladder22 |det| = 4/243", std::abs(cert.determinant), 4.0 / 243.0,
          std::abs(std::abs(cert.determinant) - 4.0 / 243.0), 1e-10 * (4.0 / 243.0));
    return s;
}

// Criterion 3: summation identities on random blocks.
inline CheckSuite verify_summation_identities(unsigned seed) {
    CheckSuite s;
    std::mt19937 rng(seed);
    for (const auto& type : verify_detail::property_types()) {
        double worst_sum = 0.0, worst_moment = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            FiniteConfiguration fc{verify_detail::random_configuration(rng, type)};
            const auto rep = residual(fc);
            worst_sum = std::max(worst_sum,
                                 rep.sum_force_dev / std::max(1.0, rep.sum_force_scale));
            worst_moment = std::max(worst_moment, rep.moment_dev / rep.moment_scale);
        }
        std::string tname;
        for (int n : type) tname += std::to_string(n);
        s.add("sum F = 0, type " + tname + " (100 random)", worst_sum, 0.0, worst_sum,
              1e-10);
        s.add("sum pF identity, type " + tname + " (100 random)", worst_moment, 0.0,
              worst_moment, 1e-10);
    }
    return s;
}

// Criterion 4: Newton recovery of the fan blocks from 0.1-perturbations.
inline CheckSuite verify_newton_recovery(unsigned seed) {
    CheckSuite s;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-0.1, 0.1);
    for (int n : {2, 3}) {
        const auto exact = fan(n);
        auto start = exact;
        for (int i = 1; i <= n; ++i)
            start.cfg.level(1)[i - 1] += cx(d(rng), d(rng));
        const auto res = newton_balance(start);

        double dist = 0.0;
        for (int k = 0; k <= 2; ++k) {
            auto got = res.config.cfg.level(k);
            auto want = exact.cfg.level(k);
            auto by_real = [](cx x, cx y) {
                return std::make_pair(x.real(), x.imag()) <
                       std::make_pair(y.real(), y.imag());
            };
            std::sort(got.begin(), got.end(), by_real);
            std::sort(want.begin(), want.end(), by_real);
            for (size_t i = 0; i < got.size(); ++i)
                dist = std::max(dist, std::abs(got[i] - want[i]));
        }
        s.add("newton fan n=" + std::to_string(n) + " recovery distance", dist, 0.0,
              dist, 1e-10);
        s.add("newton fan n=" + std::to_string(n) + " iterations",
              res.iterations, "<= 8", res.iterations <= 8 ? 0.0 : 1.0, 0.0);

        double worst_ratio = 0.0;
        const auto& r = res.residual_history;
        for (size_t i = 0; i + 1 < r.size(); ++i) {
            if (r[i] < 1e-13) break;
            worst_ratio = std::max(worst_ratio, r[i + 1] / (r[i] * r[i]));
        }
        s.add("newton fan n=" + std::to_string(n) + " quadratic decay ratio",
              worst_ratio, "bounded", worst_ratio, 1e3);
    }
    return s;
}

// Criterion 5: the balancing-limit factor boF = 4 pi i F entrywise.
inline CheckSuite verify_limit_balance(unsigned seed) {
    CheckSuite s;
    std::mt19937 rng(seed);
    double worst = 0.0, worstG = 0.0;
    const auto& types = verify_detail::property_types();
    for (int trial = 0; trial < 100; ++trial) {
        const auto cfg =
            verify_detail::random_configuration(rng, types[trial % types.size()]);
        const auto rep = limit_balance(ChartStack(cfg));
        const auto fs = forces(cfg);
        for (const auto& e : rep.entries) {
            const cx want = 4.0 * PI * I * fs.force(e.k, e.i);
            worst = std::max(worst, std::abs(e.boF - want) / (1.0 + std::abs(want)));
        }
        for (double dev : rep.boG_deviation)
            worstG = std::max(worstG, dev / (1.0 + 4.0 * PI));
    }
    s.add("boF = 4 pi i F entrywise (100 random)", worst, 0.0, worst, 1e-10);
    s.add("boG = 4 pi i G (100 random)", worstG, 0.0, worstG, 1e-10);
    return s;
}

// Criterion 6: A-period prescription and orientation identity.
inline CheckSuite verify_a_periods() {
    CheckSuite s;
    for (const auto& [name, cfg] : verify_detail::example_charts()) {
        const ChartStack stack(cfg);
        const double eps = 0.45 * stack.min_node_gap();
        double worst = 0.0, worst_orient = 0.0;
        for (const auto& c : a_period_checks(stack, eps)) {
            worst = std::max(worst, c.deviation);
            worst_orient = std::max(worst_orient, c.orientation_dev);
        }
        s.add("A-periods 2 pi i gamma, " + name, worst, 0.0, worst, 1e-10);
        s.add("A-period orientation identity, " + name, worst_orient, 0.0, worst_orient,
              1e-10);
    }
    return s;
}

// Criterion 7: zero counts and alignment functionals at central weights.
inline CheckSuite verify_zero_alignment() {
    CheckSuite s;
    for (const auto& [name, cfg] : verify_detail::example_charts()) {
        const ChartStack stack(cfg);
        const double eps = 0.45 * stack.min_node_gap();
        bool counts_ok = true;
        double worstZ = 0.0;
        for (int k = stack.k_min() + 1; k <= stack.k_max(); ++k) {
            const auto rep = zero_alignment(stack.chart(k), eps);
            counts_ok = counts_ok && rep.zero_count == rep.expected_zero_count &&
                        rep.count_roundoff < 1e-6;
            worstZ = std::max(worstZ, rep.max_Z);
        }
        s.add_flag("zero count n_k + n_{k-1} - 2, " + name, counts_ok);
        s.add("alignment |Z| at central weights, " + name, worstZ, 0.0, worstZ, 1e-9);
    }
    return s;
}

// Criterion 8: Laurent data.  The coefficient and reconstruction checks run
// on the plain example charts; the t-stability check runs on the
// compatibility-scaled fan family over buffered windows (see the README note
// on intrinsic O(t^2) constants).
inline CheckSuite verify_laurent() {
    CheckSuite s;

    {  // c_{-1} = -gamma on every full-chart neck of the builtin examples
        double worst = 0.0;
        for (const auto& [name, cfg] : verify_detail::example_charts()) {
            const ChartStack stack(cfg);
            const auto cs = select_constants(stack);
            for (int k = stack.k_min(); k < stack.k_max(); ++k)
                for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
                    const auto blk = laurent(stack, k, i, cs);
                    worst = std::max(worst, blk.c_minus1_dev);
                    worst = std::max(worst, blk.d_minus1_dev);
                }
        }
        s.add("Laurent c_{-1} = -gamma (all builtin necks)", worst, 0.0, worst, 1e-12);
    }

    {  // series reconstruction on the fan2 annulus
        const ChartStack stack(fan(2).cfg);
        const auto cs = select_constants(stack);
        const auto blk = laurent(stack, 0, 1, cs, 40);
        const auto g = stack.chart(0).g();
        const auto w = stack.chart(0).omega();
        const cx a = stack.neck_a(0, 1);
        double worst = 0.0;
        int samples = 0;
        for (int q = 0; q < 20; ++q) {
            const double th = 2.0 * PI * q / 20.0;
            const double rad = cs.epsp * (1.0 + 0.8 * (q % 5) / 5.0);
            const cx z = a + rad * cx(std::cos(th), std::sin(th));
            const cx v = 1.0 / g.eval(z);
            if (std::abs(v) > cs.rho) continue;
            const cx dv_dz = -g.eval_deriv(z) / (g.eval(z) * g.eval(z));
            const cx series = omega_series_dv(blk, v) * dv_dz;
            const cx direct = w.eval(z);
            worst = std::max(worst, std::abs(series - direct) / (1.0 + std::abs(direct)));
            ++samples;
        }
        s.add("Laurent reconstruction of omega (fan2 annulus, cutoff 40)", worst,
              json{{"samples", samples}}, worst, 1e-8);
    }

    {  // vertical-period finite part stable between t = 1e-3 and 1e-4
        double worst = 0.0;
        for (int n : {2, 3, 4}) {
            BlockWord word({scale_to_residual(fan(n), 1.0 / (2.0 * I))},
                           PeriodicRule{{0}});
            const ChartStack stack(concatenate(word, -2, 4).cfg);
            const auto cs = select_constants(stack);
            for (int k = 0; k <= 1; ++k)
                for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
                    const auto blk = laurent(stack, k, i, cs);
                    const auto p1 = vertical_period(blk, 1e-3);
                    const auto p2 = vertical_period(blk, 1e-4);
                    worst = std::max(worst, std::abs(p1.finite_part - p2.finite_part));
                }
        }
        s.add("vertical finite part stable t=1e-3 vs 1e-4 (scaled fans)", worst, 0.0,
              worst, 1e-6);
    }

    {  // neck integral limits vs direct quadrature; central values -+eps'
        const ChartStack stack(fan(2).cfg);
        const auto cs = select_constants(stack);
        double worst_q = 0.0, worst_c = 0.0;
        for (int k = 0; k <= 1; ++k)
            for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
                const auto blk = laurent(stack, k, i, cs);
                const auto ni = neck_integrals(blk, 1e-4);
                const auto [vq, wq] = neck_limits_quadrature(stack, k, i, cs.epsp);
                worst_q = std::max(worst_q, std::abs(ni.v_limit0 - vq));
                worst_q = std::max(worst_q, std::abs(ni.w_limit0 - wq));
                worst_c = std::max(worst_c, std::abs(ni.v_limit0 - cx(-cs.epsp)));
                worst_c = std::max(worst_c, std::abs(ni.w_limit0 - cx(+cs.epsp)));
            }
        s.add("neck integral limits vs quadrature", worst_q, 0.0, worst_q, 1e-8);
        s.add("neck integral limits = -+eps' (central weights)", worst_c, 0.0, worst_c,
              1e-8);
    }
    return s;
}

// Criterion 9: the horizontal limit vanishes with the central b values.
inline CheckSuite verify_horizontal_limit() {
    CheckSuite s;
    for (const auto& name : {std::string("fan2"), std::string("fan3"),
                             std::string("ladder22")}) {
        const Configuration cfg =
            name == "fan2" ? fan(2).cfg : (name == "fan3" ? fan(3).cfg : ladder22().cfg);
        const ChartStack stack(cfg);
        double worst = 0.0;
        for (const auto& e : horizontal_limit(stack))
            worst = std::max(worst, std::abs(e.value));
        s.add("H(0) = 0 with central b, " + name, worst, 0.0, worst, 1e-10);
    }
    return s;
}

// Criterion 10: quasi-periodicity classification.
inline CheckSuite verify_words() {
    CheckSuite s;
    const auto c1 = chain(cx(1.0), 1);
    const auto c2 = chain(cx(1.0), 2);

    SubstitutionRule fib;
    fib.axiom = {0};
    fib.rules[0] = {0, 1};
    fib.rules[1] = {0};
    const BlockWord fword({c1, c2}, fib);
    const auto v = classify(fword, 32, 10946);
    bool ok = v.kind == PeriodicityVerdict::Kind::QuasiPeriodic &&
              v.witnesses.size() == 32;
    long max_shift = 0;
    for (auto [w, T] : v.witnesses) {
        max_shift = std::max(max_shift, T);
        for (long j = -w; j <= w; ++j) ok = ok && fword.seq.at(j + T) == fword.seq.at(j);
    }
    s.add_flag("Fibonacci word: witnesses for all windows <= 32",
               ok && max_shift <= 10946,
               json{{"max shift", max_shift}});
    s.add_flag("Fibonacci word: not classified periodic",
               v.kind != PeriodicityVerdict::Kind::Periodic);

    auto period_of = [&](std::vector<int> w) {
        return classify(BlockWord({c1, c2}, PeriodicRule{std::move(w)}), 8, 64).period;
    };
    s.add("minimal period of [0,1,1]", period_of({0, 1, 1}), 3,
          std::abs(period_of({0, 1, 1}) - 3), 0.0);
    s.add("minimal period of [0,1,0,1]", period_of({0, 1, 0, 1}), 2,
          std::abs(period_of({0, 1, 0, 1}) - 2), 0.0);
    s.add("minimal period of [0,1,0,0,1,0]", period_of({0, 1, 0, 0, 1, 0}), 3,
          std::abs(period_of({0, 1, 0, 0, 1, 0}) - 3), 0.0);
    return s;
}

// Criterion 11: mesh topology and embeddedness behavior of the
// one-fan-in-a-chain word over a 5-level window.
inline CheckSuite verify_mesh_topology(int grid = 128) {
    CheckSuite s;
    const cx target = 1.0 / (2.0 * I);
    BlockWord word({chain(2.0 * I, 1), scale_to_residual(fan(2), target)},
                   ExplicitRule{-2, {0, 0, 1, 0, 0}});
    const auto cfg = concatenate(word, -1, 3).cfg;

    const auto stack = build_sheets(cfg, 1e-3, {.glue_radius = 0.3});
    const auto necks = build_necks(stack);
    const auto mesh = build_mesh(stack, necks, {.grid = grid, .neck_rows = 10});
    mesh.validate();
    const long g = mesh.genus_with_boundary_correction();
    s.add("mesh genus (fan-in-chain, 5 levels)", g, 1, std::abs(double(g - 1)), 0.0);

    const auto good = embeddedness_report(stack, necks, &mesh);
    s.add_flag("embeddedness passes at t = 1e-3", good.pass);

    const auto bad_stack = build_sheets(cfg, 0.5, {.glue_radius = 0.3});
    const auto bad = embeddedness_report(bad_stack, build_necks(bad_stack));
    s.add_flag("embeddedness fails at t = 0.5 (expected)", !bad.pass);
    return s;
}

// The verify-paper CLI subset: closed forms, determinant, identities, the
// balancing factor, Laurent residues and zero counts.
inline CheckSuite verify_paper_suite(unsigned seed) {
    CheckSuite s;
    s.merge(verify_residual_forces());
    s.merge(verify_determinant());
    s.merge(verify_summation_identities(seed));
    s.merge(verify_limit_balance(seed + 1));
    s.merge(verify_zero_alignment());

    // Lemma-A.1 residue coefficient only (fast subset of criterion 8)
    const ChartStack stack(fan(2).cfg);
    const auto cs = select_constants(stack);
    double worst = 0.0;
    for (int k = 0; k <= 1; ++k)
        for (int i = 1; i <= stack.chart(k).n_a(); ++i) {
            const auto blk = laurent(stack, k, i, cs);
            worst = std::max(worst, blk.c_minus1_dev);
        }
    s.add("Laurent c_{-1} = -gamma (fan2)", worst, 0.0, worst, 1e-12);
    return s;
}

}  // namespace catena
