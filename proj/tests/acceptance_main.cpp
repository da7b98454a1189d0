// Acceptance runner: one line per criterion, strict tolerances, runtime
// budgets where stated.  Exit code is the number of failed criteria.

#include <chrono>
#include <iomanip>
#include <iostream>

#include "catena/verify.hpp"

using namespace catena;

namespace {

struct Criterion {
    int id;
    std::string title;
    CheckSuite suite;
    double seconds = 0.0;
    double budget = 0.0;  // 0 = no budget
    bool pass() const {
        return suite.pass() && (budget == 0.0 || seconds <= budget);
    }
};

template <typename F>
Criterion run(int id, const std::string& title, double budget, F&& f) {
    Criterion c;
    c.id = id;
    c.title = title;
    c.budget = budget;
    const auto start = std::chrono::steady_clock::now();
    c.suite = f();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                    .count();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    const unsigned seed = argc > 1 ? unsigned(std::stoul(argv[1])) : 20240613u;

    std::vector<Criterion> criteria;
    criteria.push_back(run(1, "closed-form residual forces (chain, fan 1..6, ladder22)",
                           1.0, [] { return verify_residual_forces(); }));
    criteria.push_back(run(2, "block matrix determinant 4/243", 1.0,
                           [] { return verify_determinant(); }));
    criteria.push_back(run(3, "summation identities on 100 random blocks per type", 5.0,
                           [&] { return verify_summation_identities(seed); }));
    criteria.push_back(run(4, "Newton recovery of perturbed fans (n = 2, 3)", 1.0,
                           [&] { return verify_newton_recovery(seed + 1); }));
    criteria.push_back(run(5, "balancing limit boF = 4 pi i F on 100 random configurations",
                           10.0, [&] { return verify_limit_balance(seed + 2); }));
    criteria.push_back(run(6, "A-period prescription and orientation identity", 0.0,
                           [] { return verify_a_periods(); }));
    criteria.push_back(run(7, "zero counts and alignment functionals", 0.0,
                           [] { return verify_zero_alignment(); }));
    criteria.push_back(run(8, "Laurent: c_{-1}, reconstruction, stability, neck limits",
                           0.0, [] { return verify_laurent(); }));
    criteria.push_back(run(9, "horizontal limit vanishes with central b", 0.0,
                           [] { return verify_horizontal_limit(); }));
    criteria.push_back(run(10, "quasi-periodicity: Fibonacci witnesses, minimal periods",
                           5.0, [] { return verify_words(); }));
    criteria.push_back(run(11, "mesh topology (genus 1) and embeddedness behavior", 0.0,
                           [] { return verify_mesh_topology(); }));

    int failures = 0;
    for (const auto& c : criteria) {
        const bool ok = c.pass();
        if (!ok) ++failures;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << std::setw(2) << c.id << ". "
                  << c.title << "  [" << std::fixed << std::setprecision(2) << c.seconds
                  << "s";
        if (c.budget > 0.0) std::cout << " / " << c.budget << "s budget";
        std::cout << "]\n" << std::defaultfloat;
        if (!c.suite.pass())
            for (const auto& chk : c.suite.checks)
                if (!chk.pass)
                    std::cout << "      failed: " << chk.name << " (deviation "
                              << chk.deviation << ", tolerance " << chk.tolerance
                              << ")\n";
    }
    std::cout << (failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
              << (criteria.size() - failures) << "/" << criteria.size() << ")\n";
    return failures;
}
