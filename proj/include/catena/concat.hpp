#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "catena/balance.hpp"
#include "catena/config.hpp"
#include "catena/words.hpp"

namespace catena {

inline constexpr double kCompatibilityTol = 1e-10;
inline constexpr double kConcatBalanceTol = 1e-11;

// A finite library of balanced, pairwise compatible blocks plus a rule
// describing the infinite concatenation.
struct BlockWord {
    std::vector<FiniteConfiguration> library;
    IndexSequence seq;

    BlockWord(std::vector<FiniteConfiguration> lib, Rule rule)
        : library(std::move(lib)), seq(std::move(rule)) {
        if (library.empty()) throw FormatError("block word: empty library");
        cx f0{};
        for (size_t b = 0; b < library.size(); ++b) {
            const auto rep = residual(library[b]);
            if (!rep.balanced)
                throw FormatError("block word: library block " + std::to_string(b) +
                                  " is not balanced (interior residual " +
                                  std::to_string(rep.interior_residual) + ")");
            if (b == 0) {
                f0 = rep.F_C;
            } else if (std::abs(rep.F_C - f0) >
                       kCompatibilityTol * (1.0 + std::abs(f0))) {
                throw FormatError("block word: incompatible residual forces between "
                                  "blocks 0 and " + std::to_string(b));
            }
        }
        check_indices();
    }

    int block_at(long m) const {
        const int b = seq.at(m);
        if (b < 0 || b >= static_cast<int>(library.size()))
            throw FormatError("block word: rule emits out-of-range library index " +
                              std::to_string(b));
        return b;
    }

    cx residual_force() const { return residual(library[0]).F_C; }

private:
    void check_indices() const {
        auto check = [&](const std::vector<int>& v) {
            for (int b : v)
                if (b < 0 || b >= static_cast<int>(library.size()))
                    throw FormatError("block word: library index " + std::to_string(b) +
                                      " out of range");
        };
        if (const auto* p = std::get_if<PeriodicRule>(&seq.rule())) check(p->word);
        if (const auto* e = std::get_if<ExplicitRule>(&seq.rule())) check(e->indices);
        if (const auto* s = std::get_if<SubstitutionRule>(&seq.rule())) {
            check(s->axiom);
            for (const auto& [l, im] : s->rules) check(im);
        }
    }
};

// Block offsets phi_m (phi_0 = 0, phi_{m+1} = phi_m + h_m) and the
// translation applied to each block instance so consecutive endpoints
// coincide.
struct ConcatPlan {
    long m_lo = 0, m_hi = 0;             // block positions covering the window
    std::vector<long> offsets;            // phi_m for m = m_lo .. m_hi + 1
    std::vector<cx> translations;         // per block position m_lo .. m_hi

    long phi(long m) const { return offsets[static_cast<size_t>(m - m_lo)]; }
    cx translation(long m) const {
        return translations[static_cast<size_t>(m - m_lo)];
    }
};

struct ConcatResult {
    Configuration cfg;
    ConcatPlan plan;
    double max_interior_residual = 0.0;  // over non-partial window levels
};

// Realize the concatenation over a window of levels [k_lo, k_hi].  Seam
// levels are shared: the last point of block m is the first point of block
// m+1, emitted once.  Block position 0 anchors its first point at the origin.
inline ConcatResult concatenate(const BlockWord& word, int k_lo, int k_hi) {
    if (k_lo >= k_hi) throw FormatError("concatenate: window must span >= 2 levels");

    auto height = [&](long m) { return word.library[word.block_at(m)].height(); };

    // locate block positions covering the window
    ConcatPlan plan;
    long m = 0, phi = 0;
    while (phi > k_lo) phi -= height(--m);
    while (phi + height(m) <= k_lo) phi += height(m++);
    plan.m_lo = m;
    const long phi_lo = phi;
    long mh = m, ph = phi;
    while (ph + height(mh) < k_hi) ph += height(mh++);
    plan.m_hi = mh;

    // offsets
    plan.offsets.push_back(phi_lo);
    for (long q = plan.m_lo; q <= plan.m_hi; ++q)
        plan.offsets.push_back(plan.offsets.back() + height(q));

    // translations: consecutive endpoints coincide; block 0 starts at 0
    std::map<long, cx> tr;
    {
        auto first_pt = [&](long q) {
            return word.library[word.block_at(q)].first_point();
        };
        auto last_pt = [&](long q) {
            return word.library[word.block_at(q)].last_point();
        };
        // anchor at block 0 if covered, else at m_lo
        const long q0 = (plan.m_lo <= 0 && 0 <= plan.m_hi) ? 0 : plan.m_lo;
        tr[q0] = -first_pt(q0);
        for (long q = q0 + 1; q <= plan.m_hi; ++q)
            tr[q] = tr[q - 1] + last_pt(q - 1) - first_pt(q);
        for (long q = q0 - 1; q >= plan.m_lo; --q)
            tr[q] = tr[q + 1] + first_pt(q + 1) - last_pt(q);
    }
    for (long q = plan.m_lo; q <= plan.m_hi; ++q)
        plan.translations.push_back(tr[q]);

    // realize points over the window
    Configuration cfg;
    cfg.k_min = k_lo;
    cfg.pts.resize(static_cast<size_t>(k_hi - k_lo + 1));
    for (long q = plan.m_lo; q <= plan.m_hi; ++q) {
        const auto& block = word.library[word.block_at(q)];
        const long base = plan.phi(q);
        const cx t = plan.translation(q);
        // local levels 0..h, skipping local 0 except for the lowest block
        const int lk0 = (q == plan.m_lo) ? 0 : 1;
        for (int lk = lk0; lk <= block.height(); ++lk) {
            const long k = base + lk;
            if (k < k_lo || k > k_hi) continue;
            auto& lv = cfg.pts[static_cast<size_t>(k - k_lo)];
            lv.clear();
            for (cx p : block.cfg.level(lk)) lv.push_back(p + t);
        }
    }
    cfg.validate();

    ConcatResult out{cfg, plan, 0.0};
    const auto fs = forces(cfg);
    for (int k = k_lo + 1; k <= k_hi - 1; ++k)
        for (int i = 1; i <= cfg.n(k); ++i)
            out.max_interior_residual =
                std::max(out.max_interior_residual, std::abs(fs.force(k, i)));
    return out;
}

// ---------------------------------------------------------------------------
// Uniform non-degeneracy certificate (block-diagonal structure)
// ---------------------------------------------------------------------------

struct WordCertificate {
    std::vector<NondegeneracyCertificate> per_block;
    double uniform_sigma_min = 0.0;
    bool pass = false;
};

inline WordCertificate certify_word(const BlockWord& word) {
    WordCertificate out;
    out.uniform_sigma_min = std::numeric_limits<double>::infinity();
    for (const auto& block : word.library) {
        const auto cert = certify(block);
        out.uniform_sigma_min = std::min(out.uniform_sigma_min, cert.sigma_min);
        out.per_block.push_back(cert);
    }
    out.pass = out.uniform_sigma_min > 0.0;
    for (const auto& c : out.per_block) out.pass = out.pass && c.pass;
    return out;
}

// ---------------------------------------------------------------------------
// Periodicity classification of the block-index sequence
// ---------------------------------------------------------------------------

struct PeriodicityVerdict {
    enum class Kind { Periodic, QuasiPeriodic, NotDetected } kind = Kind::NotDetected;
    long period = 0;                                // Kind::Periodic (minimal)
    std::vector<std::pair<int, long>> witnesses;    // (window w, shift T)
    int searched_window = 0;
    long searched_shift = 0;
};

// Periodic rules return the divisor-minimal period of the index sequence.
// Other rules are scanned by brute force: for each window size w a shift T
// with agreement on [-w, w].  Verdicts never extrapolate beyond the searched
// bounds.
inline PeriodicityVerdict classify(const BlockWord& word, int max_window,
                                   long max_shift) {
    PeriodicityVerdict v;
    v.searched_window = max_window;
    v.searched_shift = max_shift;

    if (word.seq.is_periodic_rule()) {
        const auto& w = std::get<PeriodicRule>(word.seq.rule()).word;
        const long L = static_cast<long>(w.size());
        for (long T = 1; T <= L; ++T) {
            if (L % T != 0) continue;
            bool ok = true;
            for (long j = 0; j < L && ok; ++j) ok = (w[j] == w[(j + T) % L]);
            if (ok) {
                v.kind = PeriodicityVerdict::Kind::Periodic;
                v.period = T;
                return v;
            }
        }
        throw Error("classify: periodic rule without a period");  // unreachable
    }

    const auto cov = word.seq.coverage();
    bool all_windows = true;
    for (int w = 1; w <= max_window; ++w) {
        std::optional<long> found;
        for (long T = 1; T <= max_shift && !found; ++T) {
            const long lo = -w, hi = w;
            if (cov && (lo < cov->first || hi + T > cov->second)) break;
            bool ok = true;
            for (long j = lo; j <= hi && ok; ++j)
                ok = (word.seq.at(j + T) == word.seq.at(j));
            if (ok) found = T;
        }
        if (found) {
            v.witnesses.emplace_back(w, *found);
        } else {
            all_windows = false;
            break;
        }
    }
    v.kind = all_windows && !v.witnesses.empty()
                 ? PeriodicityVerdict::Kind::QuasiPeriodic
                 : PeriodicityVerdict::Kind::NotDetected;
    return v;
}

// ---------------------------------------------------------------------------
// Genus
// ---------------------------------------------------------------------------

struct Genus {
    bool infinite = false;
    long value = 0;  // sum of (n_k - 1) over the window when finite
};

inline long block_genus(const FiniteConfiguration& fc) {
    long g = 0;
    for (int k = 0; k <= fc.height(); ++k) g += fc.cfg.n(k) - 1;
    return g;
}

// Sum of (n_k - 1) over the level window; "infinite" when the rule provably
// repeats a block of positive genus contribution infinitely often.
inline Genus genus(const BlockWord& word, int k_lo, int k_hi) {
    Genus out;
    if (word.seq.is_periodic_rule()) {
        const auto& w = std::get<PeriodicRule>(word.seq.rule()).word;
        for (int b : w)
            if (block_genus(word.library[b]) > 0) {
                out.infinite = true;
                return out;
            }
    } else if (word.seq.is_substitution_rule()) {
        for (int b : word.seq.recurrent_letters())
            if (block_genus(word.library[b]) > 0) {
                out.infinite = true;
                return out;
            }
    }
    const auto res = concatenate(word, k_lo, k_hi);
    for (int k = k_lo; k <= k_hi; ++k) out.value += res.cfg.n(k) - 1;
    return out;
}

}  // namespace catena
