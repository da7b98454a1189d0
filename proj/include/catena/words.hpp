#pragma once

// Index sequences over Z generated by finite rules: periodic repetition,
// substitution fixed points, or an explicitly listed window.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "catena/types.hpp"

namespace catena {

struct PeriodicRule {
    std::vector<int> word;
};

struct SubstitutionRule {
    std::vector<int> axiom;
    std::map<int, std::vector<int>> rules;

    const std::vector<int>& image(int letter) const {
        auto it = rules.find(letter);
        if (it == rules.end())
            throw FormatError("substitution: no rule for letter " + std::to_string(letter));
        if (it->second.empty())
            throw FormatError("substitution: erasing rule for letter " + std::to_string(letter));
        return it->second;
    }

    std::vector<int> apply(const std::vector<int>& w) const {
        std::vector<int> out;
        for (int a : w) {
            const auto& im = image(a);
            out.insert(out.end(), im.begin(), im.end());
        }
        return out;
    }

    std::vector<int> iterate(std::vector<int> w, int times) const {
        for (int i = 0; i < times; ++i) w = apply(w);
        return w;
    }
};

struct ExplicitRule {
    int m_min = 0;
    std::vector<int> indices;
    int m_max() const { return m_min + static_cast<int>(indices.size()) - 1; }
};

using Rule = std::variant<PeriodicRule, SubstitutionRule, ExplicitRule>;

namespace detail {

inline bool is_prefix(const std::vector<int>& p, const std::vector<int>& w) {
    return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

inline bool is_suffix(const std::vector<int>& s, const std::vector<int>& w) {
    return s.size() <= w.size() && std::equal(s.rbegin(), s.rend(), w.rbegin());
}

inline bool contains_factor(const std::vector<int>& w, int x, int y) {
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i] == x && w[i + 1] == y) return true;
    return false;
}

}  // namespace detail

// Two-sided access to the sequence a rule generates.  For substitutions the
// bi-infinite fixed point is built from a seed pair (x, y) with sigma^p(x)
// ending in x, sigma^p(y) starting with y, and xy occurring in the language;
// positions >= 0 expand y, positions < 0 expand x leftwards.
class IndexSequence {
public:
    explicit IndexSequence(Rule rule) : rule_(std::move(rule)) {
        if (const auto* p = std::get_if<PeriodicRule>(&rule_)) {
            if (p->word.empty()) throw FormatError("periodic rule: empty word");
        } else if (const auto* s = std::get_if<SubstitutionRule>(&rule_)) {
            if (s->axiom.empty()) throw FormatError("substitution rule: empty axiom");
            for (const auto& [l, im] : s->rules)
                if (im.empty())
                    throw FormatError("substitution rule: erasing image for letter " +
                                      std::to_string(l));
            find_seeds(*s);
        } else {
            const auto& e = std::get<ExplicitRule>(rule_);
            if (e.indices.empty()) throw FormatError("explicit rule: empty window");
        }
    }

    bool covers(long m) const {
        if (std::holds_alternative<PeriodicRule>(rule_)) return true;
        if (std::holds_alternative<SubstitutionRule>(rule_)) return true;
        const auto& e = std::get<ExplicitRule>(rule_);
        return m >= e.m_min && m <= e.m_max();
    }

    std::optional<std::pair<long, long>> coverage() const {
        if (const auto* e = std::get_if<ExplicitRule>(&rule_))
            return std::make_pair<long, long>(e->m_min, e->m_max());
        return std::nullopt;  // unbounded
    }

    int at(long m) const {
        if (const auto* p = std::get_if<PeriodicRule>(&rule_)) {
            const long L = static_cast<long>(p->word.size());
            long r = m % L;
            if (r < 0) r += L;
            return p->word[static_cast<size_t>(r)];
        }
        if (const auto* e = std::get_if<ExplicitRule>(&rule_)) {
            if (!covers(m))
                throw CoverageError("explicit rule: index " + std::to_string(m) +
                                    " outside covered window");
            return e->indices[static_cast<size_t>(m - e->m_min)];
        }
        ensure(m);
        if (m >= 0) return right_[static_cast<size_t>(m)];
        return left_[static_cast<size_t>(-m - 1)];
    }

    const Rule& rule() const { return rule_; }

    bool is_periodic_rule() const { return std::holds_alternative<PeriodicRule>(rule_); }
    bool is_substitution_rule() const {
        return std::holds_alternative<SubstitutionRule>(rule_);
    }

    // Letters that occur infinitely often in a substitution fixed point:
    // union of the eventual cycle of the letter-set dynamics A -> letters of
    // sigma(A), seeded by the two-sided expansion seeds.
    std::set<int> recurrent_letters() const {
        const auto& s = std::get<SubstitutionRule>(rule_);
        std::set<int> A{seed_left_, seed_right_};
        std::vector<std::set<int>> history{A};
        for (;;) {
            std::set<int> next;
            for (int l : A)
                for (int m : s.image(l)) next.insert(m);
            auto it = std::find(history.begin(), history.end(), next);
            if (it != history.end()) {
                std::set<int> uni;
                for (; it != history.end(); ++it) uni.insert(it->begin(), it->end());
                for (int m : next) uni.insert(m);
                return uni;
            }
            history.push_back(next);
            A = std::move(next);
        }
    }

private:
    void find_seeds(const SubstitutionRule& s) {
        std::set<int> letters;
        for (const auto& [l, im] : s.rules) {
            letters.insert(l);
            for (int m : im) letters.insert(m);
        }
        for (int a : s.axiom) letters.insert(a);

        // language sample for the factor check
        std::vector<int> sample = s.axiom;
        for (int i = 0; i < 12 && sample.size() < 4096; ++i) sample = s.apply(sample);

        for (int p = 1; p <= 6; ++p) {
            std::vector<int> xs, ys;
            for (int l : letters) {
                const auto im = s.iterate({l}, p);
                if (detail::is_suffix({l}, im) && im.size() >= 2) xs.push_back(l);
                if (detail::is_prefix({l}, im) && im.size() >= 2) ys.push_back(l);
            }
            for (int x : xs)
                for (int y : ys)
                    if (detail::contains_factor(sample, x, y)) {
                        seed_power_ = p;
                        seed_left_ = x;
                        seed_right_ = y;
                        right_ = {y};
                        left_ = {x};  // left_[j] = s[-1-j]
                        return;
                    }
        }
        throw CoverageError(
            "substitution rule: no two-sided fixed-point seed (need letters x,y with "
            "sigma^p(x) ending in x, sigma^p(y) starting with y, and xy in the language)");
    }

    void ensure(long m) const {
        const auto& s = std::get<SubstitutionRule>(rule_);
        while (m >= 0 && static_cast<long>(right_.size()) <= m) {
            right_ = s.iterate(right_, seed_power_);
            if (right_.size() > (1u << 26))
                throw CoverageError("substitution rule: expansion too large");
        }
        while (m < 0 && static_cast<long>(left_.size()) < -m) {
            // left_ stores s[-1], s[-2], ... ; expand and re-reverse
            std::vector<int> block(left_.rbegin(), left_.rend());
            block = s.iterate(block, seed_power_);
            left_.assign(block.rbegin(), block.rend());
            if (left_.size() > (1u << 26))
                throw CoverageError("substitution rule: expansion too large");
        }
    }

    Rule rule_;
    int seed_power_ = 1;
    int seed_left_ = 0, seed_right_ = 0;
    mutable std::vector<int> right_;  // positions 0, 1, 2, ...
    mutable std::vector<int> left_;   // positions -1, -2, ...
};

}  // namespace catena
