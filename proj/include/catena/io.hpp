#pragma once

// File formats: configuration, block, word and report JSON.  Parsing is
// strict: unknown fields are rejected.

#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "catena/balance.hpp"
#include "catena/concat.hpp"
#include "catena/config.hpp"

namespace catena {

using json = nlohmann::ordered_json;

namespace io_detail {

inline void require_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& ctx) {
    if (!j.is_object()) throw FormatError(ctx + ": expected a JSON object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw FormatError(ctx + ": unknown field \"" + key + "\"");
    }
}

inline const json& require(const json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key)) throw FormatError(ctx + ": missing field \"" + key + "\"");
    return j.at(key);
}

inline cx parse_complex(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw FormatError(ctx + ": complex values are [re, im] pairs");
    return cx(j[0].get<double>(), j[1].get<double>());
}

inline json dump_complex(cx z) { return json::array({z.real(), z.imag()}); }

}  // namespace io_detail

// --------------------------------------------------------------------------
// Configuration: {"levels": [{"k": int, "points": [[re, im], ...]}, ...]}
// --------------------------------------------------------------------------

inline json to_json(const Configuration& cfg) {
    json levels = json::array();
    for (int k = cfg.k_min; k <= cfg.k_max(); ++k) {
        json pts = json::array();
        for (cx p : cfg.level(k)) pts.push_back(io_detail::dump_complex(p));
        levels.push_back(json{{"k", k}, {"points", std::move(pts)}});
    }
    return json{{"levels", std::move(levels)}};
}

inline Configuration configuration_from_json(const json& j) {
    using namespace io_detail;
    require_keys(j, {"levels"}, "configuration");
    const json& levels = require(j, "levels", "configuration");
    if (!levels.is_array() || levels.empty())
        throw FormatError("configuration: \"levels\" must be a non-empty array");

    std::vector<std::pair<int, std::vector<cx>>> parsed;
    for (const auto& lv : levels) {
        require_keys(lv, {"k", "points"}, "configuration level");
        const json& jk = require(lv, "k", "configuration level");
        if (!jk.is_number_integer())
            throw FormatError("configuration level: \"k\" must be an integer");
        const json& jp = require(lv, "points", "configuration level");
        if (!jp.is_array() || jp.empty())
            throw FormatError("configuration level: \"points\" must be non-empty");
        std::vector<cx> pts;
        for (const auto& p : jp) pts.push_back(parse_complex(p, "configuration point"));
        parsed.emplace_back(jk.get<int>(), std::move(pts));
    }
    std::sort(parsed.begin(), parsed.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < parsed.size(); ++i)
        if (parsed[i].first != parsed[i - 1].first + 1)
            throw FormatError("configuration: levels must form a contiguous window");

    Configuration cfg;
    cfg.k_min = parsed.front().first;
    for (auto& [k, pts] : parsed) cfg.pts.push_back(std::move(pts));
    cfg.validate();
    return cfg;
}

// --------------------------------------------------------------------------
// Block: {"name": str, "type": [ints], "points": [[[re,im],...] per level],
//         "residual": [re, im]}
// --------------------------------------------------------------------------

inline json to_json(const FiniteConfiguration& fc, const std::string& name) {
    json type = json::array();
    json points = json::array();
    for (int k = 0; k <= fc.height(); ++k) {
        type.push_back(fc.cfg.n(k));
        json lv = json::array();
        for (cx p : fc.cfg.level(k)) lv.push_back(io_detail::dump_complex(p));
        points.push_back(std::move(lv));
    }
    return json{{"name", name},
                {"type", std::move(type)},
                {"points", std::move(points)},
                {"residual", io_detail::dump_complex(residual(fc).F_C)}};
}

inline FiniteConfiguration block_from_json(const json& j) {
    using namespace io_detail;
    require_keys(j, {"name", "type", "points", "residual"}, "block");
    const json& type = require(j, "type", "block");
    const json& points = require(j, "points", "block");
    if (!type.is_array() || !points.is_array() || type.size() != points.size())
        throw FormatError("block: \"type\" and \"points\" must be arrays of equal length");

    Configuration cfg;
    cfg.k_min = 0;
    for (size_t k = 0; k < points.size(); ++k) {
        std::vector<cx> lv;
        for (const auto& p : points[k]) lv.push_back(parse_complex(p, "block point"));
        if (static_cast<int>(lv.size()) != type[k].get<int>())
            throw FormatError("block: level size disagrees with \"type\"");
        cfg.pts.push_back(std::move(lv));
    }
    FiniteConfiguration fc{cfg};
    fc.validate();
    if (j.contains("residual")) {
        const cx claimed = parse_complex(j.at("residual"), "block residual");
        const cx actual = residual(fc).F_C;
        if (std::abs(claimed - actual) > 1e-8 * (1.0 + std::abs(actual)))
            throw FormatError("block: stated residual disagrees with the points");
    }
    return fc;
}

// --------------------------------------------------------------------------
// Word: {"library": [block | builtin ref, ...],
//        "rule": {"kind": "periodic"|"substitution"|"explicit", ...}}
// Builtin refs: {"builtin": "chain"|"fan"|"ladder22", "a": [re,im], "h": int,
//                "n": int, "scale": [re,im], "scale_to": [re,im]}
// --------------------------------------------------------------------------

inline FiniteConfiguration library_entry_from_json(const json& j) {
    using namespace io_detail;
    if (j.is_object() && j.contains("builtin")) {
        require_keys(j, {"builtin", "a", "h", "n", "scale", "scale_to"}, "library entry");
        BuiltinParams p;
        if (j.contains("a")) p.a = parse_complex(j.at("a"), "library entry a");
        if (j.contains("h")) p.h = j.at("h").get<int>();
        if (j.contains("n")) p.n = j.at("n").get<int>();
        auto fc = builtin(j.at("builtin").get<std::string>(), p);
        if (j.contains("scale"))
            fc = scale(fc, parse_complex(j.at("scale"), "library entry scale"));
        if (j.contains("scale_to"))
            fc = scale_to_residual(fc, parse_complex(j.at("scale_to"), "library entry scale_to"));
        return fc;
    }
    return block_from_json(j);
}

inline Rule rule_from_json(const json& j) {
    using namespace io_detail;
    const std::string kind = require(j, "kind", "rule").get<std::string>();
    if (kind == "periodic") {
        require_keys(j, {"kind", "word"}, "periodic rule");
        return PeriodicRule{require(j, "word", "periodic rule").get<std::vector<int>>()};
    }
    if (kind == "substitution") {
        require_keys(j, {"kind", "axiom", "rules"}, "substitution rule");
        SubstitutionRule s;
        s.axiom = require(j, "axiom", "substitution rule").get<std::vector<int>>();
        for (const auto& [key, im] : require(j, "rules", "substitution rule").items())
            s.rules[std::stoi(key)] = im.get<std::vector<int>>();
        return s;
    }
    if (kind == "explicit") {
        require_keys(j, {"kind", "m_min", "indices"}, "explicit rule");
        ExplicitRule e;
        e.m_min = require(j, "m_min", "explicit rule").get<int>();
        e.indices = require(j, "indices", "explicit rule").get<std::vector<int>>();
        return e;
    }
    throw FormatError("rule: unknown kind \"" + kind + "\"");
}

inline BlockWord word_from_json(const json& j) {
    using namespace io_detail;
    require_keys(j, {"library", "rule"}, "word");
    const json& lib = require(j, "library", "word");
    if (!lib.is_array() || lib.empty())
        throw FormatError("word: \"library\" must be a non-empty array");
    std::vector<FiniteConfiguration> blocks;
    for (const auto& e : lib) blocks.push_back(library_entry_from_json(e));
    return BlockWord(std::move(blocks), rule_from_json(require(j, "rule", "word")));
}

inline json to_json(const PeriodicityVerdict& v) {
    json out;
    switch (v.kind) {
        case PeriodicityVerdict::Kind::Periodic:
            out["kind"] = "periodic";
            out["period"] = v.period;
            break;
        case PeriodicityVerdict::Kind::QuasiPeriodic: {
            out["kind"] = "quasi-periodic";
            json w = json::array();
            for (auto [win, shift] : v.witnesses)
                w.push_back(json{{"window", win}, {"shift", shift}});
            out["witnesses"] = std::move(w);
            break;
        }
        case PeriodicityVerdict::Kind::NotDetected:
            out["kind"] = "not-detected";
            break;
    }
    out["searched"] = json{{"max_window", v.searched_window},
                           {"max_shift", v.searched_shift}};
    return out;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw FormatError("invalid JSON in " + path + ": " + e.what());
    }
    return j;
}

inline void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace catena
