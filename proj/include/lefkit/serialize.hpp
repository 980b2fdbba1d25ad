#pragma once

// JSON documents for collections, closure traces and verdicts. Keys are
// emitted in a fixed order and reps are canonical and lex-sorted, so equal
// inputs always serialize to identical bytes.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lefkit/collections.hpp"
#include "lefkit/saturation.hpp"

namespace lefkit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "lefkit/1";

class DocumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline Json count_to_json(Count c) {
    if (c <= static_cast<Count>(UINT64_MAX)) return Json(static_cast<std::uint64_t>(c));
    return Json(to_string(c));
}

inline Json dims_to_json(const GradedDims& g) {
    Json a = Json::array();
    for (Count c : g.dims) a.push_back(count_to_json(c));
    return a;
}

inline Json points_to_json(const std::vector<Multidegree>& pts) {
    Json a = Json::array();
    for (const auto& p : pts) a.push_back(to_string(p));
    return a;
}

inline Json orbit_set_to_json(const OrbitSet& s) { return points_to_json(s.reps()); }

inline Json collection_to_json(const LefschetzCollection& c) {
    Json j;
    j["schema"] = kSchema;
    j["k"] = c.k;
    j["n"] = c.n;
    Json blocks = Json::array();
    for (const auto& b : c.blocks) blocks.push_back(orbit_set_to_json(b));
    j["blocks"] = std::move(blocks);
    return j;
}

inline Json violation_to_json(const Violation& v) {
    Json j;
    j["kind"] = to_string(v.kind);
    j["witness"] = points_to_json(v.witness);
    j["ext"] = dims_to_json(v.detail);
    j["message"] = v.message;
    return j;
}

struct LoadedCollection {
    LefschetzCollection collection;
    /// Format problems that were normalized away: non-canonical reps
    /// (invariance) and reps out of lex order (order).
    std::vector<Violation> issues;
};

inline LoadedCollection collection_from_json(const Json& j) {
    auto fail = [](const std::string& why) { throw DocumentError("collection document: " + why); };
    if (!j.is_object()) fail("expected an object");
    if (j.contains("schema") && j["schema"] != kSchema) fail("unsupported schema " + j["schema"].dump());
    if (!j.contains("k") || !j["k"].is_number_integer() || j["k"].get<long long>() < 1) fail("missing or bad k");
    if (!j.contains("n") || !j["n"].is_number_integer() || j["n"].get<long long>() < 1) fail("missing or bad n");
    if (!j.contains("blocks") || !j["blocks"].is_array()) fail("missing blocks");
    LoadedCollection out;
    auto& c = out.collection;
    c.k = j["k"].get<std::size_t>();
    c.n = j["n"].get<int>();
    for (const auto& block : j["blocks"]) {
        if (!block.is_array()) fail("each block must be an array of multidegree strings");
        std::vector<Multidegree> pts;
        for (const auto& s : block) {
            if (!s.is_string()) fail("reps must be strings like \"(1,0,0)\"");
            auto p = parse_multidegree(s.get<std::string>());
            if (p.arity() != c.k) fail("rep " + to_string(p) + " does not have arity " + std::to_string(c.k));
            if (!is_canonical(p)) {
                Violation v;
                v.kind = ViolationKind::invariance;
                v.witness = {p, canonical_rep(p)};
                v.message = "rep " + to_string(p) + " is not canonical";
                out.issues.push_back(std::move(v));
            }
            if (!pts.empty() && !(canonical_rep(pts.back()) < canonical_rep(p))) {
                Violation v;
                v.kind = ViolationKind::order;
                v.witness = {pts.back(), p};
                v.message = "reps are not strictly lex ascending";
                out.issues.push_back(std::move(v));
            }
            pts.push_back(std::move(p));
        }
        c.blocks.push_back(OrbitSet::from_points(c.k, pts));
    }
    return out;
}

inline LoadedCollection collection_from_string(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw DocumentError(std::string("invalid JSON: ") + e.what());
    }
    return collection_from_json(j);
}

inline Json rule_to_json(const RuleApplication& r) {
    Json j;
    j["axis"] = r.axis;
    j["fixed"] = r.fixed;
    j["window_start"] = r.window_start;
    j["added"] = points_to_json(r.added);
    return j;
}

inline RuleApplication rule_from_json(const Json& j) {
    RuleApplication r;
    try {
        r.axis = j.at("axis").get<std::size_t>();
        r.fixed = j.at("fixed").get<std::vector<Coord>>();
        r.window_start = j.at("window_start").get<Coord>();
        for (const auto& s : j.at("added")) r.added.push_back(parse_multidegree(s.get<std::string>()));
    } catch (const Json::exception& e) {
        throw DocumentError(std::string("trace record: ") + e.what());
    }
    return r;
}

/// One JSON object per line.
inline void write_trace_jsonl(std::ostream& os, const std::vector<RuleApplication>& trace) {
    for (const auto& r : trace) os << rule_to_json(r).dump() << '\n';
}

inline std::vector<RuleApplication> read_trace_jsonl(std::istream& is) {
    std::vector<RuleApplication> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw DocumentError(std::string("trace line: ") + e.what());
        }
        out.push_back(rule_from_json(j));
    }
    return out;
}

inline Json box_to_json(const Box& b) {
    Json j;
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    j["k"] = b.k;
    return j;
}

inline Json verdict_to_json(const Verdict& v) {
    Json j;
    j["status"] = to_string(v.status);
    j["bundle_count"] = v.bundle_count;
    j["expected_count"] = v.expected_count;
    j["margin"] = v.margin;
    if (v.closure) {
        j["box"] = box_to_json(v.closure->box());
        j["members"] = v.closure->member_count();
        j["trace_length"] = v.closure->trace().size();
    }
    j["missing_sample"] = points_to_json(v.missing_sample);
    return j;
}

}  // namespace lefkit
