// Reading and writing protocol documents (.qbc.json).
//
// Parsing is strict: unknown keys are rejected, amplitudes must be [re, im]
// pairs, weights must be a distribution, and every error carries the byte
// offset of the offending token. Serialization is canonical (sorted keys,
// two-space indent, shortest round-trip floats, trailing newline), so
// parse-then-serialize is the identity on canonical documents.
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp> // vendored nlohmann/json

#include "qbc/errors.hpp"
#include "qbc/protocol.hpp"
#include "qbc/qstate.hpp"

namespace qbc {

namespace detail_json {

// One step of a document path: either an object key or an array index.
struct PathStep {
    bool is_index;
    std::string key;
    std::size_t index;

    static PathStep k(std::string key) { return {false, std::move(key), 0}; }
    static PathStep i(std::size_t index) { return {true, {}, index}; }
};

inline void skip_ws(const std::string& s, std::size_t& pos) {
    while (pos < s.size() &&
           (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '\n' || s[pos] == '\r')) {
        ++pos;
    }
}

inline unsigned hex_digit(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    return 0;
}

// Reads a JSON string starting at the opening quote; returns the unescaped
// content and advances past the closing quote. The text is known to be
// well-formed (it already passed a full JSON parse).
inline std::string read_string(const std::string& s, std::size_t& pos) {
    std::string out;
    ++pos; // opening quote
    while (pos < s.size() && s[pos] != '"') {
        char c = s[pos];
        if (c != '\\') {
            out += c;
            ++pos;
            continue;
        }
        ++pos;
        char e = pos < s.size() ? s[pos] : '"';
        ++pos;
        switch (e) {
            case '"': out += '"'; break;
            case '\\': out += '\\'; break;
            case '/': out += '/'; break;
            case 'b': out += '\b'; break;
            case 'f': out += '\f'; break;
            case 'n': out += '\n'; break;
            case 'r': out += '\r'; break;
            case 't': out += '\t'; break;
            case 'u': {
                unsigned cp = 0;
                for (int k = 0; k < 4 && pos < s.size(); ++k, ++pos) {
                    cp = cp * 16 + hex_digit(s[pos]);
                }
                if (cp >= 0xD800 && cp <= 0xDBFF && pos + 5 < s.size() && s[pos] == '\\' &&
                    s[pos + 1] == 'u') {
                    unsigned lo = 0;
                    std::size_t p2 = pos + 2;
                    for (int k = 0; k < 4 && p2 < s.size(); ++k, ++p2) {
                        lo = lo * 16 + hex_digit(s[p2]);
                    }
                    if (lo >= 0xDC00 && lo <= 0xDFFF) {
                        cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
                        pos = p2;
                    }
                }
                if (cp < 0x80) {
                    out += static_cast<char>(cp);
                } else if (cp < 0x800) {
                    out += static_cast<char>(0xC0 | (cp >> 6));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                } else if (cp < 0x10000) {
                    out += static_cast<char>(0xE0 | (cp >> 12));
                    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                } else {
                    out += static_cast<char>(0xF0 | (cp >> 18));
                    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
                    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                }
                break;
            }
            default: out += e; break;
        }
    }
    ++pos; // closing quote
    return out;
}

inline void skip_value(const std::string& s, std::size_t& pos) {
    skip_ws(s, pos);
    if (pos >= s.size()) {
        return;
    }
    char c = s[pos];
    if (c == '"') {
        read_string(s, pos);
        return;
    }
    if (c == '{') {
        ++pos;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == '}') {
            ++pos;
            return;
        }
        while (pos < s.size()) {
            skip_ws(s, pos);
            read_string(s, pos);
            skip_ws(s, pos);
            ++pos; // ':'
            skip_value(s, pos);
            skip_ws(s, pos);
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            ++pos; // '}'
            return;
        }
        return;
    }
    if (c == '[') {
        ++pos;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == ']') {
            ++pos;
            return;
        }
        while (pos < s.size()) {
            skip_value(s, pos);
            skip_ws(s, pos);
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            ++pos; // ']'
            return;
        }
        return;
    }
    if (c == 't' || c == 'n') {
        pos += 4;
        return;
    }
    if (c == 'f') {
        pos += 5;
        return;
    }
    while (pos < s.size()) {
        char d = s[pos];
        if ((d >= '0' && d <= '9') || d == '-' || d == '+' || d == '.' || d == 'e' || d == 'E') {
            ++pos;
        } else {
            break;
        }
    }
}

// Byte offset of the value at `path` in well-formed JSON text. With
// `point_at_key` the offset of the final key token is returned instead.
// Returns 0 when the path cannot be followed.
inline std::size_t json_locate(const std::string& s, const std::vector<PathStep>& path,
                               bool point_at_key = false) {
    std::size_t pos = 0;
    skip_ws(s, pos);
    for (std::size_t depth = 0; depth < path.size(); ++depth) {
        const PathStep& step = path[depth];
        skip_ws(s, pos);
        if (pos >= s.size()) {
            return 0;
        }
        if (!step.is_index) {
            if (s[pos] != '{') {
                return 0;
            }
            ++pos;
            skip_ws(s, pos);
            if (pos < s.size() && s[pos] == '}') {
                return 0;
            }
            bool found = false;
            while (pos < s.size()) {
                skip_ws(s, pos);
                std::size_t key_pos = pos;
                std::string key = read_string(s, pos);
                skip_ws(s, pos);
                ++pos; // ':'
                skip_ws(s, pos);
                if (key == step.key) {
                    if (point_at_key && depth + 1 == path.size()) {
                        return key_pos;
                    }
                    found = true;
                    break;
                }
                skip_value(s, pos);
                skip_ws(s, pos);
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                return 0;
            }
            if (!found) {
                return 0;
            }
        } else {
            if (s[pos] != '[') {
                return 0;
            }
            ++pos;
            for (std::size_t i = 0; i < step.index; ++i) {
                skip_value(s, pos);
                skip_ws(s, pos);
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                } else {
                    return 0;
                }
            }
            skip_ws(s, pos);
        }
    }
    skip_ws(s, pos);
    return pos;
}

} // namespace detail_json

namespace protofile {

using nlohmann::json;

namespace detail {

using detail_json::PathStep;

[[noreturn]] inline void fail(const std::string& text, const std::string& code,
                              const std::string& detail_msg,
                              const std::vector<PathStep>& path, bool at_key = false) {
    throw ParseError(code, detail_msg, detail_json::json_locate(text, path, at_key));
}

inline std::string fmt(double x) { return json(x).dump(); }

inline std::vector<Complex> parse_amplitudes(const std::string& text, const json& node,
                                             std::vector<PathStep> base,
                                             std::size_t expected_len,
                                             const std::string& label,
                                             std::vector<std::string>* warnings) {
    if (!node.is_array()) {
        fail(text, "bad-complex", label + " must be an array of [re, im] pairs", base);
    }
    if (node.size() != expected_len) {
        fail(text, "dim-mismatch",
             label + " has " + std::to_string(node.size()) + " amplitudes, expected " +
                 std::to_string(expected_len),
             base);
    }
    std::vector<Complex> amps;
    amps.reserve(expected_len);
    for (std::size_t i = 0; i < node.size(); ++i) {
        const json& pair = node[i];
        std::vector<PathStep> elem = base;
        elem.push_back(PathStep::i(i));
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            fail(text, "bad-complex", label + " amplitude must be a [re, im] number pair", elem);
        }
        double re = pair[0].get<double>();
        double im = pair[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im)) {
            fail(text, "bad-complex", label + " amplitude must be finite", elem);
        }
        amps.emplace_back(re, im);
    }
    double norm_sq = 0.0;
    for (Complex z : amps) {
        norm_sq += std::norm(z);
    }
    double norm = std::sqrt(norm_sq);
    double dev = std::abs(norm - 1.0);
    if (dev > 1e-6) {
        fail(text, "not-normalized",
             label + " has norm " + fmt(norm) + ", more than 1e-6 away from 1", base);
    }
    if (dev > 1e-12) {
        for (Complex& z : amps) {
            z /= norm;
        }
        if (warnings != nullptr) {
            warnings->push_back("renormalized " + label + " (norm deviation " + fmt(dev) + ")");
        }
    }
    return amps;
}

} // namespace detail

// Parses a protocol document. Throws ParseError on any defect; appends
// renormalization notices to `warnings` when provided.
inline ProtocolSpec parse(const std::string& text, std::vector<std::string>* warnings = nullptr) {
    using detail::fail;
    using detail_json::PathStep;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("syntax-error", e.what(), e.byte);
    } catch (const json::exception& e) {
        throw ParseError("syntax-error", e.what(), 0);
    }
    if (!doc.is_object()) {
        fail(text, "syntax-error", "top-level value must be an object", {});
    }
    static const std::set<std::string> kTopKeys = {"name", "dims", "branches", "metadata"};
    for (const auto& item : doc.items()) {
        if (kTopKeys.find(item.key()) == kTopKeys.end()) {
            fail(text, "syntax-error", "unexpected key '" + item.key() + "'",
                 {PathStep::k(item.key())}, true);
        }
    }
    for (const char* required : {"name", "dims", "branches"}) {
        if (!doc.contains(required)) {
            fail(text, "syntax-error", std::string("missing required key '") + required + "'",
                 {});
        }
    }
    if (!doc["name"].is_string()) {
        fail(text, "syntax-error", "'name' must be a string", {PathStep::k("name")});
    }
    std::string name = doc["name"].get<std::string>();

    const json& dims = doc["dims"];
    if (!dims.is_object()) {
        fail(text, "syntax-error", "'dims' must be an object", {PathStep::k("dims")});
    }
    for (const auto& item : dims.items()) {
        if (item.key() != "a" && item.key() != "b") {
            fail(text, "syntax-error", "unexpected key '" + item.key() + "' in dims",
                 {PathStep::k("dims"), PathStep::k(item.key())}, true);
        }
    }
    for (const char* axis : {"a", "b"}) {
        if (!dims.contains(axis)) {
            fail(text, "syntax-error", std::string("dims is missing '") + axis + "'",
                 {PathStep::k("dims")});
        }
        const json& v = dims[axis];
        if (!v.is_number_integer() || v.get<long long>() < 1) {
            fail(text, "dim-mismatch", std::string("dims.") + axis + " must be a positive integer",
                 {PathStep::k("dims"), PathStep::k(axis)});
        }
    }
    const auto dim_a = dims["a"].get<std::size_t>();
    const auto dim_b = dims["b"].get<std::size_t>();
    if (dim_a > kMaxDim || dim_b > kMaxDim || dim_a * dim_b > kMaxDim) {
        fail(text, "dim-mismatch",
             "dims exceed the total dimension cap of " + std::to_string(kMaxDim),
             {PathStep::k("dims")});
    }
    SystemLayout layout(dim_a, dim_b, 1);

    const json& branches_node = doc["branches"];
    if (!branches_node.is_array() || branches_node.empty()) {
        fail(text, "syntax-error", "'branches' must be a non-empty array",
             {PathStep::k("branches")});
    }
    static const std::set<std::string> kBranchKeys = {"omega", "weight", "psi0", "psi1"};
    std::vector<ProtocolBranch> branches;
    std::vector<double> weights;
    std::set<std::string> seen_labels;
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < branches_node.size(); ++i) {
        const json& br = branches_node[i];
        std::vector<PathStep> base{PathStep::k("branches"), PathStep::i(i)};
        if (!br.is_object()) {
            fail(text, "syntax-error", "branch must be an object", base);
        }
        for (const auto& item : br.items()) {
            if (kBranchKeys.find(item.key()) == kBranchKeys.end()) {
                std::vector<PathStep> p = base;
                p.push_back(PathStep::k(item.key()));
                fail(text, "syntax-error", "unexpected key '" + item.key() + "' in branch", p,
                     true);
            }
        }
        for (const char* required : {"omega", "weight", "psi0", "psi1"}) {
            if (!br.contains(required)) {
                fail(text, "syntax-error",
                     std::string("branch is missing '") + required + "'", base);
            }
        }
        std::vector<PathStep> omega_path = base;
        omega_path.push_back(PathStep::k("omega"));
        if (!br["omega"].is_string()) {
            fail(text, "syntax-error", "branch 'omega' must be a string", omega_path);
        }
        std::string omega = br["omega"].get<std::string>();
        if (!seen_labels.insert(omega).second) {
            fail(text, "duplicate-omega", "duplicate branch label '" + omega + "'", omega_path);
        }
        std::vector<PathStep> weight_path = base;
        weight_path.push_back(PathStep::k("weight"));
        if (!br["weight"].is_number() || br["weight"].is_boolean()) {
            fail(text, "bad-weights", "branch 'weight' must be a number", weight_path);
        }
        double weight = br["weight"].get<double>();
        if (!std::isfinite(weight) || weight <= 0.0 || weight > 1.0) {
            fail(text, "bad-weights", "branch weight must lie in (0, 1]", weight_path);
        }
        weight_sum += weight;

        std::vector<PathStep> psi0_path = base;
        psi0_path.push_back(PathStep::k("psi0"));
        std::vector<PathStep> psi1_path = base;
        psi1_path.push_back(PathStep::k("psi1"));
        std::string label0 = "branches[" + std::to_string(i) + "].psi0";
        std::string label1 = "branches[" + std::to_string(i) + "].psi1";
        std::vector<Complex> amps0 =
            detail::parse_amplitudes(text, br["psi0"], psi0_path, layout.total(), label0,
                                     warnings);
        std::vector<Complex> amps1 =
            detail::parse_amplitudes(text, br["psi1"], psi1_path, layout.total(), label1,
                                     warnings);
        branches.push_back({std::move(omega), StateVector(layout, std::move(amps0)),
                            StateVector(layout, std::move(amps1))});
        weights.push_back(weight);
    }
    if (std::abs(weight_sum - 1.0) > 1e-9) {
        fail(text, "bad-weights",
             "branch weights sum to " + detail::fmt(weight_sum) + ", expected 1",
             {PathStep::k("branches")});
    }

    std::map<std::string, std::string> metadata;
    if (doc.contains("metadata")) {
        const json& meta = doc["metadata"];
        if (!meta.is_object()) {
            fail(text, "syntax-error", "'metadata' must be an object",
                 {PathStep::k("metadata")});
        }
        for (const auto& item : meta.items()) {
            if (!item.value().is_string()) {
                fail(text, "syntax-error", "metadata values must be strings",
                     {PathStep::k("metadata"), PathStep::k(item.key())});
            }
            metadata[item.key()] = item.value().get<std::string>();
        }
    }
    return ProtocolSpec(std::move(name), layout, std::move(branches), std::move(weights),
                        std::move(metadata));
}

// Canonical serialization: sorted keys, two-space indent, trailing newline.
inline std::string serialize(const ProtocolSpec& spec) {
    json doc;
    doc["name"] = spec.name();
    doc["dims"]["a"] = spec.layout().dim_a;
    doc["dims"]["b"] = spec.layout().dim_b;
    json branches = json::array();
    for (std::size_t i = 0; i < spec.branches().size(); ++i) {
        const ProtocolBranch& br = spec.branches()[i];
        json node;
        node["omega"] = br.omega_label;
        node["weight"] = spec.weights()[i];
        for (const char* field : {"psi0", "psi1"}) {
            const StateVector& psi = field == std::string("psi0") ? br.psi0 : br.psi1;
            json amps = json::array();
            for (Complex z : psi.amplitudes()) {
                amps.push_back(json::array({z.real(), z.imag()}));
            }
            node[field] = std::move(amps);
        }
        branches.push_back(std::move(node));
    }
    doc["branches"] = std::move(branches);
    if (!spec.metadata().empty()) {
        doc["metadata"] = spec.metadata();
    }
    return doc.dump(2) + "\n";
}

} // namespace protofile
} // namespace qbc
