#include "cuesync/config.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <sstream>

namespace cuesync {

const std::set<std::string>& default_vowel_labels() {
    static const std::set<std::string> labels = {
        "a", "o", "e",  "i",  "u",  "v",   "ai",  "ei",
        "ao", "ou", "an", "en", "ang", "eng", "ong", "er"};
    return labels;
}

const PositionMap& default_position_map() {
    static const PositionMap map = {
        {"a", 1},  {"o", 1},   {"e", 1},   {"er", 1},  {"i", 2},  {"u", 2},
        {"v", 2},  {"ai", 3},  {"ei", 3},  {"ao", 3},  {"ou", 4}, {"an", 4},
        {"en", 4}, {"ang", 5}, {"eng", 5}, {"ong", 5}};
    return map;
}

const std::map<int, Vec2>& default_position_anchors() {
    // Around a lip center of (360, 500): side, chin, throat, cheekbone
    // and below-ear placements.
    static const std::map<int, Vec2> anchors = {
        {1, {560, 500}}, {2, {390, 640}}, {3, {380, 780}}, {4, {500, 400}}, {5, {560, 680}}};
    return anchors;
}

const char* lvi_convention_name(LviConvention c) {
    return c == LviConvention::Backward ? "backward" : "forward";
}

LviConvention lvi_convention_from_name(const std::string& name) {
    if (name == "backward") return LviConvention::Backward;
    if (name == "forward") return LviConvention::Forward;
    throw Error(ErrorKind::UsageError, "unknown lvi convention '" + name + "'");
}

SplitRatio split_ratio_from_string(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw Error(ErrorKind::UsageError, "split ratio must look like 4:1");
    }
    SplitRatio r;
    r.train = static_cast<int>(parse_double(parts[0]));
    r.test = static_cast<int>(parse_double(parts[1]));
    if (r.train <= 0 || r.test <= 0) {
        throw Error(ErrorKind::UsageError, "split ratio parts must be positive integers");
    }
    return r;
}

std::string split_ratio_to_string(SplitRatio ratio) {
    return std::to_string(ratio.train) + ":" + std::to_string(ratio.test);
}

RunConfig parse_config(std::string_view text, RunConfig base) {
    RunConfig cfg = base;
    for (const auto& raw : split(text, '\n')) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::UsageError, "config line without '=': " + line);
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "gamma") {
            cfg.gamma = parse_double(value);
        } else if (key == "norm_policy") {
            cfg.norm_policy = norm_policy_from_name(value);
        } else if (key == "lvi_convention") {
            cfg.lvi_convention = lvi_convention_from_name(value);
        } else if (key == "fit_f1f2_on") {
            cfg.fit_f1f2_on = fit_range_from_name(value);
        } else if (key == "split_ratio") {
            cfg.split_ratio = split_ratio_from_string(value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_double(value));
        } else if (key == "track_sampling") {
            cfg.track_sampling = track_sampling_from_name(value);
        } else if (key == "vowel_labels") {
            cfg.vowel_labels.clear();
            for (const auto& v : split(value, ',')) {
                std::string label = trim(v);
                if (!label.empty()) cfg.vowel_labels.insert(label);
            }
            if (cfg.vowel_labels.empty()) {
                throw Error(ErrorKind::UsageError, "vowel_labels must not be empty");
            }
        } else if (key == "position_map") {
            cfg.position_map.clear();
            for (const auto& pair : split(value, ',')) {
                auto kv = split(trim(pair), ':');
                if (kv.size() != 2) {
                    throw Error(ErrorKind::UsageError, "position_map entries look like a:1");
                }
                int pos = static_cast<int>(parse_double(kv[1]));
                if (pos < 1 || pos > 5) {
                    throw Error(ErrorKind::UsageError, "hand positions are 1..5");
                }
                cfg.position_map[trim(kv[0])] = pos;
            }
        } else {
            throw Error(ErrorKind::UsageError, "unknown config key '" + key + "'");
        }
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "gamma = " << format_double(cfg.gamma) << "\n";
    os << "norm_policy = " << norm_policy_name(cfg.norm_policy) << "\n";
    os << "lvi_convention = " << lvi_convention_name(cfg.lvi_convention) << "\n";
    os << "fit_f1f2_on = " << fit_range_name(cfg.fit_f1f2_on) << "\n";
    os << "split_ratio = " << split_ratio_to_string(cfg.split_ratio) << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "track_sampling = " << track_sampling_name(cfg.track_sampling) << "\n";
    os << "vowel_labels = ";
    bool first = true;
    for (const auto& v : cfg.vowel_labels) {
        if (!first) os << ",";
        os << v;
        first = false;
    }
    os << "\n";
    os << "position_map = ";
    first = true;
    for (const auto& [label, pos] : cfg.position_map) {
        if (!first) os << ",";
        os << label << ":" << pos;
        first = false;
    }
    os << "\n";
    return os.str();
}

std::string config_hash(const RunConfig& cfg) {
    return fnv1a_hex(serialize_config(cfg));
}

} // namespace cuesync
