#include "cuesync/annot_io.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <json.hpp>

#include <sstream>

namespace cuesync {

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    return out;
}

} // namespace

std::string write_canonical(const SentenceTimeline& t) {
    // Hand-rolled so the byte layout is fixed: one object per line, keys
    // in schema order, times in padded fixed notation.
    std::ostringstream os;
    os << "{\"sentence_id\":\"" << json_escape(t.sentence_id) << "\"";
    os << ",\"cuer_id\":\"" << json_escape(t.cuer_id) << "\"";
    os << ",\"hearing\":\"" << hearing_name(t.hearing) << "\"";
    os << ",\"sentence_end_s\":" << format_seconds(t.sentence_end);
    os << ",\"vowels\":[";
    for (std::size_t i = 0; i < t.lip_vowels.size(); ++i) {
        if (i) os << ",";
        os << "{\"label\":\"" << json_escape(t.lip_vowels[i].label) << "\"";
        os << ",\"lip_start_s\":" << format_seconds(t.lip_vowels[i].start);
        os << ",\"lip_end_s\":" << format_seconds(t.lip_vowels[i].end);
        os << ",\"hand_start_s\":" << format_seconds(t.hand_vowels[i].start);
        os << ",\"hand_end_s\":" << format_seconds(t.hand_vowels[i].end);
        os << "}";
    }
    os << "]}";
    return os.str();
}

SentenceTimeline read_canonical(std::string_view line) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaViolation, std::string("canonical JSON: ") + e.what());
    }

    auto require = [&](const nlohmann::json& obj, const char* key) -> const nlohmann::json& {
        auto it = obj.find(key);
        if (it == obj.end()) {
            throw Error(ErrorKind::SchemaViolation,
                        std::string("canonical JSON missing field '") + key + "'");
        }
        return *it;
    };

    SentenceTimeline t;
    try {
        t.sentence_id = require(doc, "sentence_id").get<std::string>();
        t.cuer_id = require(doc, "cuer_id").get<std::string>();
        t.hearing = hearing_from_name(require(doc, "hearing").get<std::string>());
        t.sentence_end = require(doc, "sentence_end_s").get<double>();
        for (const auto& v : require(doc, "vowels")) {
            PhoneInterval lip{require(v, "lip_start_s").get<double>(),
                              require(v, "lip_end_s").get<double>(),
                              require(v, "label").get<std::string>()};
            PhoneInterval hand{require(v, "hand_start_s").get<double>(),
                               require(v, "hand_end_s").get<double>(), lip.label};
            t.lip_vowels.push_back(std::move(lip));
            t.hand_vowels.push_back(std::move(hand));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaViolation, std::string("canonical JSON: ") + e.what());
    }
    validate_timeline(t);
    return t;
}

std::string write_canonical_corpus(const std::vector<SentenceTimeline>& timelines) {
    std::string out;
    for (const auto& t : timelines) {
        out += write_canonical(t);
        out += '\n';
    }
    return out;
}

std::vector<SentenceTimeline> read_canonical_corpus(std::string_view text) {
    std::vector<SentenceTimeline> out;
    for (const auto& line : split(text, '\n')) {
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        out.push_back(read_canonical(t));
    }
    return out;
}

} // namespace cuesync
