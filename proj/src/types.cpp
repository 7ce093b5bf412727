#include "cuesync/types.hpp"

#include "cuesync/error.hpp"

namespace cuesync {

const char* hearing_name(Hearing h) {
    return h == Hearing::Normal ? "normal" : "deaf";
}

Hearing hearing_from_name(const std::string& name) {
    if (name == "normal") return Hearing::Normal;
    if (name == "deaf") return Hearing::Deaf;
    throw Error(ErrorKind::SchemaViolation, "unknown hearing value '" + name + "'");
}

namespace {

void check_stream(const std::vector<PhoneInterval>& intervals, const char* which) {
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        const auto& iv = intervals[i];
        if (!(iv.start < iv.end)) {
            throw Error(ErrorKind::NonmonotonicIntervals,
                        std::string(which) + " interval " + std::to_string(i) +
                            " has start >= end");
        }
        if (iv.label.empty()) {
            throw Error(ErrorKind::SchemaViolation,
                        std::string(which) + " interval " + std::to_string(i) +
                            " has empty label");
        }
        if (i > 0 && intervals[i - 1].end > iv.start) {
            throw Error(ErrorKind::NonmonotonicIntervals,
                        std::string(which) + " intervals " + std::to_string(i - 1) +
                            " and " + std::to_string(i) + " overlap");
        }
    }
}

} // namespace

std::vector<std::string> validate_timeline(const SentenceTimeline& t) {
    if (t.lip_vowels.empty()) {
        throw Error(ErrorKind::CountMismatch, "timeline '" + t.sentence_id + "' has no vowels");
    }
    if (t.lip_vowels.size() != t.hand_vowels.size()) {
        throw Error(ErrorKind::CountMismatch,
                    "timeline '" + t.sentence_id + "': " + std::to_string(t.lip_vowels.size()) +
                        " lip vowels vs " + std::to_string(t.hand_vowels.size()) + " hand vowels");
    }
    check_stream(t.lip_vowels, "lip");
    check_stream(t.hand_vowels, "hand");
    for (std::size_t i = 0; i < t.lip_vowels.size(); ++i) {
        if (t.lip_vowels[i].label != t.hand_vowels[i].label) {
            throw Error(ErrorKind::LabelMismatch,
                        "timeline '" + t.sentence_id + "' index " + std::to_string(i) + ": lip '" +
                            t.lip_vowels[i].label + "' vs hand '" + t.hand_vowels[i].label + "'");
        }
    }
    if (t.sentence_end < t.lip_vowels.back().end) {
        throw Error(ErrorKind::NonmonotonicIntervals,
                    "timeline '" + t.sentence_id + "': sentence_end precedes last lip vowel end");
    }

    std::vector<std::string> warnings;
    for (const auto& hv : t.hand_vowels) {
        if (hv.end > t.sentence_end) {
            warnings.push_back("hand interval '" + hv.label + "' ends " +
                               std::to_string(hv.end - t.sentence_end) +
                               " s past sentence end in '" + t.sentence_id + "'");
        }
    }
    return warnings;
}

} // namespace cuesync
