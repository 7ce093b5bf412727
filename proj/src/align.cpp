#include "cuesync/annot_io.hpp"

#include "cuesync/error.hpp"

namespace cuesync {

namespace {

std::vector<PhoneInterval> keep_vowels(const AnnotationTier& tier,
                                       const std::set<std::string>& vowel_labels,
                                       int* ignored) {
    std::vector<PhoneInterval> out;
    for (const auto& iv : tier.intervals) {
        if (vowel_labels.count(iv.label)) {
            out.push_back(iv);
        } else if (ignored) {
            ++*ignored;
        }
    }
    return out;
}

} // namespace

SentenceTimeline align_tiers(const AnnotationTier& lip, const AnnotationTier& hand,
                             const SentenceMeta& meta,
                             const std::set<std::string>& vowel_labels, AlignCounts* counts) {
    if (lip.stream != Stream::Lip || hand.stream != Stream::Hand) {
        throw Error(ErrorKind::UsageError, "align_tiers expects a lip tier and a hand tier");
    }

    AlignCounts local;
    SentenceTimeline t;
    t.sentence_id = meta.sentence_id;
    t.cuer_id = meta.cuer_id;
    t.hearing = meta.hearing;
    t.lip_vowels = keep_vowels(lip, vowel_labels, &local.lip_ignored);
    t.hand_vowels = keep_vowels(hand, vowel_labels, &local.hand_ignored);
    if (counts) *counts = local;

    if (t.lip_vowels.size() != t.hand_vowels.size() || t.lip_vowels.empty()) {
        throw Error(ErrorKind::CountMismatch,
                    "sentence '" + meta.sentence_id + "': " +
                        std::to_string(t.lip_vowels.size()) + " lip vowels vs " +
                        std::to_string(t.hand_vowels.size()) + " hand vowels");
    }
    for (std::size_t i = 0; i < t.lip_vowels.size(); ++i) {
        if (t.lip_vowels[i].label != t.hand_vowels[i].label) {
            throw Error(ErrorKind::LabelMismatch,
                        "sentence '" + meta.sentence_id + "' index " + std::to_string(i) +
                            ": lip '" + t.lip_vowels[i].label + "' vs hand '" +
                            t.hand_vowels[i].label + "'");
        }
    }
    t.sentence_end = t.lip_vowels.back().end;
    validate_timeline(t);
    return t;
}

} // namespace cuesync
