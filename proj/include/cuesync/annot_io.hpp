#pragma once

#include "cuesync/types.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cuesync {

// Long-format Praat TextGrid. One AnnotationTier per IntervalTier;
// empty-text intervals (silences) are dropped. Tiers are tagged as the
// lip stream: Praat carries the acoustic annotations in this corpus.
std::vector<AnnotationTier> parse_textgrid(std::string_view text);

// ELAN EAF with TIME_ORDER slots in milliseconds and alignable
// annotations. Tagged as the hand stream.
std::vector<AnnotationTier> parse_eaf(std::string_view xml);

struct SentenceMeta {
    std::string sentence_id;
    std::string cuer_id;
    Hearing hearing = Hearing::Normal;
};

struct AlignCounts {
    int lip_ignored = 0;  // intervals whose label is outside the vowel set
    int hand_ignored = 0;
};

// Pairs the vowel intervals of the two streams index-wise. Count or
// label disagreements are annotation defects and raise, never repair.
SentenceTimeline align_tiers(const AnnotationTier& lip, const AnnotationTier& hand,
                             const SentenceMeta& meta,
                             const std::set<std::string>& vowel_labels,
                             AlignCounts* counts = nullptr);

// Landmark CSV: header time_s,lip_x,lip_y,hand_x,hand_y[,shape].
// fps is inferred from the median inter-frame gap.
HandTrack read_landmarks(std::string_view csv);
std::string write_landmarks(const HandTrack& track);

// Canonical sentence JSON, one object per line. Writing then reading
// returns the identical timeline, bit for bit.
std::string write_canonical(const SentenceTimeline& timeline);
SentenceTimeline read_canonical(std::string_view line);

// Multi-sentence files; lines starting with '#' are provenance comments.
std::string write_canonical_corpus(const std::vector<SentenceTimeline>& timelines);
std::vector<SentenceTimeline> read_canonical_corpus(std::string_view text);

// TextGrid / EAF renderings of a timeline (two tiers: vowels-lip on the
// TextGrid side, vowels-hand on the EAF side). Times must sit on the
// millisecond grid for EAF, whose slots are integer milliseconds.
std::string render_textgrid(const SentenceTimeline& timeline);
std::string render_eaf(const SentenceTimeline& timeline);

} // namespace cuesync
