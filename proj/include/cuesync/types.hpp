#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cuesync {

enum class Stream { Lip, Hand };
enum class Hearing { Normal, Deaf };

const char* hearing_name(Hearing h);        // "normal" / "deaf"
Hearing hearing_from_name(const std::string& name);

// One annotated phoneme segment, times in seconds.
struct PhoneInterval {
    double start = 0.0;
    double end = 0.0;
    std::string label;
};

struct AnnotationTier {
    std::string tier_name;
    Stream stream = Stream::Lip;
    std::vector<PhoneInterval> intervals; // sorted by start, non-overlapping
};

// One sentence with its lip and hand vowel streams paired index-wise.
struct SentenceTimeline {
    std::string sentence_id;
    std::string cuer_id;
    Hearing hearing = Hearing::Normal;
    std::vector<PhoneInterval> lip_vowels;
    std::vector<PhoneInterval> hand_vowels;
    double sentence_end = 0.0; // end of the last lip vowel

    std::size_t size() const { return lip_vowels.size(); }
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct TrackFrame {
    double time = 0.0;
    Vec2 lip_center;
    Vec2 hand_point;
    std::optional<int> hand_shape; // 1..8, audit only
};

// Per-frame landmark track for one sentence's video.
struct HandTrack {
    double fps = 0.0;
    std::vector<TrackFrame> frames; // times strictly increasing
};

// Identifies one sentence of one cuer across the corpus.
struct SentenceKey {
    std::string cuer_id;
    std::string sentence_id;

    bool operator==(const SentenceKey&) const = default;
    auto operator<=>(const SentenceKey&) const = default;
};

// Throws on invariant violations; returns warnings for soft issues
// (currently: hand intervals extending past the sentence end).
std::vector<std::string> validate_timeline(const SentenceTimeline& timeline);

} // namespace cuesync
