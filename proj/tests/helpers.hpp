#pragma once

#include "cuesync/rng.hpp"
#include "cuesync/types.hpp"

#include <string>
#include <vector>

namespace cuesync::testing {

// A valid random timeline: ordered lip vowels with gaps, hand intervals
// leading the lip by a few hundred milliseconds.
inline SentenceTimeline random_timeline(Rng& rng, const std::string& sentence_id,
                                        const std::string& cuer_id = "C1",
                                        Hearing hearing = Hearing::Normal) {
    static const std::vector<std::string> labels = {"a",  "i",  "u",  "e",
                                                    "ai", "ou", "an", "ang"};
    SentenceTimeline t;
    t.sentence_id = sentence_id;
    t.cuer_id = cuer_id;
    t.hearing = hearing;
    const int n = 2 + static_cast<int>(rng.uniform_index(8));
    double cursor = 1.0;
    for (int i = 0; i < n; ++i) {
        const double dur = rng.uniform(0.1, 0.5);
        const std::string label = labels[rng.uniform_index(labels.size())];
        t.lip_vowels.push_back({cursor, cursor + dur, label});
        const double hpt = rng.uniform(-0.05, 0.4);
        const double hand_dur = rng.uniform(0.1, 0.4);
        const double hand_mid = cursor + dur / 2.0 - hpt;
        t.hand_vowels.push_back({hand_mid - hand_dur / 2.0, hand_mid + hand_dur / 2.0, label});
        cursor += dur + rng.uniform(0.3, 0.8);
    }
    // Hand intervals must not overlap; rebuild any that collide.
    for (std::size_t i = 1; i < t.hand_vowels.size(); ++i) {
        if (t.hand_vowels[i - 1].end > t.hand_vowels[i].start) {
            t.hand_vowels[i].start = t.hand_vowels[i - 1].end + 0.001;
            if (t.hand_vowels[i].end <= t.hand_vowels[i].start) {
                t.hand_vowels[i].end = t.hand_vowels[i].start + 0.05;
            }
        }
    }
    t.sentence_end = t.lip_vowels.back().end;
    return t;
}

} // namespace cuesync::testing
