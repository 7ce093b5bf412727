#pragma once

#include "cuesync/evaluate.hpp"
#include "cuesync/measures.hpp"
#include "cuesync/normalize.hpp"
#include "cuesync/regression.hpp"

#include <cstdint>
#include <set>
#include <string>

namespace cuesync {

// The 16 Mandarin finals coded by the CS hand positions.
const std::set<std::string>& default_vowel_labels();

// Vowel -> hand position (1..5).
const PositionMap& default_position_map();

// Pixel anchor per hand position, portrait 720x1280 frame.
const std::map<int, Vec2>& default_position_anchors();

struct RunConfig {
    double gamma = -0.34;
    NormPolicy norm_policy = NormPolicy::PerCuer;
    LviConvention lvi_convention = LviConvention::Backward;
    FitRange fit_f1f2_on = FitRange::RightOfGamma;
    SplitRatio split_ratio{4, 1};
    std::uint64_t seed = 0;
    TrackSampling track_sampling = TrackSampling::NearestFrame;
    std::set<std::string> vowel_labels = default_vowel_labels();
    PositionMap position_map = default_position_map();
};

// Flat key = value text; unknown keys are rejected. Values given on the
// command line override file values.
RunConfig parse_config(std::string_view text, RunConfig base = {});
std::string serialize_config(const RunConfig& config);

// Hash of the serialized config, stamped into every output file.
std::string config_hash(const RunConfig& config);

// "4:1" <-> SplitRatio
SplitRatio split_ratio_from_string(const std::string& text);
std::string split_ratio_to_string(SplitRatio ratio);

const char* lvi_convention_name(LviConvention c);
LviConvention lvi_convention_from_name(const std::string& name);

} // namespace cuesync
