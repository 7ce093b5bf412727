#pragma once

#include "cuesync/config.hpp"
#include "cuesync/evaluate.hpp"
#include "cuesync/measures.hpp"
#include "cuesync/regression.hpp"
#include "cuesync/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cuesync {

struct SyllableCountSpec {
    double mean = 10.6;
    double sd = 4.5;
    int min = 4;
    int max = 27;
};

struct CuerProfile {
    std::string cuer_id;
    Hearing hearing = Hearing::Normal;
    double mu_hpt = 0.242; // seconds
    double sigma_hpt = 0.177;
    double mu_lvd = 0.338;
    double sigma_lvd = 0.079;
    double pause_prob = 0.1;
    std::pair<double, double> pause_range = {0.15, 0.6};
    SyllableCountSpec syllables;
    double residual_sigma = 0.3; // z-scale noise added to the model output
};

// Coefficients used generatively. With nonzero f1/f2 slopes the
// generator couples each syllable's interval to its duration so that
// both regression branches agree row-wise, which makes every
// coefficient identifiable from the emitted corpus. A zero f1 slope
// selects the uncoupled layout: free inter-syllable gaps, optional
// pauses, and hpt driven by f0/noise alone.
struct GroundTruthModel {
    double gamma = -0.34;
    LinearModel f0_left{3.5, 1.2};
    LinearModel f0_right{0.15, 0.05};
    LinearModel f1{6.0, 1.2};
    LinearModel f2{0.55, 0.02};

    // hpt_z = noise only; draws hpt ~ Normal(mu, sigma * residual_sigma).
    static GroundTruthModel pure_noise() {
        GroundTruthModel m;
        m.f0_left = m.f0_right = m.f1 = m.f2 = LinearModel{0.0, 0.0};
        return m;
    }
};

struct GenOptions {
    bool quantize_ms = true; // snap annotation bounds to the millisecond grid
    bool with_tracks = true;
    double fps = 30.0;
    double min_duration = 0.05;
    LviConvention convention = LviConvention::Backward;
    std::vector<std::string> vowel_labels;   // defaults to the CS finals
    PositionMap position_map;                // defaults to the CS layout
    std::map<int, Vec2> anchors;             // defaults to the CS layout
    Vec2 lip_center{360, 500};
    Vec2 rest_point{300, 900};
};

struct SynthCorpus {
    std::vector<SentenceTimeline> timelines;
    TrackMap tracks;
    // Measures recomputed from the emitted timelines, so generator truth
    // and analyzer output are equal by construction.
    MeasureTable truth;
    // Per truth row: the model's pre-noise z-scale hpt and the noise draw.
    std::vector<double> delta_prime_model;
    std::vector<double> noise_z;
};

SynthCorpus gen_corpus(const std::vector<CuerProfile>& profiles, const GroundTruthModel& model,
                       int sentences_per_cuer, std::uint64_t seed, const GenOptions& options = {});

// Truth CSV: the measure table schema plus the generated z-scale values.
std::string write_truth_csv(const SynthCorpus& corpus);

// Profiles + model from a flat key = value document ("profile = ..." per
// cuer, coefficient lines for the model).
struct SynthSpec {
    std::vector<CuerProfile> profiles;
    GroundTruthModel model;
};
SynthSpec parse_synth_spec(std::string_view text);

} // namespace cuesync
