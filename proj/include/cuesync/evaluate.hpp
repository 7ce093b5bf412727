#pragma once

#include "cuesync/measures.hpp"
#include "cuesync/regression.hpp"
#include "cuesync/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace cuesync {

using TrackMap = std::map<SentenceKey, HandTrack>;
using PositionMap = std::map<std::string, int>; // vowel label -> position 1..5

struct SplitRatio {
    int train = 4;
    int test = 1;
};

struct SentenceSplit {
    std::vector<SentenceKey> train;
    std::vector<SentenceKey> test;
};

// Sentence-level split, stratified per cuer, deterministic under seed.
SentenceSplit split_sentences(const MeasureTable& table, SplitRatio ratio, std::uint64_t seed);

// Mean squared error in the normalized scale.
double mse_norm(const std::vector<double>& predictions, const std::vector<double>& truth);

enum class TrackSampling { NearestFrame, Linear };
const char* track_sampling_name(TrackSampling s);
TrackSampling track_sampling_from_name(const std::string& name);

Vec2 sample_hand_point(const HandTrack& track, double instant,
                       TrackSampling sampling = TrackSampling::NearestFrame);

// Mean Euclidean pixel distance between the hand coordinates sampled at
// ground-truth and at predicted instants.
double mhcd(const HandTrack& track, const std::vector<double>& gt_instants,
            const std::vector<double>& pred_instants,
            TrackSampling sampling = TrackSampling::NearestFrame);

struct Polar {
    double r = 0.0;
    double theta = 0.0; // radians in (-pi, pi], up is positive
};

// Lip-centered polar coordinates with the image y axis flipped.
Polar to_polar(Vec2 hand_point, Vec2 lip_center);

struct PolarSample {
    std::string vowel_label;
    int position_class = 0; // 1..5
    double r = 0.0;
    double theta = 0.0;
};

// Nearest-centroid classification over the five hand positions; returns
// the fraction of test samples assigned their true class.
double centroid_position_classifier(const std::vector<PolarSample>& train,
                                    const std::vector<PolarSample>& test);

struct MetricValues {
    double e_hpt = 0.0;
    double d_hpt_px = 0.0;
    double position_accuracy = 0.0;
};

struct EvalReport {
    std::string predictor_id;
    std::string subset; // rows the report was computed on
    double e_hpt = 0.0;
    double d_hpt_px = 0.0;
    double position_accuracy = 0.0;
    std::map<std::string, MetricValues> per_cuer;
};

struct NamedPredictor {
    std::string id;
    HptPredictor predictor;
};

struct EvalOptions {
    PositionMap position_map;
    TrackSampling sampling = TrackSampling::NearestFrame;
};

// Scores every predictor on the test rows, overall and per hearing
// subset. Predictors are expected to have been fitted on train rows.
std::vector<EvalReport> compare_predictors(const MeasureTable& table,
                                           const std::vector<NamedPredictor>& predictors,
                                           const TrackMap& tracks, const SentenceSplit& split,
                                           const EvalOptions& options);

struct PolarRow {
    std::string predictor_id;
    std::string cuer_id;
    PolarSample sample;
};

// Hand positions sampled at predicted instants (or at the annotated hand
// instants when predictor is null), for polar plotting.
std::vector<PolarRow> polar_samples(const MeasureTable& table, const TrackMap& tracks,
                                    const HptPredictor* predictor, const std::string& id,
                                    const EvalOptions& options);

std::string write_report_csv(const std::vector<EvalReport>& reports);
std::string write_polar_csv(const std::vector<PolarRow>& rows);
// Per-subset rows, one column of e_hpt per predictor.
std::string write_mse_matrix_csv(const std::vector<EvalReport>& reports);

} // namespace cuesync
