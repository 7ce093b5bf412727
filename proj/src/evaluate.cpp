#include "cuesync/evaluate.hpp"

#include "cuesync/error.hpp"
#include "cuesync/rng.hpp"
#include "cuesync/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace cuesync {

const char* track_sampling_name(TrackSampling s) {
    return s == TrackSampling::NearestFrame ? "nearest" : "linear";
}

TrackSampling track_sampling_from_name(const std::string& name) {
    if (name == "nearest") return TrackSampling::NearestFrame;
    if (name == "linear") return TrackSampling::Linear;
    throw Error(ErrorKind::UsageError, "unknown track sampling '" + name + "'");
}

SentenceSplit split_sentences(const MeasureTable& table, SplitRatio ratio, std::uint64_t seed) {
    if (ratio.train <= 0 || ratio.test <= 0) {
        throw Error(ErrorKind::UsageError, "split ratio parts must be positive");
    }
    // cuer -> ordered unique sentence ids
    std::map<std::string, std::vector<std::string>> by_cuer;
    std::map<std::string, std::set<std::string>> seen;
    for (const auto& row : table.rows) {
        if (seen[row.cuer_id].insert(row.sentence_id).second) {
            by_cuer[row.cuer_id].push_back(row.sentence_id);
        }
    }

    const int parts = ratio.train + ratio.test;
    SentenceSplit split;
    std::size_t cuer_index = 0;
    for (auto& [cuer, sentences] : by_cuer) {
        if (sentences.size() < static_cast<std::size_t>(parts)) {
            throw Error(ErrorKind::TooFewSentences,
                        "cuer '" + cuer + "' has " + std::to_string(sentences.size()) +
                            " sentences, need at least " + std::to_string(parts));
        }
        std::sort(sentences.begin(), sentences.end());
        Rng rng(Rng::mix(seed, cuer_index++));
        for (std::size_t i = sentences.size() - 1; i > 0; --i) {
            std::size_t j = rng.uniform_index(i + 1);
            std::swap(sentences[i], sentences[j]);
        }
        const auto n = sentences.size();
        auto n_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(n) * ratio.test / parts));
        n_test = std::clamp<std::size_t>(n_test, 1, n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            (i < n_test ? split.test : split.train).push_back({cuer, sentences[i]});
        }
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

double mse_norm(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.size() != truth.size() || predictions.empty()) {
        throw Error(ErrorKind::LengthMismatch,
                    std::to_string(predictions.size()) + " predictions vs " +
                        std::to_string(truth.size()) + " truth values");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - truth[i];
        ss += d * d;
    }
    return ss / static_cast<double>(predictions.size());
}

Vec2 sample_hand_point(const HandTrack& track, double instant, TrackSampling sampling) {
    const auto& frames = track.frames;
    if (frames.empty() || instant < frames.front().time || instant > frames.back().time) {
        throw Error(ErrorKind::InstantOutOfRange,
                    "instant " + format_double(instant) + " outside track range");
    }
    auto it = std::lower_bound(frames.begin(), frames.end(), instant,
                               [](const TrackFrame& f, double t) { return f.time < t; });
    if (sampling == TrackSampling::Linear) {
        if (it == frames.begin() || it->time == instant) return it->hand_point;
        const TrackFrame& b = *it;
        const TrackFrame& a = *(it - 1);
        const double u = (instant - a.time) / (b.time - a.time);
        return {a.hand_point.x + u * (b.hand_point.x - a.hand_point.x),
                a.hand_point.y + u * (b.hand_point.y - a.hand_point.y)};
    }
    if (it == frames.begin()) return it->hand_point;
    if (it == frames.end()) return (it - 1)->hand_point;
    const TrackFrame& after = *it;
    const TrackFrame& before = *(it - 1);
    // Ties go to the earlier frame.
    return (instant - before.time) <= (after.time - instant) ? before.hand_point
                                                             : after.hand_point;
}

double mhcd(const HandTrack& track, const std::vector<double>& gt_instants,
            const std::vector<double>& pred_instants, TrackSampling sampling) {
    if (gt_instants.size() != pred_instants.size() || gt_instants.empty()) {
        throw Error(ErrorKind::LengthMismatch,
                    std::to_string(gt_instants.size()) + " ground-truth vs " +
                        std::to_string(pred_instants.size()) + " predicted instants");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < gt_instants.size(); ++i) {
        const Vec2 a = sample_hand_point(track, gt_instants[i], sampling);
        const Vec2 b = sample_hand_point(track, pred_instants[i], sampling);
        sum += std::hypot(a.x - b.x, a.y - b.y);
    }
    return sum / static_cast<double>(gt_instants.size());
}

Polar to_polar(Vec2 hand_point, Vec2 lip_center) {
    const double dx = hand_point.x - lip_center.x;
    const double dy = hand_point.y - lip_center.y;
    const double r = std::hypot(dx, dy);
    if (r == 0.0) return {0.0, 0.0};
    return {r, std::atan2(-dy, dx)}; // pixel y grows downward
}

double centroid_position_classifier(const std::vector<PolarSample>& train,
                                    const std::vector<PolarSample>& test) {
    constexpr int kClasses = 5;
    double cx[kClasses] = {};
    double cy[kClasses] = {};
    long counts[kClasses] = {};
    for (const auto& s : train) {
        if (s.position_class < 1 || s.position_class > kClasses) {
            throw Error(ErrorKind::MissingClass,
                        "position class " + std::to_string(s.position_class) + " out of range");
        }
        cx[s.position_class - 1] += s.r * std::cos(s.theta);
        cy[s.position_class - 1] += s.r * std::sin(s.theta);
        ++counts[s.position_class - 1];
    }
    for (int c = 0; c < kClasses; ++c) {
        if (counts[c] == 0) {
            throw Error(ErrorKind::MissingClass,
                        "no training samples for position " + std::to_string(c + 1));
        }
        cx[c] /= static_cast<double>(counts[c]);
        cy[c] /= static_cast<double>(counts[c]);
    }
    if (test.empty()) {
        throw Error(ErrorKind::LengthMismatch, "no test samples");
    }
    long correct = 0;
    for (const auto& s : test) {
        const double x = s.r * std::cos(s.theta);
        const double y = s.r * std::sin(s.theta);
        int best = 1;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int c = 0; c < kClasses; ++c) {
            const double d2 = (x - cx[c]) * (x - cx[c]) + (y - cy[c]) * (y - cy[c]);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = c + 1;
            }
        }
        if (best == s.position_class) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

namespace {

const HandTrack& track_for(const TrackMap& tracks, const SentenceKey& key) {
    auto it = tracks.find(key);
    if (it == tracks.end()) {
        throw Error(ErrorKind::MissingStats,
                    "no track for sentence '" + key.sentence_id + "' of cuer '" + key.cuer_id +
                        "'");
    }
    return it->second;
}

int position_of(const PositionMap& map, const std::string& label) {
    auto it = map.find(label);
    if (it == map.end()) {
        throw Error(ErrorKind::MissingClass, "no hand position for vowel '" + label + "'");
    }
    return it->second;
}

Vec2 lip_center_of(const HandTrack& track) {
    return track.frames.front().lip_center;
}

struct RowScore {
    std::string cuer_id;
    Hearing hearing = Hearing::Normal;
    double sq_err_z = 0.0;
    double dist_px = 0.0;
    bool position_correct = false;
};

} // namespace

std::vector<PolarRow> polar_samples(const MeasureTable& table, const TrackMap& tracks,
                                    const HptPredictor* predictor, const std::string& id,
                                    const EvalOptions& options) {
    std::vector<PolarRow> out;
    for (const auto& row : table.rows) {
        const HandTrack& track = track_for(tracks, {row.cuer_id, row.sentence_id});
        const double instant =
            predictor ? predict_hand_instant(row.t_mid, predict_hpt_seconds(*predictor, row))
                      : row.T_mid;
        const Vec2 hand = sample_hand_point(track, instant, options.sampling);
        const Polar p = to_polar(hand, lip_center_of(track));
        out.push_back(
            {id, row.cuer_id, {row.label, position_of(options.position_map, row.label), p.r, p.theta}});
    }
    return out;
}

std::vector<EvalReport> compare_predictors(const MeasureTable& table,
                                           const std::vector<NamedPredictor>& predictors,
                                           const TrackMap& tracks, const SentenceSplit& split,
                                           const EvalOptions& options) {
    const std::set<SentenceKey> test_keys(split.test.begin(), split.test.end());
    const std::set<SentenceKey> train_keys(split.train.begin(), split.train.end());

    std::vector<const VowelMeasures*> test_rows, train_rows;
    for (const auto& row : table.rows) {
        SentenceKey key{row.cuer_id, row.sentence_id};
        if (test_keys.count(key)) test_rows.push_back(&row);
        if (train_keys.count(key)) train_rows.push_back(&row);
    }
    if (test_rows.empty()) {
        throw Error(ErrorKind::EmptyGroup, "no test rows under the given split");
    }

    // Classifier training set: hand positions at the annotated instants.
    std::vector<PolarSample> train_samples;
    std::vector<Hearing> train_hearing;
    for (const VowelMeasures* row : train_rows) {
        const HandTrack& track = track_for(tracks, {row->cuer_id, row->sentence_id});
        const Vec2 hand = sample_hand_point(track, row->T_mid, options.sampling);
        const Polar p = to_polar(hand, lip_center_of(track));
        train_samples.push_back(
            {row->label, position_of(options.position_map, row->label), p.r, p.theta});
        train_hearing.push_back(row->hearing);
    }

    struct SubsetDef {
        const char* name;
        Subset subset;
    };
    const SubsetDef subsets[] = {
        {"ALL", Subset::All}, {"NORMAL", Subset::Normal}, {"DEAF", Subset::Deaf}};

    std::vector<EvalReport> reports;
    for (const auto& named : predictors) {
        // Score every test row once, then aggregate per subset and cuer.
        std::vector<RowScore> scores;
        std::vector<PolarSample> test_samples;
        scores.reserve(test_rows.size());
        for (const VowelMeasures* row : test_rows) {
            const HandTrack& track = track_for(tracks, {row->cuer_id, row->sentence_id});
            const double z_hat = predict_hpt_norm(named.predictor, *row);
            const double z_err = z_hat - *row->hpt_z;

            const double hpt_hat = predict_hpt_seconds(named.predictor, *row);
            const double pred_instant = predict_hand_instant(row->t_mid, hpt_hat);
            const Vec2 pred_hand = sample_hand_point(track, pred_instant, options.sampling);
            const Vec2 gt_hand = sample_hand_point(track, row->T_mid, options.sampling);

            const Polar p = to_polar(pred_hand, lip_center_of(track));
            test_samples.push_back(
                {row->label, position_of(options.position_map, row->label), p.r, p.theta});

            scores.push_back({row->cuer_id, row->hearing, z_err * z_err,
                              std::hypot(pred_hand.x - gt_hand.x, pred_hand.y - gt_hand.y),
                              false});
        }

        // Classify all test samples against centroids from the matching
        // train subset, then mark correctness per row.
        for (const auto& sub : subsets) {
            std::vector<PolarSample> sub_train;
            for (std::size_t i = 0; i < train_samples.size(); ++i) {
                if (sub.subset == Subset::All ||
                    (sub.subset == Subset::Normal) == (train_hearing[i] == Hearing::Normal)) {
                    sub_train.push_back(train_samples[i]);
                }
            }
            std::vector<std::size_t> idx;
            std::vector<PolarSample> sub_test;
            for (std::size_t i = 0; i < scores.size(); ++i) {
                const bool is_normal = scores[i].hearing == Hearing::Normal;
                if (sub.subset == Subset::All || (sub.subset == Subset::Normal) == is_normal) {
                    idx.push_back(i);
                    sub_test.push_back(test_samples[i]);
                }
            }
            if (sub_test.empty()) continue;

            double acc = centroid_position_classifier(sub_train, sub_test);

            EvalReport report;
            report.predictor_id = named.id;
            report.subset = sub.name;
            report.position_accuracy = acc;

            double se_sum = 0.0, d_sum = 0.0;
            std::map<std::string, std::vector<std::size_t>> cuer_rows;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const RowScore& s = scores[idx[k]];
                se_sum += s.sq_err_z;
                d_sum += s.dist_px;
                cuer_rows[s.cuer_id].push_back(idx[k]);
            }
            report.e_hpt = se_sum / static_cast<double>(idx.size());
            report.d_hpt_px = d_sum / static_cast<double>(idx.size());

            for (auto& [cuer, rows_of_cuer] : cuer_rows) {
                MetricValues mv;
                std::vector<PolarSample> cuer_test;
                for (std::size_t r : rows_of_cuer) {
                    mv.e_hpt += scores[r].sq_err_z;
                    mv.d_hpt_px += scores[r].dist_px;
                    cuer_test.push_back(test_samples[r]);
                }
                mv.e_hpt /= static_cast<double>(rows_of_cuer.size());
                mv.d_hpt_px /= static_cast<double>(rows_of_cuer.size());
                mv.position_accuracy = centroid_position_classifier(sub_train, cuer_test);
                report.per_cuer[cuer] = mv;
            }
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

std::string write_report_csv(const std::vector<EvalReport>& reports) {
    std::ostringstream os;
    os << "predictor,subset,cuer,e_hpt,d_hpt_px,position_accuracy\n";
    for (const auto& r : reports) {
        os << r.predictor_id << ',' << r.subset << ",*," << format_double(r.e_hpt) << ','
           << format_double(r.d_hpt_px) << ',' << format_double(r.position_accuracy) << "\n";
        for (const auto& [cuer, mv] : r.per_cuer) {
            os << r.predictor_id << ',' << r.subset << ',' << cuer << ','
               << format_double(mv.e_hpt) << ',' << format_double(mv.d_hpt_px) << ','
               << format_double(mv.position_accuracy) << "\n";
        }
    }
    return os.str();
}

std::string write_polar_csv(const std::vector<PolarRow>& rows) {
    std::ostringstream os;
    os << "predictor,cuer,vowel,position_class,r_px,theta_rad\n";
    for (const auto& row : rows) {
        os << row.predictor_id << ',' << row.cuer_id << ',' << row.sample.vowel_label << ','
           << row.sample.position_class << ',' << format_double(row.sample.r) << ','
           << format_double(row.sample.theta) << "\n";
    }
    return os.str();
}

std::string write_mse_matrix_csv(const std::vector<EvalReport>& reports) {
    std::vector<std::string> predictors;
    std::vector<std::string> subsets;
    for (const auto& r : reports) {
        if (std::find(predictors.begin(), predictors.end(), r.predictor_id) == predictors.end()) {
            predictors.push_back(r.predictor_id);
        }
        if (std::find(subsets.begin(), subsets.end(), r.subset) == subsets.end()) {
            subsets.push_back(r.subset);
        }
    }
    std::ostringstream os;
    os << "subset";
    for (const auto& p : predictors) os << ',' << p;
    os << "\n";
    for (const auto& s : subsets) {
        os << s;
        for (const auto& p : predictors) {
            os << ',';
            for (const auto& r : reports) {
                if (r.subset == s && r.predictor_id == p) {
                    os << format_double(r.e_hpt);
                    break;
                }
            }
        }
        os << "\n";
    }
    return os.str();
}

} // namespace cuesync
