#include "cuesync/synth.hpp"

#include "cuesync/error.hpp"
#include "cuesync/rng.hpp"
#include "cuesync/util.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cuesync {

namespace {

constexpr double kLayoutOffset = 1.5;   // seconds before the first lip vowel
constexpr double kMinHandGap = 0.002;   // margin kept between hand intervals
constexpr double kApproachTime = 0.5;   // rest point -> first anchor
constexpr int kSentenceRetries = 100;
constexpr int kDrawRetries = 200;

double quantize_ms(double t) { return std::round(t * 1000.0) / 1000.0; }

void validate_profile(const CuerProfile& p) {
    if (p.cuer_id.empty() || p.sigma_hpt <= 0.0 || p.sigma_lvd <= 0.0 || p.mu_lvd <= 0.0 ||
        p.pause_prob < 0.0 || p.pause_prob > 1.0 || p.residual_sigma < 0.0 ||
        p.syllables.min < 1 || p.syllables.max > 40 || p.syllables.min > p.syllables.max ||
        p.pause_range.first < 0.0 || p.pause_range.second < p.pause_range.first) {
        throw Error(ErrorKind::InvalidProfile, "invalid cuer profile '" + p.cuer_id + "'");
    }
}

struct SentenceDraw {
    SentenceTimeline timeline;
    std::vector<double> delta_model;
    std::vector<double> noise;
    std::vector<double> hand_width; // dwell length per vowel
};

class SentenceGenerator {
public:
    SentenceGenerator(const CuerProfile& profile, const GroundTruthModel& model,
                      const GenOptions& options)
        : profile_(profile), model_(model), options_(options) {
        coupled_ = model.f1.slope != 0.0 && model.f2.slope != 0.0;

        predictor_.variant = Variant::Combined;
        predictor_.gamma = model.gamma;
        predictor_.f0 = PiecewiseLveModel{model.gamma, model.f0_left, model.f0_right};
        predictor_.f1 = model.f1;
        predictor_.f2 = model.f2;
        predictor_.norm_context.policy = NormPolicy::PerCuer;
        predictor_.norm_context.groups = {group()};
    }

    GroupStats group() const {
        return {profile_.cuer_id, profile_.mu_hpt, profile_.sigma_hpt,
                profile_.mu_lvd,  profile_.sigma_lvd, 2};
    }

    SentenceDraw generate(const std::string& sentence_id, Rng& rng) const {
        for (int attempt = 0; attempt < kSentenceRetries; ++attempt) {
            auto draw = try_generate(sentence_id, rng);
            if (draw) return std::move(*draw);
        }
        throw Error(ErrorKind::InvalidProfile,
                    "profile '" + profile_.cuer_id + "' cannot produce a valid sentence");
    }

private:
    const CuerProfile& profile_;
    const GroundTruthModel& model_;
    const GenOptions& options_;
    bool coupled_ = false;
    HptPredictor predictor_;

    double draw_duration(Rng& rng, double* z_out = nullptr) const {
        for (int i = 0; i < kDrawRetries; ++i) {
            const double z = coupled_ ? rng.truncated_normal(0.0, 1.0, -2.8, 2.8) : rng.normal();
            const double beta = profile_.mu_lvd + profile_.sigma_lvd * z;
            if (beta >= options_.min_duration) {
                if (z_out) *z_out = z;
                return beta;
            }
        }
        throw Error(ErrorKind::InvalidProfile,
                    "duration distribution of '" + profile_.cuer_id + "' sits below the floor");
    }

    // Interval implied by a duration draw when both branch lines must
    // agree: f1(log10 alpha) == f2(beta_z).
    double coupled_alpha(double beta_z) const {
        const double alpha_log =
            (model_.f2.slope * beta_z + model_.f2.intercept - model_.f1.intercept) /
            model_.f1.slope;
        return std::pow(10.0, alpha_log);
    }

    std::optional<SentenceDraw> try_generate(const std::string& sentence_id, Rng& rng) const {
        const auto& syl = profile_.syllables;
        int n = static_cast<int>(std::llround(rng.normal(syl.mean, syl.sd)));
        n = std::clamp(n, syl.min, syl.max);

        std::vector<std::string> labels(n);
        for (auto& label : labels) {
            label = options_.vowel_labels[rng.uniform_index(options_.vowel_labels.size())];
        }

        // Durations beta[i] and midpoint spacings s[k] = t_mid(k+1) - t_mid(k).
        std::vector<double> beta(n, 0.0);
        std::vector<double> spacing(std::max(n - 1, 0), 0.0);

        if (!coupled_) {
            for (int i = 0; i < n; ++i) beta[i] = draw_duration(rng);
            for (int k = 0; k + 1 < n; ++k) {
                double gap = rng.uniform(0.25, 0.6);
                if (profile_.pause_prob > 0.0 && rng.bernoulli(profile_.pause_prob)) {
                    gap += rng.uniform(profile_.pause_range.first, profile_.pause_range.second);
                }
                spacing[k] = (beta[k] + beta[k + 1]) / 2.0 + gap;
            }
        } else if (n > 1) {
            // Each measured interval is owned by one syllable; backward
            // owners are rows 1..n-1, forward owners 0..n-2. The spacing
            // between rows i-1 and i is spacing[i-1], which belongs to
            // row i (backward) or row i-1 (forward).
            const bool backward = options_.convention == LviConvention::Backward;
            const int imputed = backward ? 0 : n - 1;
            const int first_owner = backward ? 1 : 0;
            const int last_owner = backward ? n - 1 : n - 2;

            double best_alpha = -1.0;
            double beta_at_best_alpha = 0.0;
            for (int i = first_owner; i <= last_owner; ++i) {
                bool placed = false;
                for (int t = 0; t < kDrawRetries && !placed; ++t) {
                    double z = 0.0;
                    const double b = draw_duration(rng, &z);
                    const double alpha = coupled_alpha(z);
                    if (alpha < 2.0 * options_.min_duration || alpha > 10.0) continue;
                    if (i > first_owner) {
                        const double between = backward ? alpha : spacing[i - 1];
                        if (between < (beta[i - 1] + b) / 2.0 + kMinHandGap) continue;
                    }
                    beta[i] = b;
                    spacing[backward ? i - 1 : i] = alpha;
                    if (alpha > best_alpha) {
                        best_alpha = alpha;
                        beta_at_best_alpha = b;
                    }
                    placed = true;
                }
                if (!placed) return std::nullopt;
            }
            // The syllable without a measured interval is imputed the
            // max interval downstream; give it the duration that couples
            // to that interval so its row sits on both lines too.
            beta[imputed] = beta_at_best_alpha;
            const int edge = backward ? 0 : n - 2;
            if (spacing[edge] < (beta[edge] + beta[edge + 1]) / 2.0 + kMinHandGap) {
                return std::nullopt;
            }
        } else {
            beta[0] = draw_duration(rng);
        }

        // Lip layout.
        std::vector<PhoneInterval> lip(n);
        double t_mid = kLayoutOffset + beta[0] / 2.0;
        for (int i = 0; i < n; ++i) {
            if (i > 0) t_mid += spacing[i - 1];
            double start = t_mid - beta[i] / 2.0;
            double end = t_mid + beta[i] / 2.0;
            if (options_.quantize_ms) {
                start = quantize_ms(start);
                end = quantize_ms(end);
            }
            lip[i] = {start, end, labels[i]};
            if (i > 0 && lip[i - 1].end > lip[i].start) return std::nullopt;
        }
        const double sentence_end = lip.back().end;

        LipMeasures lm = compute_lip_measures(lip, sentence_end, options_.convention);

        // Ground-truth hpt through the model, in the profile's z scale.
        std::vector<double> delta_model(n), noise(n, 0.0), delta_s(n);
        const GroupStats g = group();
        for (int i = 0; i < n; ++i) {
            VowelMeasures row;
            row.cuer_id = profile_.cuer_id;
            row.hearing = profile_.hearing;
            row.lvi = lm.lvi[i];
            row.lvd = lm.lvd[i];
            row.lvi_source = lm.lvi_source[i];
            row.alpha_bar = lm.alpha_bar;
            row.beta_bar = lm.beta_bar;
            row.hpt_z = 0.0;
            row.lvd_z = zscore(lm.lvd[i], g.mu_lvd, g.sigma_lvd);
            row.lve_log = log_scale(lm.lve[i]);
            row.lvi_log = log_scale(lm.lvi[i]);
            delta_model[i] = predict_hpt_norm(predictor_, row);
            if (profile_.residual_sigma > 0.0) {
                noise[i] = rng.normal(0.0, profile_.residual_sigma);
            }
            delta_s[i] = denormalize_hpt(delta_model[i] + noise[i], g);
        }

        // Hand layout: centers at t_mid - hpt, widths drawn like lip
        // durations, shrunk symmetrically where neighbors collide.
        std::vector<double> center(n), half(n), width(n);
        for (int i = 0; i < n; ++i) {
            center[i] = lm.t_mid[i] - delta_s[i];
            width[i] = draw_duration(rng);
            half[i] = width[i] / 2.0;
        }
        for (int i = 1; i < n; ++i) {
            if (center[i] - center[i - 1] < 4.0 * kMinHandGap) return std::nullopt;
        }
        if (center[0] - half[0] < 0.05) return std::nullopt;
        for (int i = 1; i < n; ++i) {
            const double avail = center[i] - center[i - 1] - kMinHandGap;
            const double total = half[i - 1] + half[i];
            if (total > avail) {
                const double scale = avail / total;
                half[i - 1] *= scale;
                half[i] *= scale;
            }
        }
        for (int i = 0; i < n; ++i) {
            if (half[i] < 2.0 * kMinHandGap) return std::nullopt;
        }

        std::vector<PhoneInterval> hand(n);
        for (int i = 0; i < n; ++i) {
            double start = center[i] - half[i];
            double end = center[i] + half[i];
            if (options_.quantize_ms) {
                start = quantize_ms(start);
                end = quantize_ms(end);
            }
            hand[i] = {start, end, labels[i]};
            if (!(start < end)) return std::nullopt;
            if (i > 0 && hand[i - 1].end > hand[i].start) return std::nullopt;
        }

        SentenceDraw draw;
        draw.timeline.sentence_id = sentence_id;
        draw.timeline.cuer_id = profile_.cuer_id;
        draw.timeline.hearing = profile_.hearing;
        draw.timeline.lip_vowels = std::move(lip);
        draw.timeline.hand_vowels = std::move(hand);
        draw.timeline.sentence_end = sentence_end;
        draw.delta_model = std::move(delta_model);
        draw.noise = std::move(noise);
        draw.hand_width.resize(n);
        for (int i = 0; i < n; ++i) {
            draw.hand_width[i] =
                draw.timeline.hand_vowels[i].end - draw.timeline.hand_vowels[i].start;
        }
        validate_timeline(draw.timeline);
        return draw;
    }
};

HandTrack make_track(const SentenceDraw& draw, const GenOptions& options) {
    const auto& hand_vowels = draw.timeline.hand_vowels;
    const int n = static_cast<int>(hand_vowels.size());

    std::vector<double> arrive(n), leave(n);
    std::vector<Vec2> anchor(n);
    for (int i = 0; i < n; ++i) {
        arrive[i] = midpoint(hand_vowels[i]);
        auto pos = options.position_map.find(hand_vowels[i].label);
        auto it = pos == options.position_map.end() ? options.anchors.end()
                                                    : options.anchors.find(pos->second);
        if (it == options.anchors.end()) {
            throw Error(ErrorKind::MissingClass,
                        "no anchor for vowel '" + hand_vowels[i].label + "'");
        }
        anchor[i] = it->second;
    }
    for (int i = 0; i < n; ++i) {
        double dwell_end = arrive[i] + draw.hand_width[i];
        if (i + 1 < n) {
            // Keep part of the gap for transit so motion stays finite.
            const double gap = arrive[i + 1] - arrive[i];
            dwell_end = std::min(dwell_end, arrive[i + 1] - std::max(0.05, 0.25 * gap));
            dwell_end = std::max(dwell_end, arrive[i]);
        }
        leave[i] = dwell_end;
    }

    const double approach_start = std::max(0.0, arrive[0] - kApproachTime);
    auto position_at = [&](double t) -> Vec2 {
        if (t <= approach_start) return options.rest_point;
        if (t < arrive[0]) {
            const double u = (t - approach_start) / (arrive[0] - approach_start);
            return {options.rest_point.x + u * (anchor[0].x - options.rest_point.x),
                    options.rest_point.y + u * (anchor[0].y - options.rest_point.y)};
        }
        for (int i = 0; i < n; ++i) {
            if (t <= leave[i]) return anchor[i];
            if (i + 1 < n && t < arrive[i + 1]) {
                const double u = (t - leave[i]) / (arrive[i + 1] - leave[i]);
                return {anchor[i].x + u * (anchor[i + 1].x - anchor[i].x),
                        anchor[i].y + u * (anchor[i + 1].y - anchor[i].y)};
            }
        }
        return anchor[n - 1];
    };

    const double track_end =
        std::max(draw.timeline.sentence_end, hand_vowels.back().end) + 1.0;
    const auto frame_count = static_cast<std::size_t>(std::ceil(track_end * options.fps)) + 1;

    HandTrack track;
    track.fps = options.fps;
    track.frames.reserve(frame_count);
    for (std::size_t k = 0; k < frame_count; ++k) {
        const double t = static_cast<double>(k) / options.fps;
        track.frames.push_back({t, options.lip_center, position_at(t), std::nullopt});
    }
    return track;
}

} // namespace

SynthCorpus gen_corpus(const std::vector<CuerProfile>& profiles, const GroundTruthModel& model,
                       int sentences_per_cuer, std::uint64_t seed, const GenOptions& options) {
    if (sentences_per_cuer < 1) {
        throw Error(ErrorKind::InvalidProfile, "need at least one sentence per cuer");
    }
    if (profiles.empty()) {
        throw Error(ErrorKind::InvalidProfile, "no cuer profiles given");
    }

    GenOptions opts = options;
    if (opts.vowel_labels.empty()) {
        opts.vowel_labels.assign(default_vowel_labels().begin(), default_vowel_labels().end());
    }
    if (opts.position_map.empty()) opts.position_map = default_position_map();
    if (opts.anchors.empty()) opts.anchors = default_position_anchors();

    SynthCorpus corpus;
    std::vector<SentenceTimeline> timelines;
    for (std::size_t c = 0; c < profiles.size(); ++c) {
        validate_profile(profiles[c]);
        SentenceGenerator gen(profiles[c], model, opts);
        for (int s = 0; s < sentences_per_cuer; ++s) {
            char id[16];
            std::snprintf(id, sizeof(id), "s%05d", s);
            Rng rng(Rng::mix(Rng::mix(seed, c), static_cast<std::uint64_t>(s)));
            SentenceDraw draw = gen.generate(id, rng);
            if (opts.with_tracks) {
                corpus.tracks[{draw.timeline.cuer_id, draw.timeline.sentence_id}] =
                    make_track(draw, opts);
            }
            // compute_measures on the emitted timeline is the stored
            // truth, so generator and analyzer agree exactly.
            auto rows = compute_measures(draw.timeline, opts.convention);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                corpus.truth.rows.push_back(rows[i]);
                corpus.delta_prime_model.push_back(draw.delta_model[i]);
                corpus.noise_z.push_back(draw.noise[i]);
            }
            timelines.push_back(std::move(draw.timeline));
        }
    }
    corpus.timelines = std::move(timelines);
    return corpus;
}

std::string write_truth_csv(const SynthCorpus& corpus) {
    std::ostringstream os;
    os << "cuer_id,hearing,sentence_id,index,label,t_mid_s,T_mid_s,hpt_s,lve_s,lvi_s,lvd_s,"
          "lvi_source,alpha_bar_s,beta_bar_s,delta_prime_model_z,noise_z\n";
    for (std::size_t i = 0; i < corpus.truth.rows.size(); ++i) {
        const auto& r = corpus.truth.rows[i];
        os << r.cuer_id << ',' << hearing_name(r.hearing) << ',' << r.sentence_id << ','
           << r.index << ',' << r.label << ',' << format_double(r.t_mid) << ','
           << format_double(r.T_mid) << ',' << format_double(r.hpt) << ','
           << format_double(r.lve) << ',' << format_double(r.lvi) << ','
           << format_double(r.lvd) << ',' << lvi_source_name(r.lvi_source) << ','
           << format_double(r.alpha_bar) << ',' << format_double(r.beta_bar) << ','
           << format_double(corpus.delta_prime_model[i]) << ','
           << format_double(corpus.noise_z[i]) << "\n";
    }
    return os.str();
}

SynthSpec parse_synth_spec(std::string_view text) {
    SynthSpec spec;
    auto coeffs = [](const std::string& value, const std::string& key) -> LinearModel {
        std::istringstream is(value);
        double slope, intercept;
        if (!(is >> slope >> intercept)) {
            throw Error(ErrorKind::UsageError, "model line '" + key + "' needs slope intercept");
        }
        return {slope, intercept};
    };
    for (const auto& raw : split(text, '\n')) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::UsageError, "synth spec line without '=': " + line);
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "gamma") {
            spec.model.gamma = parse_double(value);
        } else if (key == "f0_left") {
            spec.model.f0_left = coeffs(value, key);
        } else if (key == "f0_right") {
            spec.model.f0_right = coeffs(value, key);
        } else if (key == "f1") {
            spec.model.f1 = coeffs(value, key);
        } else if (key == "f2") {
            spec.model.f2 = coeffs(value, key);
        } else if (key == "profile") {
            std::istringstream is(value);
            std::string cuer, hearing;
            double mu_hpt, sigma_hpt, mu_lvd, sigma_lvd, pause_prob, pause_min, pause_max;
            double syl_mean;
            int syl_min, syl_max;
            double residual;
            if (!(is >> cuer >> hearing >> mu_hpt >> sigma_hpt >> mu_lvd >> sigma_lvd >>
                  pause_prob >> pause_min >> pause_max >> syl_mean >> syl_min >> syl_max >>
                  residual)) {
                throw Error(ErrorKind::UsageError,
                            "profile line needs: id hearing mu_hpt_ms sigma_hpt_ms mu_lvd_ms "
                            "sigma_lvd_ms pause_prob pause_min_ms pause_max_ms syl_mean "
                            "syl_min syl_max residual_sigma");
            }
            CuerProfile p;
            p.cuer_id = cuer;
            p.hearing = hearing_from_name(hearing);
            p.mu_hpt = mu_hpt / 1000.0;
            p.sigma_hpt = sigma_hpt / 1000.0;
            p.mu_lvd = mu_lvd / 1000.0;
            p.sigma_lvd = sigma_lvd / 1000.0;
            p.pause_prob = pause_prob;
            p.pause_range = {pause_min / 1000.0, pause_max / 1000.0};
            p.syllables.mean = syl_mean;
            p.syllables.min = syl_min;
            p.syllables.max = syl_max;
            double syl_sd;
            if (is >> syl_sd) p.syllables.sd = syl_sd;
            p.residual_sigma = residual;
            spec.profiles.push_back(std::move(p));
        } else {
            throw Error(ErrorKind::UsageError, "unknown synth spec key '" + key + "'");
        }
    }
    if (spec.profiles.empty()) {
        throw Error(ErrorKind::UsageError, "synth spec contains no profiles");
    }
    return spec;
}

} // namespace cuesync
