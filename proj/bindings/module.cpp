#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cuesync/annot_io.hpp"
#include "cuesync/config.hpp"
#include "cuesync/error.hpp"
#include "cuesync/evaluate.hpp"
#include "cuesync/measures.hpp"
#include "cuesync/normalize.hpp"
#include "cuesync/regression.hpp"
#include "cuesync/synth.hpp"

namespace py = pybind11;
using namespace cuesync;

PYBIND11_MODULE(_cuesync, m) {
    m.doc() = "Lip-hand timing analysis for Cued Speech annotation data";

    py::register_exception<Error>(m, "CuesyncError");

    py::enum_<Stream>(m, "Stream").value("Lip", Stream::Lip).value("Hand", Stream::Hand);
    py::enum_<Hearing>(m, "Hearing")
        .value("Normal", Hearing::Normal)
        .value("Deaf", Hearing::Deaf);
    py::enum_<LviSource>(m, "LviSource")
        .value("Measured", LviSource::Measured)
        .value("ImputedMax", LviSource::ImputedMax)
        .value("ImputedSingleton", LviSource::ImputedSingleton);
    py::enum_<LviConvention>(m, "LviConvention")
        .value("Backward", LviConvention::Backward)
        .value("Forward", LviConvention::Forward);
    py::enum_<Grouping>(m, "Grouping")
        .value("PerCuer", Grouping::PerCuer)
        .value("NormalVsDeaf", Grouping::NormalVsDeaf)
        .value("All", Grouping::All);
    py::enum_<NormPolicy>(m, "NormPolicy")
        .value("PerCuer", NormPolicy::PerCuer)
        .value("PerGroup", NormPolicy::PerGroup)
        .value("Global", NormPolicy::Global);
    py::enum_<Variant>(m, "Variant")
        .value("AudioBased", Variant::AudioBased)
        .value("MeanBased", Variant::MeanBased)
        .value("LveOnly", Variant::LveOnly)
        .value("Combined", Variant::Combined);
    py::enum_<Subset>(m, "Subset")
        .value("All", Subset::All)
        .value("Normal", Subset::Normal)
        .value("Deaf", Subset::Deaf);
    py::enum_<FitRange>(m, "FitRange")
        .value("RightOfGamma", FitRange::RightOfGamma)
        .value("AllRows", FitRange::AllRows);
    py::enum_<TrackSampling>(m, "TrackSampling")
        .value("NearestFrame", TrackSampling::NearestFrame)
        .value("Linear", TrackSampling::Linear);

    py::class_<PhoneInterval>(m, "PhoneInterval")
        .def(py::init<double, double, std::string>(), py::arg("start"), py::arg("end"),
             py::arg("label"))
        .def_readwrite("start", &PhoneInterval::start)
        .def_readwrite("end", &PhoneInterval::end)
        .def_readwrite("label", &PhoneInterval::label)
        .def("__repr__", [](const PhoneInterval& p) {
            return "PhoneInterval(" + std::to_string(p.start) + ", " + std::to_string(p.end) +
                   ", '" + p.label + "')";
        });

    py::class_<AnnotationTier>(m, "AnnotationTier")
        .def(py::init<>())
        .def_readwrite("tier_name", &AnnotationTier::tier_name)
        .def_readwrite("stream", &AnnotationTier::stream)
        .def_readwrite("intervals", &AnnotationTier::intervals);

    py::class_<SentenceTimeline>(m, "SentenceTimeline")
        .def(py::init<>())
        .def_readwrite("sentence_id", &SentenceTimeline::sentence_id)
        .def_readwrite("cuer_id", &SentenceTimeline::cuer_id)
        .def_readwrite("hearing", &SentenceTimeline::hearing)
        .def_readwrite("lip_vowels", &SentenceTimeline::lip_vowels)
        .def_readwrite("hand_vowels", &SentenceTimeline::hand_vowels)
        .def_readwrite("sentence_end", &SentenceTimeline::sentence_end)
        .def("__len__", &SentenceTimeline::size);

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>(), py::arg("x") = 0.0, py::arg("y") = 0.0)
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y);

    py::class_<TrackFrame>(m, "TrackFrame")
        .def(py::init<>())
        .def_readwrite("time", &TrackFrame::time)
        .def_readwrite("lip_center", &TrackFrame::lip_center)
        .def_readwrite("hand_point", &TrackFrame::hand_point)
        .def_readwrite("hand_shape", &TrackFrame::hand_shape);

    py::class_<HandTrack>(m, "HandTrack")
        .def(py::init<>())
        .def_readwrite("fps", &HandTrack::fps)
        .def_readwrite("frames", &HandTrack::frames);

    py::class_<SentenceMeta>(m, "SentenceMeta")
        .def(py::init<>())
        .def_readwrite("sentence_id", &SentenceMeta::sentence_id)
        .def_readwrite("cuer_id", &SentenceMeta::cuer_id)
        .def_readwrite("hearing", &SentenceMeta::hearing);

    py::class_<VowelMeasures>(m, "VowelMeasures")
        .def(py::init<>())
        .def_readwrite("sentence_id", &VowelMeasures::sentence_id)
        .def_readwrite("cuer_id", &VowelMeasures::cuer_id)
        .def_readwrite("hearing", &VowelMeasures::hearing)
        .def_readwrite("index", &VowelMeasures::index)
        .def_readwrite("label", &VowelMeasures::label)
        .def_readwrite("t_mid", &VowelMeasures::t_mid)
        .def_readwrite("T_mid", &VowelMeasures::T_mid)
        .def_readwrite("hpt", &VowelMeasures::hpt)
        .def_readwrite("lve", &VowelMeasures::lve)
        .def_readwrite("lvi", &VowelMeasures::lvi)
        .def_readwrite("lvd", &VowelMeasures::lvd)
        .def_readwrite("lvi_source", &VowelMeasures::lvi_source)
        .def_readwrite("alpha_bar", &VowelMeasures::alpha_bar)
        .def_readwrite("beta_bar", &VowelMeasures::beta_bar)
        .def_readwrite("hpt_z", &VowelMeasures::hpt_z)
        .def_readwrite("lvd_z", &VowelMeasures::lvd_z)
        .def_readwrite("lve_log", &VowelMeasures::lve_log)
        .def_readwrite("lvi_log", &VowelMeasures::lvi_log);

    py::class_<MeasureTable>(m, "MeasureTable")
        .def(py::init<>())
        .def_readwrite("rows", &MeasureTable::rows)
        .def("normalized", &MeasureTable::normalized)
        .def("__len__", [](const MeasureTable& t) { return t.rows.size(); });

    py::class_<GroupStats>(m, "GroupStats")
        .def(py::init<>())
        .def_readwrite("group_key", &GroupStats::group_key)
        .def_readwrite("mu_hpt", &GroupStats::mu_hpt)
        .def_readwrite("sigma_hpt", &GroupStats::sigma_hpt)
        .def_readwrite("mu_lvd", &GroupStats::mu_lvd)
        .def_readwrite("sigma_lvd", &GroupStats::sigma_lvd)
        .def_readwrite("count", &GroupStats::count);

    py::class_<NormContext>(m, "NormContext")
        .def(py::init<>())
        .def_readwrite("policy", &NormContext::policy)
        .def_readwrite("groups", &NormContext::groups);

    py::class_<LinearModel>(m, "LinearModel")
        .def(py::init<double, double, long, double>(), py::arg("slope") = 0.0,
             py::arg("intercept") = 0.0, py::arg("n") = 0, py::arg("residual_mse") = 0.0)
        .def_readwrite("slope", &LinearModel::slope)
        .def_readwrite("intercept", &LinearModel::intercept)
        .def_readwrite("n", &LinearModel::n)
        .def_readwrite("residual_mse", &LinearModel::residual_mse)
        .def("__call__", &LinearModel::operator());

    py::class_<PiecewiseLveModel>(m, "PiecewiseLveModel")
        .def(py::init<>())
        .def_readwrite("gamma", &PiecewiseLveModel::gamma)
        .def_readwrite("left", &PiecewiseLveModel::left)
        .def_readwrite("right", &PiecewiseLveModel::right);

    py::class_<Point>(m, "Point")
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Point::x)
        .def_readwrite("y", &Point::y);

    py::class_<HptPredictor>(m, "HptPredictor")
        .def(py::init<>())
        .def_readwrite("variant", &HptPredictor::variant)
        .def_readwrite("fit_subset", &HptPredictor::fit_subset)
        .def_readwrite("gamma", &HptPredictor::gamma)
        .def_readwrite("f0", &HptPredictor::f0)
        .def_readwrite("f1", &HptPredictor::f1)
        .def_readwrite("f2", &HptPredictor::f2)
        .def_readwrite("norm_context", &HptPredictor::norm_context);

    py::class_<SentenceKey>(m, "SentenceKey")
        .def(py::init<std::string, std::string>(), py::arg("cuer_id"), py::arg("sentence_id"))
        .def_readwrite("cuer_id", &SentenceKey::cuer_id)
        .def_readwrite("sentence_id", &SentenceKey::sentence_id);

    py::class_<SplitRatio>(m, "SplitRatio")
        .def(py::init<int, int>(), py::arg("train") = 4, py::arg("test") = 1)
        .def_readwrite("train", &SplitRatio::train)
        .def_readwrite("test", &SplitRatio::test);

    py::class_<SentenceSplit>(m, "SentenceSplit")
        .def(py::init<>())
        .def_readwrite("train", &SentenceSplit::train)
        .def_readwrite("test", &SentenceSplit::test);

    py::class_<Polar>(m, "Polar")
        .def_readonly("r", &Polar::r)
        .def_readonly("theta", &Polar::theta);

    py::class_<PolarSample>(m, "PolarSample")
        .def(py::init<std::string, int, double, double>(), py::arg("vowel_label"),
             py::arg("position_class"), py::arg("r"), py::arg("theta"))
        .def_readwrite("vowel_label", &PolarSample::vowel_label)
        .def_readwrite("position_class", &PolarSample::position_class)
        .def_readwrite("r", &PolarSample::r)
        .def_readwrite("theta", &PolarSample::theta);

    py::class_<MetricValues>(m, "MetricValues")
        .def_readonly("e_hpt", &MetricValues::e_hpt)
        .def_readonly("d_hpt_px", &MetricValues::d_hpt_px)
        .def_readonly("position_accuracy", &MetricValues::position_accuracy);

    py::class_<EvalReport>(m, "EvalReport")
        .def_readonly("predictor_id", &EvalReport::predictor_id)
        .def_readonly("subset", &EvalReport::subset)
        .def_readonly("e_hpt", &EvalReport::e_hpt)
        .def_readonly("d_hpt_px", &EvalReport::d_hpt_px)
        .def_readonly("position_accuracy", &EvalReport::position_accuracy)
        .def_readonly("per_cuer", &EvalReport::per_cuer);

    py::class_<NamedPredictor>(m, "NamedPredictor")
        .def(py::init<std::string, HptPredictor>(), py::arg("id"), py::arg("predictor"))
        .def_readwrite("id", &NamedPredictor::id)
        .def_readwrite("predictor", &NamedPredictor::predictor);

    py::class_<EvalOptions>(m, "EvalOptions")
        .def(py::init<>())
        .def_readwrite("position_map", &EvalOptions::position_map)
        .def_readwrite("sampling", &EvalOptions::sampling);

    py::class_<SyllableCountSpec>(m, "SyllableCountSpec")
        .def(py::init<>())
        .def_readwrite("mean", &SyllableCountSpec::mean)
        .def_readwrite("sd", &SyllableCountSpec::sd)
        .def_readwrite("min", &SyllableCountSpec::min)
        .def_readwrite("max", &SyllableCountSpec::max);

    py::class_<CuerProfile>(m, "CuerProfile")
        .def(py::init<>())
        .def_readwrite("cuer_id", &CuerProfile::cuer_id)
        .def_readwrite("hearing", &CuerProfile::hearing)
        .def_readwrite("mu_hpt", &CuerProfile::mu_hpt)
        .def_readwrite("sigma_hpt", &CuerProfile::sigma_hpt)
        .def_readwrite("mu_lvd", &CuerProfile::mu_lvd)
        .def_readwrite("sigma_lvd", &CuerProfile::sigma_lvd)
        .def_readwrite("pause_prob", &CuerProfile::pause_prob)
        .def_readwrite("pause_range", &CuerProfile::pause_range)
        .def_readwrite("syllables", &CuerProfile::syllables)
        .def_readwrite("residual_sigma", &CuerProfile::residual_sigma);

    py::class_<GroundTruthModel>(m, "GroundTruthModel")
        .def(py::init<>())
        .def_static("pure_noise", &GroundTruthModel::pure_noise)
        .def_readwrite("gamma", &GroundTruthModel::gamma)
        .def_readwrite("f0_left", &GroundTruthModel::f0_left)
        .def_readwrite("f0_right", &GroundTruthModel::f0_right)
        .def_readwrite("f1", &GroundTruthModel::f1)
        .def_readwrite("f2", &GroundTruthModel::f2);

    py::class_<GenOptions>(m, "GenOptions")
        .def(py::init<>())
        .def_readwrite("quantize_ms", &GenOptions::quantize_ms)
        .def_readwrite("with_tracks", &GenOptions::with_tracks)
        .def_readwrite("fps", &GenOptions::fps)
        .def_readwrite("min_duration", &GenOptions::min_duration)
        .def_readwrite("convention", &GenOptions::convention)
        .def_readwrite("vowel_labels", &GenOptions::vowel_labels)
        .def_readwrite("position_map", &GenOptions::position_map)
        .def_readwrite("anchors", &GenOptions::anchors)
        .def_readwrite("lip_center", &GenOptions::lip_center)
        .def_readwrite("rest_point", &GenOptions::rest_point);

    py::class_<SynthCorpus>(m, "SynthCorpus")
        .def_readonly("timelines", &SynthCorpus::timelines)
        .def_readonly("tracks", &SynthCorpus::tracks)
        .def_readonly("truth", &SynthCorpus::truth)
        .def_readonly("delta_prime_model", &SynthCorpus::delta_prime_model)
        .def_readonly("noise_z", &SynthCorpus::noise_z);

    // annot_io
    m.def("parse_textgrid", [](const std::string& s) { return parse_textgrid(s); });
    m.def("parse_eaf", [](const std::string& s) { return parse_eaf(s); });
    m.def(
        "align_tiers",
        [](const AnnotationTier& lip, const AnnotationTier& hand, const SentenceMeta& meta,
           const std::set<std::string>& vowels) {
            return align_tiers(lip, hand, meta,
                               vowels.empty() ? default_vowel_labels() : vowels);
        },
        py::arg("lip"), py::arg("hand"), py::arg("meta"),
        py::arg("vowel_labels") = std::set<std::string>{});
    m.def("read_landmarks", [](const std::string& s) { return read_landmarks(s); });
    m.def("write_landmarks", &write_landmarks);
    m.def("write_canonical", &write_canonical);
    m.def("read_canonical", [](const std::string& s) { return read_canonical(s); });
    m.def("write_canonical_corpus", &write_canonical_corpus);
    m.def("read_canonical_corpus",
          [](const std::string& s) { return read_canonical_corpus(s); });
    m.def("render_textgrid", &render_textgrid);
    m.def("render_eaf", &render_eaf);

    // measures
    m.def("midpoint", &midpoint);
    m.def("compute_measures", &compute_measures, py::arg("timeline"),
          py::arg("convention") = LviConvention::Backward);
    m.def("assemble_table", &assemble_table, py::arg("timelines"),
          py::arg("convention") = LviConvention::Backward);
    m.def("write_measure_csv", &write_measure_csv);
    m.def("read_measure_csv", [](const std::string& s) { return read_measure_csv(s); });

    // normalize
    m.def("descriptive_stats", &descriptive_stats);
    m.def("zscore", &zscore);
    m.def("log_scale", &log_scale);
    m.def("normalize_table", &normalize_table);

    // regression
    m.def("ols_fit", &ols_fit);
    m.def("fit_predictor", &fit_predictor, py::arg("table"), py::arg("context"),
          py::arg("subset"), py::arg("variant"), py::arg("gamma"),
          py::arg("fit_f1f2_on") = FitRange::RightOfGamma);
    m.def("lambda_weights", &lambda_weights);
    m.def("predict_hpt_norm", &predict_hpt_norm);
    m.def("predict_hpt_seconds", &predict_hpt_seconds);
    m.def("denormalize_hpt", &denormalize_hpt);
    m.def("predict_hand_instant", &predict_hand_instant);
    m.def("predictor_to_json", &predictor_to_json, py::arg("predictor"),
          py::arg("config_hash") = std::string());
    m.def("predictor_from_json",
          [](const std::string& s) { return predictor_from_json(s); });
    m.def("grid_search_gamma", &grid_search_gamma);

    // evaluate
    m.def("split_sentences", &split_sentences);
    m.def("mse_norm", &mse_norm);
    m.def("sample_hand_point", &sample_hand_point, py::arg("track"), py::arg("instant"),
          py::arg("sampling") = TrackSampling::NearestFrame);
    m.def("mhcd", &mhcd, py::arg("track"), py::arg("gt_instants"), py::arg("pred_instants"),
          py::arg("sampling") = TrackSampling::NearestFrame);
    m.def("to_polar", &to_polar);
    m.def("centroid_position_classifier", &centroid_position_classifier);
    m.def("compare_predictors", &compare_predictors);

    // synth
    m.def("gen_corpus", &gen_corpus, py::arg("profiles"), py::arg("model"),
          py::arg("sentences_per_cuer"), py::arg("seed"), py::arg("options") = GenOptions{});
    m.def("write_truth_csv", &write_truth_csv);

    // config defaults
    m.def("default_vowel_labels", [] {
        return std::vector<std::string>(default_vowel_labels().begin(),
                                        default_vowel_labels().end());
    });
    m.def("default_position_map", [] { return default_position_map(); });
    m.def("default_position_anchors", [] { return default_position_anchors(); });
}
