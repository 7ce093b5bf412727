// cuesync command line: parse -> measure -> stats -> fit -> predict ->
// eval -> synth -> plot-data, with a flat key=value config file whose
// values are overridden by flags.

#include "cuesync/annot_io.hpp"
#include "cuesync/config.hpp"
#include "cuesync/error.hpp"
#include "cuesync/evaluate.hpp"
#include "cuesync/measures.hpp"
#include "cuesync/normalize.hpp"
#include "cuesync/regression.hpp"
#include "cuesync/synth.hpp"
#include "cuesync/util.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace cuesync;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::MalformedFile, "cannot read '" + path.string() + "'");
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::MalformedFile, "cannot write '" + path.string() + "'");
    }
    out << content;
}

std::string provenance(const RunConfig& cfg) {
    return "# cuesync config=" + config_hash(cfg) + "\n";
}

Grouping grouping_from_name(const std::string& name) {
    if (name == "per-cuer") return Grouping::PerCuer;
    if (name == "normal-deaf") return Grouping::NormalVsDeaf;
    if (name == "all") return Grouping::All;
    if (name == "table1") return Grouping::PerCuer; // stacked export, handled by caller
    throw Error(ErrorKind::UsageError, "unknown grouping '" + name + "'");
}

Grouping grouping_for_policy(NormPolicy policy) {
    switch (policy) {
    case NormPolicy::PerCuer: return Grouping::PerCuer;
    case NormPolicy::PerGroup: return Grouping::NormalVsDeaf;
    case NormPolicy::Global: return Grouping::All;
    }
    return Grouping::All;
}

MeasureTable filter_to_keys(const MeasureTable& table, const std::vector<SentenceKey>& keys) {
    std::set<SentenceKey> wanted(keys.begin(), keys.end());
    MeasureTable out;
    for (const auto& row : table.rows) {
        if (wanted.count({row.cuer_id, row.sentence_id})) out.rows.push_back(row);
    }
    return out;
}

std::string track_file_name(const SentenceKey& key) {
    return key.cuer_id + "__" + key.sentence_id + ".csv";
}

TrackMap load_tracks(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw Error(ErrorKind::MalformedFile, "'" + dir.string() + "' is not a directory");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() == ".csv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    TrackMap tracks;
    for (const auto& file : files) {
        std::string stem = file.stem().string();
        auto sep = stem.find("__");
        if (sep == std::string::npos) {
            throw Error(ErrorKind::MalformedFile,
                        "track file '" + stem + "' is not named cuer__sentence.csv");
        }
        tracks[{stem.substr(0, sep), stem.substr(sep + 2)}] = read_landmarks(read_file(file));
    }
    return tracks;
}

std::vector<SentenceTimeline> load_corpus(const fs::path& in) {
    std::vector<SentenceTimeline> timelines;
    if (fs::is_directory(in)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(in)) {
            auto ext = entry.path().extension();
            if (ext == ".jsonl" || ext == ".json") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) {
            throw Error(ErrorKind::MalformedFile,
                        "no .jsonl files in '" + in.string() + "'");
        }
        for (const auto& file : files) {
            auto part = read_canonical_corpus(read_file(file));
            timelines.insert(timelines.end(), part.begin(), part.end());
        }
    } else {
        timelines = read_canonical_corpus(read_file(in));
    }
    return timelines;
}

struct ModelSet {
    std::vector<NamedPredictor> predictors;
    NormContext context;
};

ModelSet load_models(const std::vector<std::string>& paths) {
    if (paths.empty()) {
        throw Error(ErrorKind::UsageError, "no model files given");
    }
    ModelSet set;
    std::string context_fingerprint;
    std::set<std::string> used_ids;
    for (const auto& path : paths) {
        HptPredictor p = predictor_from_json(read_file(path));
        std::string id = std::string(1, subset_name(p.fit_subset)[0]) + "-LR:" +
                         variant_name(p.variant);
        while (used_ids.count(id)) id += "'";
        used_ids.insert(id);

        std::ostringstream fp;
        fp << norm_policy_name(p.norm_context.policy);
        for (const auto& g : p.norm_context.groups) {
            fp << '|' << g.group_key << ':' << format_double(g.mu_hpt) << ':'
               << format_double(g.sigma_hpt) << ':' << format_double(g.mu_lvd) << ':'
               << format_double(g.sigma_lvd);
        }
        if (set.predictors.empty()) {
            context_fingerprint = fp.str();
            set.context = p.norm_context;
        } else if (fp.str() != context_fingerprint) {
            throw Error(ErrorKind::UsageError,
                        "models carry different normalization contexts; evaluate them separately");
        }
        set.predictors.push_back({id, std::move(p)});
    }
    return set;
}

// ---- subcommand bodies ----------------------------------------------------

int run_parse(const RunConfig& cfg, const std::string& lip_path, const std::string& hand_path,
              const std::string& out_path, const SentenceMeta& meta) {
    auto lip_tiers = parse_textgrid(read_file(lip_path));
    auto hand_tiers = parse_eaf(read_file(hand_path));

    AlignCounts counts;
    SentenceTimeline t = align_tiers(lip_tiers.front(), hand_tiers.front(), meta,
                                     cfg.vowel_labels, &counts);
    if (counts.lip_ignored || counts.hand_ignored) {
        std::cerr << "warning: ignored " << counts.lip_ignored << " lip and "
                  << counts.hand_ignored << " hand non-vowel intervals\n";
    }
    for (const auto& w : validate_timeline(t)) {
        std::cerr << "warning: " << w << "\n";
    }
    write_file(out_path, provenance(cfg) + write_canonical(t) + "\n");
    return 0;
}

int run_measure(const RunConfig& cfg, const std::string& in, const std::string& out) {
    auto timelines = load_corpus(in);
    MeasureTable table = assemble_table(timelines, cfg.lvi_convention);
    write_file(out, provenance(cfg) + write_measure_csv(table));
    std::cerr << table.rows.size() << " rows from " << timelines.size() << " sentences\n";
    return 0;
}

int run_stats(const RunConfig& cfg, const std::string& in, const std::string& out,
              const std::string& group) {
    MeasureTable table = read_measure_csv(read_file(in));
    std::vector<GroupStats> stats;
    if (group == "table1") {
        // Per-cuer rows followed by the NORMAL/DEAF/ALL pools.
        for (auto g : {Grouping::PerCuer, Grouping::NormalVsDeaf, Grouping::All}) {
            auto part = descriptive_stats(table, g);
            stats.insert(stats.end(), part.begin(), part.end());
        }
    } else {
        stats = descriptive_stats(table, grouping_from_name(group));
    }
    write_file(out, provenance(cfg) + write_stats_csv(stats));
    return 0;
}

int run_fit(const RunConfig& cfg, const std::string& in, const std::string& out,
            const std::string& subset, const std::string& variant, bool use_split,
            bool do_grid_search) {
    MeasureTable table = read_measure_csv(read_file(in));
    if (use_split) {
        SentenceSplit split = split_sentences(table, cfg.split_ratio, cfg.seed);
        table = filter_to_keys(table, split.train);
    }
    NormContext context{cfg.norm_policy,
                        descriptive_stats(table, grouping_for_policy(cfg.norm_policy))};
    MeasureTable normalized = normalize_table(table, context);

    double gamma = cfg.gamma;
    if (do_grid_search) {
        gamma = grid_search_gamma(normalized, subset_from_name(subset));
        std::cerr << "grid search selected gamma = " << format_double(gamma) << "\n";
    }
    HptPredictor p = fit_predictor(normalized, context, subset_from_name(subset),
                                   variant_from_name(variant), gamma, cfg.fit_f1f2_on);
    write_file(out, predictor_to_json(p, config_hash(cfg)));
    return 0;
}

int run_predict(const RunConfig& cfg, const std::string& model_path, const std::string& in,
                const std::string& out) {
    HptPredictor p = predictor_from_json(read_file(model_path));
    MeasureTable table = read_measure_csv(read_file(in));
    MeasureTable normalized = normalize_table(table, p.norm_context);

    std::ostringstream os;
    os << provenance(cfg);
    os << "cuer_id,sentence_id,index,label,delta_prime_hat,hpt_hat_s,hand_instant_hat_s\n";
    for (const auto& row : normalized.rows) {
        const double z = predict_hpt_norm(p, row);
        const double hpt = predict_hpt_seconds(p, row);
        os << row.cuer_id << ',' << row.sentence_id << ',' << row.index << ',' << row.label
           << ',' << format_double(z) << ',' << format_double(hpt) << ','
           << format_double(predict_hand_instant(row.t_mid, hpt)) << "\n";
    }
    write_file(out, os.str());
    return 0;
}

int run_eval(const RunConfig& cfg, const std::string& in, const std::vector<std::string>& models,
             const std::string& tracks_dir, const std::string& out,
             const std::string& matrix_out) {
    MeasureTable table = read_measure_csv(read_file(in));
    SentenceSplit split = split_sentences(table, cfg.split_ratio, cfg.seed);
    ModelSet set = load_models(models);
    MeasureTable normalized = normalize_table(table, set.context);
    TrackMap tracks = load_tracks(tracks_dir);

    EvalOptions options{cfg.position_map, cfg.track_sampling};
    auto reports = compare_predictors(normalized, set.predictors, tracks, split, options);
    write_file(out, provenance(cfg) + write_report_csv(reports));
    if (!matrix_out.empty()) {
        write_file(matrix_out, provenance(cfg) + write_mse_matrix_csv(reports));
    }
    return 0;
}

int run_synth(const RunConfig& cfg, const std::string& profiles_path, int n, const std::string& out_dir,
              bool no_textgrid, bool no_eaf, bool no_tracks, bool no_quantize) {
    SynthSpec spec = parse_synth_spec(read_file(profiles_path));
    GenOptions options;
    options.quantize_ms = !no_quantize;
    options.with_tracks = !no_tracks;
    options.convention = cfg.lvi_convention;
    options.position_map = cfg.position_map;
    options.vowel_labels.assign(cfg.vowel_labels.begin(), cfg.vowel_labels.end());

    SynthCorpus corpus = gen_corpus(spec.profiles, spec.model, n, cfg.seed, options);

    const fs::path dir(out_dir);
    write_file(dir / "corpus.jsonl", provenance(cfg) + write_canonical_corpus(corpus.timelines));
    write_file(dir / "truth.csv", provenance(cfg) + write_truth_csv(corpus));
    if (!no_tracks) {
        for (const auto& [key, track] : corpus.tracks) {
            write_file(dir / "tracks" / track_file_name(key),
                       provenance(cfg) + write_landmarks(track));
        }
    }
    for (const auto& t : corpus.timelines) {
        const std::string base = t.cuer_id + "__" + t.sentence_id;
        if (!no_textgrid) {
            write_file(dir / "textgrid" / (base + ".TextGrid"),
                       provenance(cfg) + render_textgrid(t));
        }
        if (!no_eaf) {
            // Keep the file well-formed: provenance goes after the
            // declaration as an XML comment.
            std::string eaf = render_eaf(t);
            auto nl = eaf.find('\n');
            eaf.insert(nl + 1, "<!-- cuesync config=" + config_hash(cfg) + " -->\n");
            write_file(dir / "eaf" / (base + ".eaf"), eaf);
        }
    }
    std::cerr << corpus.timelines.size() << " sentences, " << corpus.truth.rows.size()
              << " vowels written to " << dir << "\n";
    return 0;
}

int run_plot_data(const RunConfig& cfg, const std::string& kind, const std::string& in,
                  const std::string& tracks_dir, const std::vector<std::string>& models,
                  const std::string& reports_path, const std::string& out) {
    if (kind == "polar") {
        MeasureTable table = read_measure_csv(read_file(in));
        TrackMap tracks = load_tracks(tracks_dir);
        EvalOptions options{cfg.position_map, cfg.track_sampling};

        std::vector<PolarRow> rows = polar_samples(table, tracks, nullptr, "gt", options);
        if (!models.empty()) {
            ModelSet set = load_models(models);
            MeasureTable normalized = normalize_table(table, set.context);
            for (const auto& named : set.predictors) {
                auto part =
                    polar_samples(normalized, tracks, &named.predictor, named.id, options);
                rows.insert(rows.end(), part.begin(), part.end());
            }
        }
        write_file(out, provenance(cfg) + write_polar_csv(rows));
        return 0;
    }
    if (kind == "mse") {
        // Pivot the aggregate rows of an eval report into a subset x
        // predictor matrix.
        std::vector<EvalReport> reports;
        for (const auto& line : split(read_file(reports_path), '\n')) {
            std::string l = trim(line);
            if (l.empty() || l[0] == '#' || starts_with(l, "predictor,")) continue;
            auto f = split(l, ',');
            if (f.size() != 6 || f[2] != "*") continue;
            EvalReport r;
            r.predictor_id = f[0];
            r.subset = f[1];
            r.e_hpt = parse_double(f[3]);
            reports.push_back(std::move(r));
        }
        if (reports.empty()) {
            throw Error(ErrorKind::MalformedFile, "no aggregate rows in report CSV");
        }
        write_file(out, provenance(cfg) + write_mse_matrix_csv(reports));
        return 0;
    }
    throw Error(ErrorKind::UsageError, "unknown plot-data kind '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lip-hand timing analysis for Cued Speech annotation data"};
    app.require_subcommand(1);

    std::string config_path;
    std::string gamma_str, policy_str, convention_str, fit_on_str, split_str, seed_str,
        sampling_str;
    app.add_option("--config", config_path, "flat key=value config file");
    app.add_option("--gamma", gamma_str, "breakpoint in log10-LVE space");
    app.add_option("--norm-policy", policy_str, "per-cuer|per-group|global");
    app.add_option("--lvi-convention", convention_str, "backward|forward");
    app.add_option("--fit-f1f2-on", fit_on_str, "right|all");
    app.add_option("--split", split_str, "train:test sentence split ratio");
    app.add_option("--seed", seed_str, "seed for every random choice");
    app.add_option("--sampling", sampling_str, "nearest|linear track sampling");

    // parse
    auto* cmd_parse = app.add_subcommand("parse", "TextGrid + EAF -> canonical sentence JSON");
    std::string lip_path, hand_path, parse_out, sentence_id = "s1", cuer_id = "cuer",
                                                hearing_str = "normal";
    cmd_parse->add_option("--lip", lip_path, "Praat TextGrid (acoustic annotations)")
        ->required();
    cmd_parse->add_option("--hand", hand_path, "ELAN EAF (hand annotations)")->required();
    cmd_parse->add_option("--out", parse_out, "output canonical JSON")->required();
    cmd_parse->add_option("--sentence-id", sentence_id, "sentence id");
    cmd_parse->add_option("--cuer-id", cuer_id, "cuer id");
    cmd_parse->add_option("--hearing", hearing_str, "normal|deaf");

    // measure
    auto* cmd_measure = app.add_subcommand("measure", "canonical corpus -> measure table CSV");
    std::string measure_in, measure_out;
    cmd_measure->add_option("--in", measure_in, "canonical .jsonl file or directory")
        ->required();
    cmd_measure->add_option("--out", measure_out, "output CSV")->required();

    // stats
    auto* cmd_stats = app.add_subcommand("stats", "descriptive statistics per group");
    std::string stats_in, stats_out, stats_group = "per-cuer";
    cmd_stats->add_option("--in", stats_in, "measure table CSV")->required();
    cmd_stats->add_option("--out", stats_out, "output CSV")->required();
    cmd_stats->add_option("--group", stats_group, "per-cuer|normal-deaf|all|table1");

    // fit
    auto* cmd_fit = app.add_subcommand("fit", "fit a hand-preceding-time predictor");
    std::string fit_in, fit_out, fit_subset = "ALL", fit_variant = "combined";
    bool fit_use_split = false, fit_grid = false;
    cmd_fit->add_option("--in", fit_in, "measure table CSV")->required();
    cmd_fit->add_option("--out", fit_out, "output model JSON")->required();
    cmd_fit->add_option("--subset", fit_subset, "ALL|NORMAL|DEAF");
    cmd_fit->add_option("--variant", fit_variant, "combined|lve|mean|audio");
    cmd_fit->add_flag("--train-split", fit_use_split,
                      "fit on the train side of the seeded sentence split");
    cmd_fit->add_flag("--grid-search-gamma", fit_grid,
                      "search gamma by residual MSE instead of the configured value");

    // predict
    auto* cmd_predict = app.add_subcommand("predict", "apply a fitted model to a measure table");
    std::string predict_model, predict_in, predict_out;
    cmd_predict->add_option("--model", predict_model, "model JSON")->required();
    cmd_predict->add_option("--in", predict_in, "measure table CSV")->required();
    cmd_predict->add_option("--out", predict_out, "output CSV")->required();

    // eval
    auto* cmd_eval = app.add_subcommand("eval", "score predictors on the held-out split");
    std::string eval_in, eval_tracks, eval_out, eval_matrix;
    std::vector<std::string> eval_models;
    cmd_eval->add_option("--in", eval_in, "measure table CSV")->required();
    cmd_eval->add_option("--models", eval_models, "model JSON files")->required();
    cmd_eval->add_option("--tracks", eval_tracks, "landmark track directory")->required();
    cmd_eval->add_option("--out", eval_out, "output report CSV")->required();
    cmd_eval->add_option("--mse-matrix", eval_matrix, "also write the subset x model matrix");

    // synth
    auto* cmd_synth = app.add_subcommand("synth", "generate a seeded synthetic corpus");
    std::string synth_profiles, synth_out;
    int synth_n = 100;
    bool synth_no_tg = false, synth_no_eaf = false, synth_no_tracks = false,
         synth_no_quant = false;
    cmd_synth->add_option("--profiles", synth_profiles, "profiles + model spec file")
        ->required();
    cmd_synth->add_option("--n", synth_n, "sentences per cuer")->required();
    cmd_synth->add_option("--out-dir", synth_out, "output directory")->required();
    cmd_synth->add_flag("--no-textgrid", synth_no_tg, "skip TextGrid renderings");
    cmd_synth->add_flag("--no-eaf", synth_no_eaf, "skip EAF renderings");
    cmd_synth->add_flag("--no-tracks", synth_no_tracks, "skip landmark tracks");
    cmd_synth->add_flag("--no-quantize", synth_no_quant,
                        "keep full-precision times (disables TextGrid/EAF emission)");

    // plot-data
    auto* cmd_plot = app.add_subcommand("plot-data", "emit plot-ready CSV data");
    std::string plot_kind, plot_in, plot_tracks, plot_reports, plot_out;
    std::vector<std::string> plot_models;
    cmd_plot->add_option("--kind", plot_kind, "polar|mse")->required();
    cmd_plot->add_option("--in", plot_in, "measure table CSV (polar)");
    cmd_plot->add_option("--tracks", plot_tracks, "landmark track directory (polar)");
    cmd_plot->add_option("--models", plot_models, "model JSON files (polar)");
    cmd_plot->add_option("--reports", plot_reports, "eval report CSV (mse)");
    cmd_plot->add_option("--out", plot_out, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = parse_config(read_file(config_path), cfg);
        // Flags override file values.
        std::ostringstream overrides;
        if (!gamma_str.empty()) overrides << "gamma = " << gamma_str << "\n";
        if (!policy_str.empty()) overrides << "norm_policy = " << policy_str << "\n";
        if (!convention_str.empty()) overrides << "lvi_convention = " << convention_str << "\n";
        if (!fit_on_str.empty()) overrides << "fit_f1f2_on = " << fit_on_str << "\n";
        if (!split_str.empty()) overrides << "split_ratio = " << split_str << "\n";
        if (!seed_str.empty()) overrides << "seed = " << seed_str << "\n";
        if (!sampling_str.empty()) overrides << "track_sampling = " << sampling_str << "\n";
        cfg = parse_config(overrides.str(), cfg);

        if (cmd_parse->parsed()) {
            return run_parse(cfg, lip_path, hand_path, parse_out,
                             {sentence_id, cuer_id, hearing_from_name(hearing_str)});
        }
        if (cmd_measure->parsed()) return run_measure(cfg, measure_in, measure_out);
        if (cmd_stats->parsed()) return run_stats(cfg, stats_in, stats_out, stats_group);
        if (cmd_fit->parsed()) {
            return run_fit(cfg, fit_in, fit_out, fit_subset, fit_variant, fit_use_split,
                           fit_grid);
        }
        if (cmd_predict->parsed()) return run_predict(cfg, predict_model, predict_in, predict_out);
        if (cmd_eval->parsed()) {
            return run_eval(cfg, eval_in, eval_models, eval_tracks, eval_out, eval_matrix);
        }
        if (cmd_synth->parsed()) {
            return run_synth(cfg, synth_profiles, synth_n, synth_out, synth_no_tg, synth_no_eaf,
                             synth_no_tracks, synth_no_quant);
        }
        if (cmd_plot->parsed()) {
            return run_plot_data(cfg, plot_kind, plot_in, plot_tracks, plot_models, plot_reports,
                                 plot_out);
        }
        throw Error(ErrorKind::UsageError, "no subcommand given");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
