#include "cuesync/regression.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>

namespace cuesync {

const char* variant_name(Variant v) {
    switch (v) {
    case Variant::AudioBased: return "audio";
    case Variant::MeanBased: return "mean";
    case Variant::LveOnly: return "lve";
    case Variant::Combined: return "combined";
    }
    return "?";
}

Variant variant_from_name(const std::string& name) {
    if (name == "audio") return Variant::AudioBased;
    if (name == "mean") return Variant::MeanBased;
    if (name == "lve") return Variant::LveOnly;
    if (name == "combined") return Variant::Combined;
    throw Error(ErrorKind::UsageError, "unknown predictor variant '" + name + "'");
}

const char* subset_name(Subset s) {
    switch (s) {
    case Subset::All: return "ALL";
    case Subset::Normal: return "NORMAL";
    case Subset::Deaf: return "DEAF";
    }
    return "?";
}

Subset subset_from_name(const std::string& name) {
    if (name == "ALL") return Subset::All;
    if (name == "NORMAL") return Subset::Normal;
    if (name == "DEAF") return Subset::Deaf;
    throw Error(ErrorKind::UsageError, "unknown subset '" + name + "'");
}

const char* fit_range_name(FitRange r) {
    return r == FitRange::RightOfGamma ? "right" : "all";
}

FitRange fit_range_from_name(const std::string& name) {
    if (name == "right") return FitRange::RightOfGamma;
    if (name == "all") return FitRange::AllRows;
    throw Error(ErrorKind::UsageError, "unknown fit range '" + name + "'");
}

LinearModel ols_fit(const std::vector<Point>& points) {
    const std::size_t n = points.size();
    if (n < 2) {
        throw Error(ErrorKind::TooFewPoints, "need at least 2 points, got " + std::to_string(n));
    }
    double sx = 0.0, sy = 0.0;
    for (const auto& p : points) {
        sx += p.x;
        sy += p.y;
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        const double dx = p.x - mx;
        sxx += dx * dx;
        sxy += dx * (p.y - my);
    }
    if (sxx <= 0.0) {
        throw Error(ErrorKind::DegenerateDesign, "x values are all identical");
    }

    LinearModel m;
    m.slope = sxy / sxx;
    m.intercept = my - m.slope * mx;
    m.n = static_cast<long>(n);
    double rss = 0.0;
    for (const auto& p : points) {
        const double r = p.y - m(p.x);
        rss += r * r;
    }
    m.residual_mse = rss / static_cast<double>(n);
    return m;
}

namespace {

const VowelMeasures& require_normalized(const VowelMeasures& row) {
    if (!row.hpt_z || !row.lvd_z || !row.lve_log || !row.lvi_log) {
        throw Error(ErrorKind::MissingStats, "row lacks normalized columns");
    }
    return row;
}

bool in_subset(const VowelMeasures& row, Subset subset) {
    switch (subset) {
    case Subset::All: return true;
    case Subset::Normal: return row.hearing == Hearing::Normal;
    case Subset::Deaf: return row.hearing == Hearing::Deaf;
    }
    return false;
}

} // namespace

PiecewiseLveModel fit_f0(const std::vector<const VowelMeasures*>& rows, double gamma) {
    std::vector<Point> left, right;
    for (const VowelMeasures* r : rows) {
        require_normalized(*r);
        if (*r->lve_log <= gamma) {
            left.push_back({*r->lve_log, *r->hpt_z});
        } else {
            right.push_back({*r->lve_log, *r->hpt_z});
        }
    }
    if (left.size() < 2 || right.size() < 2) {
        throw Error(ErrorKind::EmptySide,
                    "gamma " + format_double(gamma) + " leaves " + std::to_string(left.size()) +
                        " rows left and " + std::to_string(right.size()) + " right");
    }
    PiecewiseLveModel m;
    m.gamma = gamma;
    m.left = ols_fit(left);
    m.right = ols_fit(right);
    return m;
}

HptPredictor fit_predictor(const MeasureTable& table, const NormContext& context, Subset subset,
                           Variant variant, double gamma, FitRange fit_f1f2_on) {
    if (!table.normalized()) {
        throw Error(ErrorKind::MissingStats, "table has not been normalized");
    }
    std::vector<const VowelMeasures*> rows;
    for (const auto& r : table.rows) {
        if (in_subset(r, subset)) rows.push_back(&r);
    }
    if (rows.empty()) {
        throw Error(ErrorKind::EmptyGroup,
                    std::string("no rows in subset ") + subset_name(subset));
    }

    HptPredictor p;
    p.variant = variant;
    p.fit_subset = subset;
    p.gamma = gamma;
    p.norm_context = context;

    if (variant == Variant::LveOnly || variant == Variant::Combined) {
        p.f0 = fit_f0(rows, gamma);
    }
    if (variant == Variant::Combined) {
        std::vector<Point> f1_pts, f2_pts;
        for (const VowelMeasures* r : rows) {
            if (fit_f1f2_on == FitRange::RightOfGamma && *r->lve_log <= gamma) continue;
            f1_pts.push_back({*r->lvi_log, *r->hpt_z});
            f2_pts.push_back({*r->lvd_z, *r->hpt_z});
        }
        p.f1 = ols_fit(f1_pts);
        p.f2 = ols_fit(f2_pts);
    }
    return p;
}

std::pair<double, double> lambda_weights(double alpha, double beta, double alpha_bar,
                                         double beta_bar) {
    if (alpha <= 0.0 || beta <= 0.0 || alpha_bar <= 0.0 || beta_bar <= 0.0) {
        throw Error(ErrorKind::NonpositiveInput, "lambda weights need positive durations");
    }
    const double c = alpha_bar / beta_bar;
    const double denom = alpha + c * beta;
    return {alpha / denom, c * beta / denom};
}

double predict_hpt_norm(const HptPredictor& p, const VowelMeasures& row) {
    require_normalized(row);
    switch (p.variant) {
    case Variant::AudioBased: {
        // Taking the hand segment at the lip instant means a zero-second
        // HPT, which sits at -mu/sigma in the group's z scale.
        const GroupStats& g = p.norm_context.find(group_key_for(row, p.norm_context.policy));
        return zscore(0.0, g.mu_hpt, g.sigma_hpt);
    }
    case Variant::MeanBased:
        return 0.0;
    case Variant::LveOnly: {
        if (!p.f0) throw Error(ErrorKind::UnfittedPredictor, "lve predictor lacks f0");
        const double d = *row.lve_log;
        return d <= p.gamma ? p.f0->left(d) : p.f0->right(d);
    }
    case Variant::Combined: {
        if (!p.f0 || !p.f1 || !p.f2) {
            throw Error(ErrorKind::UnfittedPredictor, "combined predictor lacks f0/f1/f2");
        }
        const double d = *row.lve_log;
        if (d <= p.gamma) return p.f0->left(d);
        if (row.lvi_source == LviSource::ImputedSingleton) {
            // Single-syllable sentence: no interval exists, duration only.
            return (*p.f2)(*row.lvd_z);
        }
        auto [l1, l2] = lambda_weights(row.lvi, row.lvd, row.alpha_bar, row.beta_bar);
        return l1 * (*p.f1)(*row.lvi_log) + l2 * (*p.f2)(*row.lvd_z);
    }
    }
    throw Error(ErrorKind::UnfittedPredictor, "unknown variant");
}

double denormalize_hpt(double delta_prime, const GroupStats& group) {
    if (group.sigma_hpt <= 0.0) {
        throw Error(ErrorKind::DegenerateGroup, "group '" + group.group_key + "' sigma <= 0");
    }
    return delta_prime * group.sigma_hpt + group.mu_hpt;
}

double predict_hand_instant(double t_mid, double hpt) { return t_mid - hpt; }

double predict_hpt_seconds(const HptPredictor& p, const VowelMeasures& row) {
    const double z = predict_hpt_norm(p, row);
    const GroupStats& g = p.norm_context.find(group_key_for(row, p.norm_context.policy));
    return denormalize_hpt(z, g);
}

namespace {

nlohmann::ordered_json model_to_json(const LinearModel& m) {
    return {{"slope", m.slope},
            {"intercept", m.intercept},
            {"n", m.n},
            {"residual_mse", m.residual_mse}};
}

LinearModel model_from_json(const nlohmann::json& j) {
    LinearModel m;
    m.slope = j.at("slope").get<double>();
    m.intercept = j.at("intercept").get<double>();
    m.n = j.value("n", 0l);
    m.residual_mse = j.value("residual_mse", 0.0);
    return m;
}

} // namespace

std::string predictor_to_json(const HptPredictor& p, const std::string& config_hash) {
    nlohmann::ordered_json j;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    j["variant"] = variant_name(p.variant);
    j["subset"] = subset_name(p.fit_subset);
    j["gamma"] = p.gamma;
    if (p.f0) {
        j["f0"] = {{"left", model_to_json(p.f0->left)}, {"right", model_to_json(p.f0->right)}};
    }
    if (p.f1) j["f1"] = model_to_json(*p.f1);
    if (p.f2) j["f2"] = model_to_json(*p.f2);
    j["norm_policy"] = norm_policy_name(p.norm_context.policy);
    auto& groups = j["groups"] = nlohmann::ordered_json::array();
    for (const auto& g : p.norm_context.groups) {
        groups.push_back({{"group", g.group_key},
                          {"mu_hpt", g.mu_hpt},
                          {"sigma_hpt", g.sigma_hpt},
                          {"mu_lvd", g.mu_lvd},
                          {"sigma_lvd", g.sigma_lvd},
                          {"count", g.count}});
    }
    return j.dump(2) + "\n";
}

HptPredictor predictor_from_json(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaViolation, std::string("predictor JSON: ") + e.what());
    }
    try {
        HptPredictor p;
        p.variant = variant_from_name(j.at("variant").get<std::string>());
        p.fit_subset = subset_from_name(j.at("subset").get<std::string>());
        p.gamma = j.at("gamma").get<double>();
        if (j.contains("f0")) {
            PiecewiseLveModel f0;
            f0.gamma = p.gamma;
            f0.left = model_from_json(j["f0"].at("left"));
            f0.right = model_from_json(j["f0"].at("right"));
            p.f0 = f0;
        }
        if (j.contains("f1")) p.f1 = model_from_json(j["f1"]);
        if (j.contains("f2")) p.f2 = model_from_json(j["f2"]);
        p.norm_context.policy = norm_policy_from_name(j.at("norm_policy").get<std::string>());
        for (const auto& g : j.at("groups")) {
            p.norm_context.groups.push_back({g.at("group").get<std::string>(),
                                             g.at("mu_hpt").get<double>(),
                                             g.at("sigma_hpt").get<double>(),
                                             g.at("mu_lvd").get<double>(),
                                             g.at("sigma_lvd").get<double>(),
                                             g.at("count").get<long>()});
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::SchemaViolation, std::string("predictor JSON: ") + e.what());
    }
}

double grid_search_gamma(const MeasureTable& table, Subset subset) {
    std::vector<const VowelMeasures*> rows;
    for (const auto& r : table.rows) {
        if (in_subset(r, subset)) rows.push_back(&r);
    }
    if (rows.empty()) {
        throw Error(ErrorKind::EmptyGroup, std::string("no rows in subset ") + subset_name(subset));
    }
    double best_gamma = std::numeric_limits<double>::quiet_NaN();
    double best_mse = std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 120; ++step) {
        const double gamma = -1.0 + 0.01 * step;
        try {
            PiecewiseLveModel m = fit_f0(rows, gamma);
            const double nl = static_cast<double>(m.left.n);
            const double nr = static_cast<double>(m.right.n);
            const double mse = (m.left.residual_mse * nl + m.right.residual_mse * nr) / (nl + nr);
            if (mse < best_mse) {
                best_mse = mse;
                best_gamma = gamma;
            }
        } catch (const Error&) {
            continue; // a side is empty or degenerate at this gamma
        }
    }
    if (!std::isfinite(best_mse)) {
        throw Error(ErrorKind::EmptySide, "no feasible gamma in [-1.0, 0.2]");
    }
    return best_gamma;
}

} // namespace cuesync
