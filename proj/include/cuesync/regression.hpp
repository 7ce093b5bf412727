#pragma once

#include "cuesync/measures.hpp"
#include "cuesync/normalize.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cuesync {

struct LinearModel {
    double slope = 0.0;
    double intercept = 0.0;
    long n = 0;
    double residual_mse = 0.0;

    double operator()(double x) const { return slope * x + intercept; }
};

// Independent fits left and right of the breakpoint gamma in log-LVE
// space; no continuity constraint between the pieces.
struct PiecewiseLveModel {
    double gamma = 0.0;
    LinearModel left;  // fit on lve_log <= gamma
    LinearModel right; // fit on lve_log >  gamma
};

enum class Variant { AudioBased, MeanBased, LveOnly, Combined };
const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

enum class Subset { All, Normal, Deaf };
const char* subset_name(Subset s);
Subset subset_from_name(const std::string& name);

// Which rows feed the lvi/lvd regressions: only those right of gamma
// (the region where they are evaluated) or every row.
enum class FitRange { RightOfGamma, AllRows };
const char* fit_range_name(FitRange r);
FitRange fit_range_from_name(const std::string& name);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

LinearModel ols_fit(const std::vector<Point>& points);

struct HptPredictor {
    Variant variant = Variant::Combined;
    Subset fit_subset = Subset::All;
    double gamma = 0.0;
    std::optional<PiecewiseLveModel> f0;
    std::optional<LinearModel> f1; // lvi_log -> hpt_z
    std::optional<LinearModel> f2; // lvd_z  -> hpt_z
    NormContext norm_context;
};

PiecewiseLveModel fit_f0(const std::vector<const VowelMeasures*>& rows, double gamma);

HptPredictor fit_predictor(const MeasureTable& table, const NormContext& context, Subset subset,
                           Variant variant, double gamma,
                           FitRange fit_f1f2_on = FitRange::RightOfGamma);

// Relative weighting of the interval and duration regressions for one
// syllable, from raw seconds. Always sums to one.
std::pair<double, double> lambda_weights(double alpha, double beta, double alpha_bar,
                                         double beta_bar);

// Predicted hand-preceding time in the normalized (z) scale.
double predict_hpt_norm(const HptPredictor& predictor, const VowelMeasures& row);

double denormalize_hpt(double delta_prime, const GroupStats& group);
double predict_hand_instant(double t_mid, double hpt);

// Predicted HPT in seconds for a row, via the predictor's own
// normalization context.
double predict_hpt_seconds(const HptPredictor& predictor, const VowelMeasures& row);

// config_hash, when given, is embedded as provenance metadata and
// ignored on reload.
std::string predictor_to_json(const HptPredictor& predictor, const std::string& config_hash = "");
HptPredictor predictor_from_json(std::string_view json_text);

// Breakpoint search minimizing the pooled residual MSE of the two f0
// pieces; step 0.01 over [-1.0, 0.2]. Never run implicitly.
double grid_search_gamma(const MeasureTable& table, Subset subset);

} // namespace cuesync
