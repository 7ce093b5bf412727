#pragma once

#include "cuesync/measures.hpp"

#include <string>
#include <vector>

namespace cuesync {

// One descriptive-statistics row: per cuer, per hearing group, or the
// whole corpus. Values are seconds internally, milliseconds in exports.
struct GroupStats {
    std::string group_key; // cuer_id, "NORMAL", "DEAF" or "ALL"
    double mu_hpt = 0.0;
    double sigma_hpt = 0.0;
    double mu_lvd = 0.0;
    double sigma_lvd = 0.0;
    long count = 0;
};

enum class Grouping { PerCuer, NormalVsDeaf, All };

// How a row finds its statistics row during normalization.
enum class NormPolicy { PerCuer, PerGroup, Global };
const char* norm_policy_name(NormPolicy p);
NormPolicy norm_policy_from_name(const std::string& name);

std::string group_key_for(const VowelMeasures& row, NormPolicy policy);

// Arithmetic mean and population (divisor n) standard deviation.
std::vector<GroupStats> descriptive_stats(const MeasureTable& table, Grouping grouping);

double zscore(double x, double mu, double sigma);
double log_scale(double x_seconds); // log10, input must be positive

struct NormContext {
    NormPolicy policy = NormPolicy::PerCuer;
    std::vector<GroupStats> groups;

    const GroupStats& find(const std::string& group_key) const;
};

// Fills hpt_z, lvd_z, lve_log, lvi_log on a copy of the table.
MeasureTable normalize_table(const MeasureTable& table, const NormContext& context);

// Table-1-style export, values rounded to whole milliseconds.
std::string write_stats_csv(const std::vector<GroupStats>& stats);

} // namespace cuesync
