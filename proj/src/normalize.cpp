#include "cuesync/normalize.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace cuesync {

const char* norm_policy_name(NormPolicy p) {
    switch (p) {
    case NormPolicy::PerCuer: return "per-cuer";
    case NormPolicy::PerGroup: return "per-group";
    case NormPolicy::Global: return "global";
    }
    return "?";
}

NormPolicy norm_policy_from_name(const std::string& name) {
    if (name == "per-cuer") return NormPolicy::PerCuer;
    if (name == "per-group") return NormPolicy::PerGroup;
    if (name == "global") return NormPolicy::Global;
    throw Error(ErrorKind::UsageError, "unknown normalization policy '" + name + "'");
}

std::string group_key_for(const VowelMeasures& row, NormPolicy policy) {
    switch (policy) {
    case NormPolicy::PerCuer: return row.cuer_id;
    case NormPolicy::PerGroup: return row.hearing == Hearing::Normal ? "NORMAL" : "DEAF";
    case NormPolicy::Global: return "ALL";
    }
    return "ALL";
}

namespace {

NormPolicy policy_for_grouping(Grouping g) {
    switch (g) {
    case Grouping::PerCuer: return NormPolicy::PerCuer;
    case Grouping::NormalVsDeaf: return NormPolicy::PerGroup;
    case Grouping::All: return NormPolicy::Global;
    }
    return NormPolicy::Global;
}

// Two-pass mean / population variance; deterministic given row order.
struct Moments {
    double mean = 0.0;
    double popstd = 0.0;
};

Moments moments(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

} // namespace

std::vector<GroupStats> descriptive_stats(const MeasureTable& table, Grouping grouping) {
    if (table.rows.empty()) {
        throw Error(ErrorKind::EmptyGroup, "measure table is empty");
    }
    const NormPolicy policy = policy_for_grouping(grouping);

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& row : table.rows) {
        auto& [hpt, lvd] = groups[group_key_for(row, policy)];
        hpt.push_back(row.hpt);
        lvd.push_back(row.lvd);
    }

    std::vector<GroupStats> out;
    for (auto& [key, cols] : groups) {
        auto& [hpt, lvd] = cols;
        if (hpt.size() < 2) {
            throw Error(ErrorKind::EmptyGroup, "group '" + key + "' has fewer than 2 rows");
        }
        Moments mh = moments(hpt);
        Moments ml = moments(lvd);
        if (mh.popstd <= 0.0 || ml.popstd <= 0.0) {
            throw Error(ErrorKind::DegenerateGroup, "group '" + key + "' has zero variance");
        }
        out.push_back({key, mh.mean, mh.popstd, ml.mean, ml.popstd,
                       static_cast<long>(hpt.size())});
    }
    return out;
}

double zscore(double x, double mu, double sigma) {
    if (sigma <= 0.0) {
        throw Error(ErrorKind::DegenerateGroup, "zscore with sigma <= 0");
    }
    return (x - mu) / sigma;
}

double log_scale(double x_seconds) {
    if (x_seconds <= 0.0) {
        throw Error(ErrorKind::NonpositiveInput,
                    "log scale of non-positive value " + format_double(x_seconds));
    }
    return std::log10(x_seconds);
}

const GroupStats& NormContext::find(const std::string& group_key) const {
    for (const auto& g : groups) {
        if (g.group_key == group_key) return g;
    }
    throw Error(ErrorKind::MissingStats, "no statistics for group '" + group_key + "'");
}

MeasureTable normalize_table(const MeasureTable& table, const NormContext& context) {
    MeasureTable out = table;
    for (auto& row : out.rows) {
        const GroupStats& g = context.find(group_key_for(row, context.policy));
        row.hpt_z = zscore(row.hpt, g.mu_hpt, g.sigma_hpt);
        row.lvd_z = zscore(row.lvd, g.mu_lvd, g.sigma_lvd);
        row.lve_log = log_scale(row.lve);
        row.lvi_log = log_scale(row.lvi);
    }
    return out;
}

std::string write_stats_csv(const std::vector<GroupStats>& stats) {
    std::ostringstream os;
    os << "group,mu_hpt_ms,sigma_hpt_ms,mu_lvd_ms,sigma_lvd_ms,syllable_count\n";
    for (const auto& g : stats) {
        os << g.group_key << ',' << std::llround(g.mu_hpt * 1000.0) << ','
           << std::llround(g.sigma_hpt * 1000.0) << ',' << std::llround(g.mu_lvd * 1000.0) << ','
           << std::llround(g.sigma_lvd * 1000.0) << ',' << g.count << "\n";
    }
    return os.str();
}

} // namespace cuesync
