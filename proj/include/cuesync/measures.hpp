#pragma once

#include "cuesync/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cuesync {

enum class LviSource { Measured, ImputedMax, ImputedSingleton };
const char* lvi_source_name(LviSource s);
LviSource lvi_source_from_name(const std::string& name);

// Which adjacent-midpoint difference a syllable owns. Backward takes
// t_mid(i) - t_mid(i-1) and imputes index 0; forward takes
// t_mid(i+1) - t_mid(i) and imputes the last index.
enum class LviConvention { Backward, Forward };

struct VowelMeasures {
    std::string sentence_id;
    std::string cuer_id;
    Hearing hearing = Hearing::Normal;
    int index = 0;
    std::string label;

    double t_mid = 0.0; // lip target instant
    double T_mid = 0.0; // hand target instant
    double hpt = 0.0;   // t_mid - T_mid, may be negative
    double lve = 0.0;   // sentence end - t_mid, > 0
    double lvi = 0.0;   // adjacent lip target spacing, > 0
    double lvd = 0.0;   // lip vowel duration, > 0
    LviSource lvi_source = LviSource::Measured;

    // Sentence-level means of the raw lvi / lvd columns, used by the
    // predictor's weighting. Identical for all rows of a sentence.
    double alpha_bar = 0.0;
    double beta_bar = 0.0;

    // Filled by normalize_table.
    std::optional<double> hpt_z;
    std::optional<double> lvd_z;
    std::optional<double> lve_log;
    std::optional<double> lvi_log;
};

struct MeasureTable {
    std::vector<VowelMeasures> rows;

    bool normalized() const {
        return !rows.empty() && rows.front().hpt_z.has_value();
    }
};

double midpoint(const PhoneInterval& interval);

// Lip-stream measures alone; shared with the corpus generator so both
// sides compute identical values.
struct LipMeasures {
    std::vector<double> t_mid;
    std::vector<double> lve;
    std::vector<double> lvi;
    std::vector<double> lvd;
    std::vector<LviSource> lvi_source;
    double alpha_bar = 0.0;
    double beta_bar = 0.0;
};
LipMeasures compute_lip_measures(const std::vector<PhoneInterval>& lip_vowels,
                                 double sentence_end,
                                 LviConvention convention = LviConvention::Backward);

std::vector<VowelMeasures> compute_measures(const SentenceTimeline& timeline,
                                            LviConvention convention = LviConvention::Backward);

MeasureTable assemble_table(const std::vector<SentenceTimeline>& timelines,
                            LviConvention convention = LviConvention::Backward);

// CSV interchange. Normalized columns are appended when present.
std::string write_measure_csv(const MeasureTable& table);
MeasureTable read_measure_csv(std::string_view csv);

} // namespace cuesync
