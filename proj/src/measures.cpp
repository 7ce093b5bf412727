#include "cuesync/measures.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace cuesync {

const char* lvi_source_name(LviSource s) {
    switch (s) {
    case LviSource::Measured: return "measured";
    case LviSource::ImputedMax: return "imputed_max";
    case LviSource::ImputedSingleton: return "imputed_singleton";
    }
    return "?";
}

LviSource lvi_source_from_name(const std::string& name) {
    if (name == "measured") return LviSource::Measured;
    if (name == "imputed_max") return LviSource::ImputedMax;
    if (name == "imputed_singleton") return LviSource::ImputedSingleton;
    throw Error(ErrorKind::SchemaViolation, "unknown lvi_source '" + name + "'");
}

double midpoint(const PhoneInterval& interval) {
    return (interval.start + interval.end) / 2.0;
}

LipMeasures compute_lip_measures(const std::vector<PhoneInterval>& lip_vowels,
                                 double sentence_end, LviConvention convention) {
    const std::size_t n = lip_vowels.size();
    LipMeasures m;
    m.t_mid.resize(n);
    m.lve.resize(n);
    m.lvi.resize(n);
    m.lvd.resize(n);
    m.lvi_source.assign(n, LviSource::Measured);

    for (std::size_t i = 0; i < n; ++i) {
        m.t_mid[i] = midpoint(lip_vowels[i]);
        if (i > 0 && m.t_mid[i] <= m.t_mid[i - 1]) {
            throw Error(ErrorKind::NonmonotonicMidpoints,
                        "lip midpoints not strictly increasing at index " + std::to_string(i));
        }
        m.lvd[i] = lip_vowels[i].end - lip_vowels[i].start;
        m.lve[i] = sentence_end - m.t_mid[i];
        if (m.lve[i] <= 0.0) {
            throw Error(ErrorKind::NonpositiveLve,
                        "lip target at or past sentence end at index " + std::to_string(i));
        }
    }

    if (n == 1) {
        m.lvi[0] = m.lvd[0];
        m.lvi_source[0] = LviSource::ImputedSingleton;
    } else if (convention == LviConvention::Backward) {
        double max_measured = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            m.lvi[i] = m.t_mid[i] - m.t_mid[i - 1];
            max_measured = std::max(max_measured, m.lvi[i]);
        }
        m.lvi[0] = max_measured;
        m.lvi_source[0] = LviSource::ImputedMax;
    } else {
        double max_measured = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            m.lvi[i] = m.t_mid[i + 1] - m.t_mid[i];
            max_measured = std::max(max_measured, m.lvi[i]);
        }
        m.lvi[n - 1] = max_measured;
        m.lvi_source[n - 1] = LviSource::ImputedMax;
    }

    double alpha_sum = 0.0, beta_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        alpha_sum += m.lvi[i];
        beta_sum += m.lvd[i];
    }
    m.alpha_bar = alpha_sum / static_cast<double>(n);
    m.beta_bar = beta_sum / static_cast<double>(n);
    return m;
}

std::vector<VowelMeasures> compute_measures(const SentenceTimeline& timeline,
                                            LviConvention convention) {
    validate_timeline(timeline);
    LipMeasures lip = compute_lip_measures(timeline.lip_vowels, timeline.sentence_end, convention);

    std::vector<VowelMeasures> rows;
    rows.reserve(timeline.size());
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        VowelMeasures r;
        r.sentence_id = timeline.sentence_id;
        r.cuer_id = timeline.cuer_id;
        r.hearing = timeline.hearing;
        r.index = static_cast<int>(i);
        r.label = timeline.lip_vowels[i].label;
        r.t_mid = lip.t_mid[i];
        r.T_mid = midpoint(timeline.hand_vowels[i]);
        r.hpt = r.t_mid - r.T_mid;
        r.lve = lip.lve[i];
        r.lvi = lip.lvi[i];
        r.lvd = lip.lvd[i];
        r.lvi_source = lip.lvi_source[i];
        r.alpha_bar = lip.alpha_bar;
        r.beta_bar = lip.beta_bar;
        rows.push_back(std::move(r));
    }
    return rows;
}

MeasureTable assemble_table(const std::vector<SentenceTimeline>& timelines,
                            LviConvention convention) {
    std::map<std::pair<std::string, std::string>, bool> seen;
    MeasureTable table;
    for (const auto& t : timelines) {
        auto key = std::make_pair(t.cuer_id, t.sentence_id);
        if (seen.count(key)) {
            throw Error(ErrorKind::DuplicateSentence,
                        "sentence '" + t.sentence_id + "' of cuer '" + t.cuer_id +
                            "' appears twice");
        }
        seen[key] = true;
        auto rows = compute_measures(t, convention);
        table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [](const VowelMeasures& a, const VowelMeasures& b) {
                         return std::tie(a.cuer_id, a.sentence_id, a.index) <
                                std::tie(b.cuer_id, b.sentence_id, b.index);
                     });
    return table;
}

std::string write_measure_csv(const MeasureTable& table) {
    const bool norm = table.normalized();
    std::ostringstream os;
    os << "cuer_id,hearing,sentence_id,index,label,t_mid_s,T_mid_s,hpt_s,lve_s,lvi_s,lvd_s,"
          "lvi_source,alpha_bar_s,beta_bar_s";
    if (norm) os << ",hpt_z,lvd_z,lve_log,lvi_log";
    os << "\n";
    for (const auto& r : table.rows) {
        os << r.cuer_id << ',' << hearing_name(r.hearing) << ',' << r.sentence_id << ','
           << r.index << ',' << r.label << ',' << format_double(r.t_mid) << ','
           << format_double(r.T_mid) << ',' << format_double(r.hpt) << ','
           << format_double(r.lve) << ',' << format_double(r.lvi) << ','
           << format_double(r.lvd) << ',' << lvi_source_name(r.lvi_source) << ','
           << format_double(r.alpha_bar) << ',' << format_double(r.beta_bar);
        if (norm) {
            os << ',' << format_double(*r.hpt_z) << ',' << format_double(*r.lvd_z) << ','
               << format_double(*r.lve_log) << ',' << format_double(*r.lvi_log);
        }
        os << "\n";
    }
    return os.str();
}

MeasureTable read_measure_csv(std::string_view csv) {
    std::vector<std::string> lines = split(csv, '\n');
    std::size_t i = 0;
    while (i < lines.size() && (trim(lines[i]).empty() || trim(lines[i])[0] == '#')) ++i;
    if (i >= lines.size()) throw Error(ErrorKind::MalformedFile, "measure CSV is empty");

    std::vector<std::string> header = split(trim(lines[i]), ',');
    bool norm;
    if (header.size() == 14) {
        norm = false;
    } else if (header.size() == 18) {
        norm = true;
    } else {
        throw Error(ErrorKind::MalformedFile, "unexpected measure CSV header");
    }
    if (header[0] != "cuer_id" || header[11] != "lvi_source") {
        throw Error(ErrorKind::MalformedFile, "unexpected measure CSV header");
    }
    ++i;

    MeasureTable table;
    for (; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f = split(line, ',');
        if (f.size() != header.size()) {
            throw Error(ErrorKind::MalformedFile,
                        "measure CSV row with " + std::to_string(f.size()) + " fields");
        }
        VowelMeasures r;
        r.cuer_id = f[0];
        r.hearing = hearing_from_name(f[1]);
        r.sentence_id = f[2];
        r.index = static_cast<int>(parse_double(f[3]));
        r.label = f[4];
        r.t_mid = parse_double(f[5]);
        r.T_mid = parse_double(f[6]);
        r.hpt = parse_double(f[7]);
        r.lve = parse_double(f[8]);
        r.lvi = parse_double(f[9]);
        r.lvd = parse_double(f[10]);
        r.lvi_source = lvi_source_from_name(f[11]);
        r.alpha_bar = parse_double(f[12]);
        r.beta_bar = parse_double(f[13]);
        if (norm) {
            r.hpt_z = parse_double(f[14]);
            r.lvd_z = parse_double(f[15]);
            r.lve_log = parse_double(f[16]);
            r.lvi_log = parse_double(f[17]);
        }
        table.rows.push_back(std::move(r));
    }
    return table;
}

} // namespace cuesync
