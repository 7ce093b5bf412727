#include "cuesync/annot_io.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <sstream>

namespace cuesync {

namespace {

// Value of a `key = "quoted"` line, with Praat's "" escape for quotes.
std::string quoted_value(const std::string& line) {
    auto first = line.find('"');
    auto last = line.rfind('"');
    if (first == std::string::npos || last <= first) {
        throw Error(ErrorKind::MalformedFile, "expected quoted value in '" + line + "'");
    }
    std::string raw = line.substr(first + 1, last - first - 1);
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '"' && i + 1 < raw.size() && raw[i + 1] == '"') ++i;
        out += raw[i];
    }
    return out;
}

double numeric_value(const std::string& line) {
    auto eq = line.find('=');
    if (eq == std::string::npos) {
        throw Error(ErrorKind::MalformedFile, "expected '=' in '" + line + "'");
    }
    return parse_double(line.substr(eq + 1));
}

struct PendingInterval {
    bool open = false;
    bool has_xmin = false, has_xmax = false, has_text = false;
    double xmin = 0.0, xmax = 0.0;
    std::string text;
};

} // namespace

std::vector<AnnotationTier> parse_textgrid(std::string_view text) {
    std::vector<std::string> lines = split(text, '\n');

    bool saw_file_type = false, saw_object_class = false;
    std::vector<AnnotationTier> tiers;

    bool in_tier = false;        // inside an item of class IntervalTier
    bool skipping_item = false;  // inside a non-interval item (point tiers etc.)
    bool awaiting_class = false; // item opened, class line not yet seen
    long declared_size = -1;
    long seen_intervals = 0;
    PendingInterval pending;
    AnnotationTier current;

    auto commit_interval = [&]() {
        if (!pending.open) return;
        if (!pending.has_xmin || !pending.has_xmax || !pending.has_text) {
            throw Error(ErrorKind::MalformedFile, "incomplete interval block in tier '" +
                                                      current.tier_name + "'");
        }
        if (pending.xmax <= pending.xmin) {
            throw Error(ErrorKind::NonmonotonicIntervals,
                        "interval with xmax <= xmin in tier '" + current.tier_name + "'");
        }
        ++seen_intervals;
        std::string label = trim(pending.text);
        if (!label.empty()) { // empty text marks silence
            if (!current.intervals.empty() && current.intervals.back().end > pending.xmin) {
                throw Error(ErrorKind::NonmonotonicIntervals,
                            "out-of-order intervals in tier '" + current.tier_name + "'");
            }
            current.intervals.push_back({pending.xmin, pending.xmax, label});
        }
        pending = {};
    };

    auto commit_tier = [&]() {
        if (!in_tier) return;
        commit_interval();
        if (declared_size >= 0 && seen_intervals != declared_size) {
            throw Error(ErrorKind::MalformedFile,
                        "tier '" + current.tier_name + "' declares " +
                            std::to_string(declared_size) + " intervals but contains " +
                            std::to_string(seen_intervals));
        }
        tiers.push_back(std::move(current));
        current = {};
        in_tier = false;
        declared_size = -1;
        seen_intervals = 0;
    };

    for (const auto& raw : lines) {
        std::string line = trim(raw);
        if (line.empty()) continue;

        if (starts_with(line, "File type")) {
            if (quoted_value(line) != "ooTextFile") {
                throw Error(ErrorKind::MalformedFile, "not an ooTextFile");
            }
            saw_file_type = true;
            continue;
        }
        if (starts_with(line, "Object class")) {
            if (quoted_value(line) != "TextGrid") {
                throw Error(ErrorKind::MalformedFile, "object class is not TextGrid");
            }
            saw_object_class = true;
            continue;
        }
        if (!saw_file_type || !saw_object_class) {
            // Still in the preamble; tolerate nothing but header lines
            // until both header fields have been seen.
            if (starts_with(line, "item")) {
                throw Error(ErrorKind::MalformedFile, "missing TextGrid header");
            }
            continue;
        }

        if (line == "item []:") continue;

        if (starts_with(line, "item [")) {
            commit_tier();
            skipping_item = false;
            awaiting_class = true;
            continue;
        }

        if (awaiting_class) {
            if (!starts_with(line, "class")) {
                throw Error(ErrorKind::MalformedFile, "item block without class line");
            }
            std::string cls = quoted_value(line);
            awaiting_class = false;
            if (cls == "IntervalTier") {
                in_tier = true;
                current = {};
                current.stream = Stream::Lip;
            } else {
                skipping_item = true; // point tiers and such are out of scope
            }
            continue;
        }
        if (skipping_item) continue;
        if (!in_tier) continue; // global xmin/xmax/size lines

        if (starts_with(line, "name")) {
            current.tier_name = quoted_value(line);
        } else if (starts_with(line, "intervals: size") || starts_with(line, "intervals:size")) {
            declared_size = static_cast<long>(numeric_value(line));
        } else if (starts_with(line, "intervals [")) {
            commit_interval();
            pending.open = true;
        } else if (starts_with(line, "xmin")) {
            if (pending.open) {
                pending.xmin = numeric_value(line);
                pending.has_xmin = true;
            }
        } else if (starts_with(line, "xmax")) {
            if (pending.open) {
                pending.xmax = numeric_value(line);
                pending.has_xmax = true;
            }
        } else if (starts_with(line, "text")) {
            if (!pending.open) {
                throw Error(ErrorKind::MalformedFile, "text line outside interval block");
            }
            pending.text = quoted_value(line);
            pending.has_text = true;
        } else {
            throw Error(ErrorKind::MalformedFile, "unrecognized line '" + line + "'");
        }
    }
    commit_tier();

    if (!saw_file_type || !saw_object_class) {
        throw Error(ErrorKind::MalformedFile, "missing TextGrid header");
    }
    if (tiers.empty()) {
        throw Error(ErrorKind::MalformedFile, "no IntervalTier found");
    }
    return tiers;
}

std::string render_textgrid(const SentenceTimeline& timeline) {
    const auto& vowels = timeline.lip_vowels;
    const double xmax = timeline.sentence_end;

    // Praat tiles the axis: vowel intervals with silence fillers between.
    struct Slot {
        double a, b;
        std::string text;
    };
    std::vector<Slot> slots;
    double cursor = 0.0;
    for (const auto& v : vowels) {
        if (v.start > cursor) slots.push_back({cursor, v.start, ""});
        slots.push_back({v.start, v.end, v.label});
        cursor = v.end;
    }
    if (xmax > cursor) slots.push_back({cursor, xmax, ""});

    std::ostringstream os;
    os << "File type = \"ooTextFile\"\n";
    os << "Object class = \"TextGrid\"\n\n";
    os << "xmin = 0\n";
    os << "xmax = " << format_seconds(xmax) << "\n";
    os << "tiers? <exists>\n";
    os << "size = 1\n";
    os << "item []:\n";
    os << "    item [1]:\n";
    os << "        class = \"IntervalTier\"\n";
    os << "        name = \"vowels\"\n";
    os << "        xmin = 0\n";
    os << "        xmax = " << format_seconds(xmax) << "\n";
    os << "        intervals: size = " << slots.size() << "\n";
    for (std::size_t i = 0; i < slots.size(); ++i) {
        std::string text = slots[i].text;
        std::string escaped;
        for (char c : text) {
            escaped += c;
            if (c == '"') escaped += '"';
        }
        os << "        intervals [" << (i + 1) << "]:\n";
        os << "            xmin = " << format_seconds(slots[i].a) << "\n";
        os << "            xmax = " << format_seconds(slots[i].b) << "\n";
        os << "            text = \"" << escaped << "\"\n";
    }
    return os.str();
}

} // namespace cuesync
