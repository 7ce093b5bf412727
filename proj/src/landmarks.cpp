#include "cuesync/annot_io.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <algorithm>
#include <sstream>

namespace cuesync {

HandTrack read_landmarks(std::string_view csv) {
    std::vector<std::string> lines = split(csv, '\n');
    std::size_t i = 0;
    while (i < lines.size() && (trim(lines[i]).empty() || trim(lines[i])[0] == '#')) ++i;
    if (i >= lines.size()) throw Error(ErrorKind::MalformedFile, "landmark CSV is empty");

    std::vector<std::string> header = split(trim(lines[i]), ',');
    bool with_shape = false;
    const std::vector<std::string> base = {"time_s", "lip_x", "lip_y", "hand_x", "hand_y"};
    if (header.size() == 6 && trim(header[5]) == "shape") {
        with_shape = true;
    } else if (header.size() != 5) {
        throw Error(ErrorKind::MalformedFile, "unexpected landmark CSV header");
    }
    for (std::size_t k = 0; k < 5; ++k) {
        if (trim(header[k]) != base[k]) {
            throw Error(ErrorKind::MalformedFile,
                        "unexpected landmark CSV column '" + trim(header[k]) + "'");
        }
    }
    ++i;

    HandTrack track;
    for (; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields = split(line, ',');
        if (fields.size() != (with_shape ? 6u : 5u)) {
            throw Error(ErrorKind::MalformedFile,
                        "landmark CSV row with " + std::to_string(fields.size()) + " fields");
        }
        TrackFrame frame;
        frame.time = parse_double(fields[0]);
        frame.lip_center = {parse_double(fields[1]), parse_double(fields[2])};
        frame.hand_point = {parse_double(fields[3]), parse_double(fields[4])};
        if (with_shape && !trim(fields[5]).empty()) {
            int shape = static_cast<int>(parse_double(fields[5]));
            if (shape < 1 || shape > 8) {
                throw Error(ErrorKind::MalformedFile,
                            "hand shape out of range: " + trim(fields[5]));
            }
            frame.hand_shape = shape;
        }
        if (!track.frames.empty() && frame.time <= track.frames.back().time) {
            throw Error(ErrorKind::NonmonotonicTime,
                        "frame time " + format_double(frame.time) + " does not increase");
        }
        track.frames.push_back(frame);
    }
    if (track.frames.size() < 2) {
        throw Error(ErrorKind::MalformedFile, "landmark CSV needs at least two frames");
    }

    std::vector<double> gaps;
    gaps.reserve(track.frames.size() - 1);
    for (std::size_t k = 1; k < track.frames.size(); ++k) {
        gaps.push_back(track.frames[k].time - track.frames[k - 1].time);
    }
    std::vector<double> sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    double median = sorted[sorted.size() / 2];
    for (double g : gaps) {
        if (g < 0.9 * median || g > 1.1 * median) {
            throw Error(ErrorKind::MalformedFile,
                        "irregular frame spacing: gap " + format_double(g) + " vs median " +
                            format_double(median));
        }
    }
    track.fps = 1.0 / median;
    return track;
}

std::string write_landmarks(const HandTrack& track) {
    bool with_shape = false;
    for (const auto& f : track.frames) {
        if (f.hand_shape) with_shape = true;
    }
    std::ostringstream os;
    os << "time_s,lip_x,lip_y,hand_x,hand_y";
    if (with_shape) os << ",shape";
    os << "\n";
    for (const auto& f : track.frames) {
        os << format_double(f.time) << ',' << format_double(f.lip_center.x) << ','
           << format_double(f.lip_center.y) << ',' << format_double(f.hand_point.x) << ','
           << format_double(f.hand_point.y);
        if (with_shape) {
            os << ',';
            if (f.hand_shape) os << *f.hand_shape;
        }
        os << "\n";
    }
    return os.str();
}

} // namespace cuesync
