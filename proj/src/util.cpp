#include "cuesync/util.hpp"

#include "cuesync/error.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>

namespace cuesync {

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_seconds(double value) {
    char buf[512];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed);
    std::string s(buf, res.ptr);
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        s += ".000000";
    } else {
        std::size_t frac = s.size() - dot - 1;
        if (frac < 6) s.append(6 - frac, '0');
    }
    return s;
}

double parse_double(std::string_view text) {
    std::string t = trim(text);
    if (t.empty()) throw Error(ErrorKind::MalformedFile, "empty numeric field");
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size()) {
        throw Error(ErrorKind::MalformedFile, "bad numeric value '" + t + "'");
    }
    return v;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.emplace_back(s.substr(pos));
            break;
        }
        out.emplace_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

bool starts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && s.substr(0, prefix.size()) == prefix;
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace cuesync
