#include "cuesync/annot_io.hpp"

#include "cuesync/error.hpp"
#include "cuesync/util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace cuesync {

namespace {

// Just enough XML for EAF: elements, attributes, text, comments and the
// declaration. No namespaces, CDATA or DTDs.
struct XmlNode {
    std::string name;
    std::map<std::string, std::string> attrs;
    std::vector<std::unique_ptr<XmlNode>> children;
    std::string text;

    const XmlNode* child(const std::string& tag) const {
        for (const auto& c : children)
            if (c->name == tag) return c.get();
        return nullptr;
    }
};

[[noreturn]] void malformed(const std::string& why) {
    throw Error(ErrorKind::MalformedFile, "EAF: " + why);
}

std::string decode_entities(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out += s[i];
            continue;
        }
        auto end = s.find(';', i);
        if (end == std::string_view::npos) malformed("unterminated entity");
        std::string_view ent = s.substr(i + 1, end - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else malformed("unknown entity '&" + std::string(ent) + ";'");
        i = end;
    }
    return out;
}

class XmlScanner {
public:
    explicit XmlScanner(std::string_view text) : s_(text) {}

    std::unique_ptr<XmlNode> parse_document() {
        skip_prolog();
        auto root = parse_element();
        skip_misc();
        if (pos_ != s_.size()) malformed("trailing content after root element");
        return root;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    void skip_comment() {
        if (s_.substr(pos_, 4) != "<!--") return;
        auto end = s_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) malformed("unterminated comment");
        pos_ = end + 3;
    }

    void skip_prolog() {
        skip_ws();
        if (s_.substr(pos_, 5) == "<?xml") {
            auto end = s_.find("?>", pos_);
            if (end == std::string_view::npos) malformed("unterminated declaration");
            pos_ = end + 2;
        }
        skip_misc();
    }

    void skip_misc() {
        while (true) {
            skip_ws();
            if (s_.substr(pos_, 4) == "<!--") {
                skip_comment();
            } else {
                break;
            }
        }
    }

    std::string parse_name() {
        std::size_t start = pos_;
        while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                          peek() == '-' || peek() == '.' || peek() == ':')) {
            ++pos_;
        }
        if (pos_ == start) malformed("expected a name");
        return std::string(s_.substr(start, pos_ - start));
    }

    std::unique_ptr<XmlNode> parse_element() {
        if (eof() || peek() != '<') malformed("expected '<'");
        ++pos_;
        auto node = std::make_unique<XmlNode>();
        node->name = parse_name();

        while (true) {
            skip_ws();
            if (eof()) malformed("unterminated tag <" + node->name + ">");
            if (peek() == '/') {
                ++pos_;
                if (eof() || peek() != '>') malformed("bad self-closing tag");
                ++pos_;
                return node; // <tag ... />
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            std::string attr = parse_name();
            skip_ws();
            if (eof() || peek() != '=') malformed("attribute '" + attr + "' without value");
            ++pos_;
            skip_ws();
            if (eof() || (peek() != '"' && peek() != '\'')) malformed("unquoted attribute value");
            char quote = peek();
            ++pos_;
            auto end = s_.find(quote, pos_);
            if (end == std::string_view::npos) malformed("unterminated attribute value");
            node->attrs[attr] = decode_entities(s_.substr(pos_, end - pos_));
            pos_ = end + 1;
        }

        // Content: children and text until the matching close tag.
        while (true) {
            if (eof()) malformed("missing </" + node->name + ">");
            if (peek() == '<') {
                if (s_.substr(pos_, 4) == "<!--") {
                    skip_comment();
                    continue;
                }
                if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '/') {
                    pos_ += 2;
                    std::string close = parse_name();
                    if (close != node->name) {
                        malformed("mismatched </" + close + "> for <" + node->name + ">");
                    }
                    skip_ws();
                    if (eof() || peek() != '>') malformed("bad close tag");
                    ++pos_;
                    return node;
                }
                node->children.push_back(parse_element());
            } else {
                std::size_t start = pos_;
                while (!eof() && peek() != '<') ++pos_;
                node->text += decode_entities(s_.substr(start, pos_ - start));
            }
        }
    }
};

} // namespace

std::vector<AnnotationTier> parse_eaf(std::string_view xml) {
    XmlScanner scanner(xml);
    auto doc = scanner.parse_document();
    if (doc->name != "ANNOTATION_DOCUMENT") malformed("root is not ANNOTATION_DOCUMENT");

    const XmlNode* time_order = doc->child("TIME_ORDER");
    if (!time_order) malformed("missing TIME_ORDER");

    std::map<std::string, double> slots;
    for (const auto& c : time_order->children) {
        if (c->name != "TIME_SLOT") continue;
        auto id = c->attrs.find("TIME_SLOT_ID");
        auto value = c->attrs.find("TIME_VALUE");
        if (id == c->attrs.end() || value == c->attrs.end()) {
            malformed("TIME_SLOT without id or value");
        }
        slots[id->second] = parse_double(value->second) / 1000.0;
    }

    std::vector<AnnotationTier> tiers;
    for (const auto& tier_node : doc->children) {
        if (tier_node->name != "TIER") continue;
        AnnotationTier tier;
        tier.stream = Stream::Hand;
        if (auto it = tier_node->attrs.find("TIER_ID"); it != tier_node->attrs.end()) {
            tier.tier_name = it->second;
        }
        for (const auto& ann : tier_node->children) {
            if (ann->name != "ANNOTATION") continue;
            const XmlNode* alignable = ann->child("ALIGNABLE_ANNOTATION");
            if (!alignable) {
                malformed("non-alignable annotation in tier '" + tier.tier_name + "'");
            }
            auto ref1 = alignable->attrs.find("TIME_SLOT_REF1");
            auto ref2 = alignable->attrs.find("TIME_SLOT_REF2");
            if (ref1 == alignable->attrs.end() || ref2 == alignable->attrs.end()) {
                malformed("alignable annotation without slot refs");
            }
            auto s1 = slots.find(ref1->second);
            auto s2 = slots.find(ref2->second);
            if (s1 == slots.end()) {
                throw Error(ErrorKind::DanglingTimeSlotRef,
                            "undefined time slot '" + ref1->second + "'");
            }
            if (s2 == slots.end()) {
                throw Error(ErrorKind::DanglingTimeSlotRef,
                            "undefined time slot '" + ref2->second + "'");
            }
            std::string label;
            if (const XmlNode* v = alignable->child("ANNOTATION_VALUE")) label = trim(v->text);
            if (label.empty()) continue; // silence
            if (s2->second <= s1->second) {
                throw Error(ErrorKind::NonmonotonicIntervals,
                            "annotation '" + label + "' has end <= start");
            }
            tier.intervals.push_back({s1->second, s2->second, label});
        }
        std::stable_sort(tier.intervals.begin(), tier.intervals.end(),
                         [](const PhoneInterval& a, const PhoneInterval& b) {
                             return a.start < b.start;
                         });
        for (std::size_t i = 1; i < tier.intervals.size(); ++i) {
            if (tier.intervals[i - 1].end > tier.intervals[i].start) {
                throw Error(ErrorKind::NonmonotonicIntervals,
                            "overlapping annotations in tier '" + tier.tier_name + "'");
            }
        }
        tiers.push_back(std::move(tier));
    }
    if (tiers.empty()) malformed("no TIER elements");
    return tiers;
}

namespace {

std::string encode_entities(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

long long to_millis(double seconds) {
    double ms = seconds * 1000.0;
    double rounded = std::round(ms);
    if (std::abs(ms - rounded) > 1e-6) {
        throw Error(ErrorKind::SchemaViolation,
                    "EAF rendering requires millisecond-aligned times, got " +
                        format_double(seconds));
    }
    return static_cast<long long>(rounded);
}

} // namespace

std::string render_eaf(const SentenceTimeline& timeline) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<ANNOTATION_DOCUMENT AUTHOR=\"cuesync\" FORMAT=\"3.0\" VERSION=\"3.0\">\n";
    os << "    <TIME_ORDER>\n";
    for (std::size_t i = 0; i < timeline.hand_vowels.size(); ++i) {
        const auto& v = timeline.hand_vowels[i];
        os << "        <TIME_SLOT TIME_SLOT_ID=\"ts" << (2 * i + 1) << "\" TIME_VALUE=\""
           << to_millis(v.start) << "\"/>\n";
        os << "        <TIME_SLOT TIME_SLOT_ID=\"ts" << (2 * i + 2) << "\" TIME_VALUE=\""
           << to_millis(v.end) << "\"/>\n";
    }
    os << "    </TIME_ORDER>\n";
    os << "    <TIER TIER_ID=\"hand-vowels\">\n";
    for (std::size_t i = 0; i < timeline.hand_vowels.size(); ++i) {
        const auto& v = timeline.hand_vowels[i];
        os << "        <ANNOTATION>\n";
        os << "            <ALIGNABLE_ANNOTATION ANNOTATION_ID=\"a" << (i + 1)
           << "\" TIME_SLOT_REF1=\"ts" << (2 * i + 1) << "\" TIME_SLOT_REF2=\"ts" << (2 * i + 2)
           << "\">\n";
        os << "                <ANNOTATION_VALUE>" << encode_entities(v.label)
           << "</ANNOTATION_VALUE>\n";
        os << "            </ALIGNABLE_ANNOTATION>\n";
        os << "        </ANNOTATION>\n";
    }
    os << "    </TIER>\n";
    os << "</ANNOTATION_DOCUMENT>\n";
    return os.str();
}

} // namespace cuesync
