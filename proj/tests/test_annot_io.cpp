#include "cuesync/annot_io.hpp"
#include "cuesync/config.hpp"
#include "cuesync/error.hpp"
#include "cuesync/synth.hpp"
#include "cuesync/util.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace cuesync;

namespace {

const char* kTextGrid = R"(File type = "ooTextFile"
Object class = "TextGrid"

xmin = 0
xmax = 1.0
tiers? <exists>
size = 1
item []:
    item [1]:
        class = "IntervalTier"
        name = "vowels"
        xmin = 0
        xmax = 1.0
        intervals: size = 3
        intervals [1]:
            xmin = 0.00
            xmax = 0.35
            text = "a"
        intervals [2]:
            xmin = 0.35
            xmax = 0.80
            text = "i"
        intervals [3]:
            xmin = 0.80
            xmax = 1.00
            text = ""
)";

const char* kEaf = R"(<?xml version="1.0" encoding="UTF-8"?>
<ANNOTATION_DOCUMENT AUTHOR="test" VERSION="3.0">
    <TIME_ORDER>
        <TIME_SLOT TIME_SLOT_ID="ts1" TIME_VALUE="0"/>
        <TIME_SLOT TIME_SLOT_ID="ts2" TIME_VALUE="350"/>
        <TIME_SLOT TIME_SLOT_ID="ts3" TIME_VALUE="400"/>
        <TIME_SLOT TIME_SLOT_ID="ts4" TIME_VALUE="780"/>
    </TIME_ORDER>
    <TIER TIER_ID="hand">
        <ANNOTATION>
            <ALIGNABLE_ANNOTATION ANNOTATION_ID="a1" TIME_SLOT_REF1="ts1" TIME_SLOT_REF2="ts2">
                <ANNOTATION_VALUE>a</ANNOTATION_VALUE>
            </ALIGNABLE_ANNOTATION>
        </ANNOTATION>
        <ANNOTATION>
            <ALIGNABLE_ANNOTATION ANNOTATION_ID="a2" TIME_SLOT_REF1="ts3" TIME_SLOT_REF2="ts4">
                <ANNOTATION_VALUE>i</ANNOTATION_VALUE>
            </ALIGNABLE_ANNOTATION>
        </ANNOTATION>
    </TIER>
</ANNOTATION_DOCUMENT>
)";

AnnotationTier tier_of(std::vector<std::string> labels, Stream stream) {
    AnnotationTier t;
    t.stream = stream;
    double cursor = 0.1;
    for (const auto& label : labels) {
        t.intervals.push_back({cursor, cursor + 0.2, label});
        cursor += 0.5;
    }
    return t;
}

} // namespace

TEST_CASE("textgrid: interval tier parses in order, silences dropped") {
    auto tiers = parse_textgrid(kTextGrid);
    REQUIRE(tiers.size() == 1);
    CHECK(tiers[0].tier_name == "vowels");
    CHECK(tiers[0].stream == Stream::Lip);
    REQUIRE(tiers[0].intervals.size() == 2); // the empty-text interval is silence
    CHECK(tiers[0].intervals[0].start == 0.0);
    CHECK(tiers[0].intervals[0].end == 0.35);
    CHECK(tiers[0].intervals[0].label == "a");
    CHECK(tiers[0].intervals[1].label == "i");
}

TEST_CASE("textgrid: malformed inputs") {
    try {
        parse_textgrid("item [1]:\n");
        FAIL("expected MalformedFile");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedFile);
    }
    CHECK_THROWS_AS(parse_textgrid("File type = \"ooTextFile\"\nObject class = \"Pitch\"\n"),
                    Error);

    std::string bad = kTextGrid;
    // xmax <= xmin
    auto pos = bad.find("xmax = 0.35");
    bad.replace(pos, 11, "xmax = 0.00");
    try {
        parse_textgrid(bad);
        FAIL("expected NonmonotonicIntervals");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonmonotonicIntervals);
    }

    // declared interval count disagrees with the blocks present
    std::string unbalanced = kTextGrid;
    pos = unbalanced.find("size = 3", unbalanced.find("intervals:"));
    unbalanced.replace(pos, 8, "size = 4");
    try {
        parse_textgrid(unbalanced);
        FAIL("expected MalformedFile");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedFile);
    }
}

TEST_CASE("textgrid: point tiers are skipped, not fatal") {
    std::string grid = kTextGrid;
    grid += R"(    item [2]:
        class = "TextTier"
        name = "points"
        xmin = 0
        xmax = 1.0
        points: size = 1
        points [1]:
            number = 0.5
            mark = "x"
)";
    auto tiers = parse_textgrid(grid);
    CHECK(tiers.size() == 1);
}

TEST_CASE("eaf: slots resolve to seconds") {
    auto tiers = parse_eaf(kEaf);
    REQUIRE(tiers.size() == 1);
    CHECK(tiers[0].stream == Stream::Hand);
    REQUIRE(tiers[0].intervals.size() == 2);
    // Unit law: exactly the raw slot value over 1000.
    CHECK(tiers[0].intervals[0].start == 0.0);
    CHECK(tiers[0].intervals[0].end == 350.0 / 1000.0);
    CHECK(tiers[0].intervals[0].label == "a");
    CHECK(tiers[0].intervals[1].start == 400.0 / 1000.0);
}

TEST_CASE("eaf: dangling slot reference") {
    std::string bad = kEaf;
    auto pos = bad.find("TIME_SLOT_REF2=\"ts4\"");
    bad.replace(pos, 20, "TIME_SLOT_REF2=\"ts9\"");
    try {
        parse_eaf(bad);
        FAIL("expected DanglingTimeSlotRef");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DanglingTimeSlotRef);
    }
}

TEST_CASE("eaf: malformed xml and non-alignable annotations") {
    CHECK_THROWS_AS(parse_eaf("<ANNOTATION_DOCUMENT>"), Error);
    CHECK_THROWS_AS(parse_eaf("not xml at all"), Error);

    std::string symbolic = kEaf;
    auto pos = symbolic.find("<ALIGNABLE_ANNOTATION");
    symbolic.replace(pos, 21, "<REF_ANNOTATION");
    pos = symbolic.find("</ALIGNABLE_ANNOTATION>");
    symbolic.replace(pos, 23, "</REF_ANNOTATION>");
    try {
        parse_eaf(symbolic);
        FAIL("expected MalformedFile");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedFile);
    }
}

TEST_CASE("align: index-wise pairing and defects") {
    SentenceMeta meta{"s1", "NF1", Hearing::Normal};
    const auto& vowels = default_vowel_labels();

    SUBCASE("happy path") {
        auto t = align_tiers(tier_of({"a", "i", "u"}, Stream::Lip),
                             tier_of({"a", "i", "u"}, Stream::Hand), meta, vowels);
        CHECK(t.size() == 3);
        CHECK(t.sentence_end == t.lip_vowels.back().end);
    }
    SUBCASE("count mismatch") {
        try {
            align_tiers(tier_of({"a", "i", "u"}, Stream::Lip),
                        tier_of({"a", "i"}, Stream::Hand), meta, vowels);
            FAIL("expected CountMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::CountMismatch);
        }
    }
    SUBCASE("label mismatch is reported, not repaired") {
        try {
            align_tiers(tier_of({"a", "i", "u"}, Stream::Lip),
                        tier_of({"a", "u", "i"}, Stream::Hand), meta, vowels);
            FAIL("expected LabelMismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::LabelMismatch);
            CHECK(std::string(e.what()).find("index 1") != std::string::npos);
        }
    }
    SUBCASE("non-vowel labels are counted and ignored") {
        AlignCounts counts;
        auto lip = tier_of({"a", "zh", "i"}, Stream::Lip);
        auto hand = tier_of({"a", "i"}, Stream::Hand);
        auto t = align_tiers(lip, hand, meta, vowels, &counts);
        CHECK(t.size() == 2);
        CHECK(counts.lip_ignored == 1);
        CHECK(counts.hand_ignored == 0);
    }
}

TEST_CASE("landmarks: fps inference and ordering") {
    std::string csv = "time_s,lip_x,lip_y,hand_x,hand_y\n";
    for (int i = 0; i < 30; ++i) {
        csv += format_double(i / 30.0) + ",360,500," + format_double(100.0 + i) + ",200\n";
    }
    HandTrack track = read_landmarks(csv);
    CHECK(track.frames.size() == 30);
    CHECK(track.fps == doctest::Approx(30.0).epsilon(0.01));

    std::string backwards = "time_s,lip_x,lip_y,hand_x,hand_y\n0.1,0,0,0,0\n0.05,0,0,0,0\n";
    try {
        read_landmarks(backwards);
        FAIL("expected NonmonotonicTime");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonmonotonicTime);
    }

    CHECK_THROWS_AS(read_landmarks("wrong,header\n1,2\n"), Error);
}

TEST_CASE("landmarks: write/read round trip is exact") {
    HandTrack track;
    track.fps = 30.0;
    Rng rng(11);
    for (int i = 0; i < 40; ++i) {
        track.frames.push_back({i / 30.0,
                                {360.0, 500.0},
                                {rng.uniform(0, 720), rng.uniform(0, 1280)},
                                i % 3 == 0 ? std::optional<int>(1 + i % 8) : std::nullopt});
    }
    HandTrack back = read_landmarks(write_landmarks(track));
    REQUIRE(back.frames.size() == track.frames.size());
    for (std::size_t i = 0; i < track.frames.size(); ++i) {
        CHECK(back.frames[i].time == track.frames[i].time);
        CHECK(back.frames[i].hand_point.x == track.frames[i].hand_point.x);
        CHECK(back.frames[i].hand_point.y == track.frames[i].hand_point.y);
        CHECK(back.frames[i].hand_shape == track.frames[i].hand_shape);
    }
}

TEST_CASE("canonical: round trip is exact field for field") {
    Rng rng(7);
    for (int k = 0; k < 50; ++k) {
        SentenceTimeline t = testing::random_timeline(rng, "s" + std::to_string(k));
        SentenceTimeline back = read_canonical(write_canonical(t));
        CHECK(back.sentence_id == t.sentence_id);
        CHECK(back.cuer_id == t.cuer_id);
        CHECK(back.hearing == t.hearing);
        CHECK(back.sentence_end == t.sentence_end);
        REQUIRE(back.size() == t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(back.lip_vowels[i].start == t.lip_vowels[i].start);
            CHECK(back.lip_vowels[i].end == t.lip_vowels[i].end);
            CHECK(back.lip_vowels[i].label == t.lip_vowels[i].label);
            CHECK(back.hand_vowels[i].start == t.hand_vowels[i].start);
            CHECK(back.hand_vowels[i].end == t.hand_vowels[i].end);
        }
    }
}

TEST_CASE("canonical: times carry at least six decimals") {
    Rng rng(3);
    SentenceTimeline t = testing::random_timeline(rng, "s0");
    t.lip_vowels[0].start = 0.35; // short decimal, must still be padded
    std::string line = write_canonical(t);
    CHECK(line.find("\"lip_start_s\":0.350000") != std::string::npos);
}

TEST_CASE("canonical: schema violations") {
    try {
        read_canonical(R"({"sentence_id":"s1","cuer_id":"c","sentence_end_s":1.0,"vowels":[]})");
        FAIL("expected SchemaViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SchemaViolation); // hearing missing
    }
    CHECK_THROWS_AS(read_canonical("not json"), Error);
}

TEST_CASE("canonical: corpus re-serialization is byte-identical") {
    Rng rng(21);
    std::vector<SentenceTimeline> corpus;
    for (int k = 0; k < 200; ++k) {
        corpus.push_back(testing::random_timeline(rng, "s" + std::to_string(k)));
    }
    std::string once = write_canonical_corpus(corpus);
    std::string twice = write_canonical_corpus(read_canonical_corpus(once));
    CHECK(once == twice);
}

TEST_CASE("renderings: synth timeline survives TextGrid and EAF exactly") {
    std::vector<CuerProfile> profiles(1);
    profiles[0].cuer_id = "NF1";
    SynthCorpus corpus = gen_corpus(profiles, GroundTruthModel{}, 5, 99);

    for (const auto& t : corpus.timelines) {
        auto lip_tiers = parse_textgrid(render_textgrid(t));
        REQUIRE(lip_tiers.size() == 1);
        REQUIRE(lip_tiers[0].intervals.size() == t.lip_vowels.size());
        for (std::size_t i = 0; i < t.lip_vowels.size(); ++i) {
            CHECK(lip_tiers[0].intervals[i].start == t.lip_vowels[i].start);
            CHECK(lip_tiers[0].intervals[i].end == t.lip_vowels[i].end);
            CHECK(lip_tiers[0].intervals[i].label == t.lip_vowels[i].label);
        }
        auto hand_tiers = parse_eaf(render_eaf(t));
        REQUIRE(hand_tiers.size() == 1);
        REQUIRE(hand_tiers[0].intervals.size() == t.hand_vowels.size());
        for (std::size_t i = 0; i < t.hand_vowels.size(); ++i) {
            CHECK(hand_tiers[0].intervals[i].start == t.hand_vowels[i].start);
            CHECK(hand_tiers[0].intervals[i].end == t.hand_vowels[i].end);
            CHECK(hand_tiers[0].intervals[i].label == t.hand_vowels[i].label);
        }
    }
}

TEST_CASE("renderings: EAF refuses off-grid times") {
    Rng rng(5);
    SentenceTimeline t = testing::random_timeline(rng, "s0");
    t.hand_vowels[0].start += 1e-4; // off the millisecond grid
    CHECK_THROWS_AS(render_eaf(t), Error);
}
