#include "cuesync/error.hpp"
#include "cuesync/normalize.hpp"
#include "cuesync/regression.hpp"
#include "cuesync/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace cuesync;

namespace {

MeasureTable table_with(const std::vector<std::pair<std::string, double>>& cuer_hpt,
                        double lvd = 0.3) {
    MeasureTable t;
    int idx = 0;
    for (const auto& [cuer, hpt] : cuer_hpt) {
        VowelMeasures r;
        r.cuer_id = cuer;
        r.hearing = cuer[0] == 'D' ? Hearing::Deaf : Hearing::Normal;
        r.sentence_id = "s" + std::to_string(idx);
        r.index = 0;
        r.label = "a";
        r.hpt = hpt;
        r.lve = 0.5 + 0.01 * idx;
        r.lvi = 0.4;
        r.lvd = lvd + 0.01 * (idx % 7);
        r.alpha_bar = 0.4;
        r.beta_bar = 0.3;
        t.rows.push_back(std::move(r));
        ++idx;
    }
    return t;
}

} // namespace

TEST_CASE("descriptive stats: population standard deviation") {
    auto t = table_with({{"C1", 0.1}, {"C1", 0.2}, {"C1", 0.3}});
    auto stats = descriptive_stats(t, Grouping::PerCuer);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].mu_hpt == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(stats[0].sigma_hpt == doctest::Approx(0.08164965809277261).epsilon(1e-12));
    CHECK(stats[0].count == 3);
}

TEST_CASE("descriptive stats: row order does not matter") {
    Rng rng(5);
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 200; ++i) rows.push_back({"C1", rng.normal(0.25, 0.1)});
    auto a = descriptive_stats(table_with(rows), Grouping::PerCuer);
    std::reverse(rows.begin(), rows.end());
    auto b = descriptive_stats(table_with(rows), Grouping::PerCuer);
    CHECK(a[0].mu_hpt == doctest::Approx(b[0].mu_hpt).epsilon(1e-12));
    CHECK(a[0].sigma_hpt == doctest::Approx(b[0].sigma_hpt).epsilon(1e-12));
}

TEST_CASE("descriptive stats: error paths") {
    MeasureTable empty;
    CHECK_THROWS_AS(descriptive_stats(empty, Grouping::All), Error);
    auto degenerate = table_with({{"C1", 0.2}, {"C1", 0.2}, {"C1", 0.2}});
    try {
        descriptive_stats(degenerate, Grouping::PerCuer);
        FAIL("expected DegenerateGroup");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateGroup);
    }
}

TEST_CASE("zscore basics") {
    CHECK(zscore(0.242, 0.242, 0.177) == 0.0);
    CHECK(zscore(0.242 + 0.177, 0.242, 0.177) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(zscore(1.0, 0.0, 0.0), Error);
}

TEST_CASE("log_scale: base-10 of seconds") {
    CHECK(log_scale(1.0) == 0.0);
    // 10^(-0.34) sits just above this value, the breakpoint anchor.
    CHECK(log_scale(0.457) == doctest::Approx(-0.34008379993014975).epsilon(1e-12));
    CHECK_THROWS_AS(log_scale(0.0), Error);
    CHECK_THROWS_AS(log_scale(-1.0), Error);

    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        double x1 = rng.uniform(1e-3, 10.0);
        double x2 = x1 + rng.uniform(1e-6, 1.0);
        CHECK(log_scale(x1) < log_scale(x2));
    }
}

TEST_CASE("log_scale inverts exponentiation on [-3, 2]") {
    for (int i = 0; i <= 500; ++i) {
        const double e = -3.0 + 5.0 * i / 500.0;
        CHECK(log_scale(std::pow(10.0, e)) == doctest::Approx(e).epsilon(1e-12));
    }
}

TEST_CASE("normalize_table: per-group z laws") {
    Rng rng(31);
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 500; ++i) rows.push_back({"C1", rng.normal(0.25, 0.08)});
    for (int i = 0; i < 400; ++i) rows.push_back({"C2", rng.normal(0.40, 0.15)});
    auto table = table_with(rows);

    SUBCASE("per-cuer: every cuer's column is standard") {
        NormContext ctx{NormPolicy::PerCuer, descriptive_stats(table, Grouping::PerCuer)};
        auto normalized = normalize_table(table, ctx);
        for (const std::string cuer : {"C1", "C2"}) {
            double sum = 0.0, count = 0.0;
            for (const auto& r : normalized.rows) {
                if (r.cuer_id != cuer) continue;
                sum += *r.hpt_z;
                count += 1.0;
            }
            const double mean = sum / count;
            double ss = 0.0;
            for (const auto& r : normalized.rows) {
                if (r.cuer_id != cuer) continue;
                ss += (*r.hpt_z - mean) * (*r.hpt_z - mean);
            }
            CHECK(std::abs(mean) < 1e-9);
            CHECK(std::abs(std::sqrt(ss / count) - 1.0) < 1e-9);
        }
    }
    SUBCASE("global: pooled mean zero, per-cuer means generally not") {
        NormContext ctx{NormPolicy::Global, descriptive_stats(table, Grouping::All)};
        auto normalized = normalize_table(table, ctx);
        double sum = 0.0, c1_sum = 0.0, c1_n = 0.0;
        for (const auto& r : normalized.rows) {
            sum += *r.hpt_z;
            if (r.cuer_id == "C1") {
                c1_sum += *r.hpt_z;
                c1_n += 1.0;
            }
        }
        CHECK(std::abs(sum / static_cast<double>(normalized.rows.size())) < 1e-9);
        CHECK(std::abs(c1_sum / c1_n) > 0.1); // different cuer mean shows through
    }
    SUBCASE("missing stats") {
        NormContext ctx{NormPolicy::PerCuer, descriptive_stats(table, Grouping::All)};
        try {
            normalize_table(table, ctx);
            FAIL("expected MissingStats");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MissingStats);
        }
    }
}

TEST_CASE("zscore then denormalize is the identity") {
    GroupStats g{"NF1", 0.242, 0.177, 0.338, 0.079, 100};
    Rng rng(13);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.normal(0.242, 0.177);
        CHECK(denormalize_hpt(zscore(x, g.mu_hpt, g.sigma_hpt), g) ==
              doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("pooled groups equal count-weighted pooling of per-cuer stats") {
    Rng rng(77);
    std::vector<std::pair<std::string, double>> rows;
    for (int i = 0; i < 300; ++i) rows.push_back({"NF1", rng.normal(0.242, 0.177)});
    for (int i = 0; i < 200; ++i) rows.push_back({"NF2", rng.normal(0.246, 0.150)});
    for (int i = 0; i < 250; ++i) rows.push_back({"NM1", rng.normal(0.352, 0.137)});
    auto table = table_with(rows);

    auto per_cuer = descriptive_stats(table, Grouping::PerCuer);
    auto pooled = descriptive_stats(table, Grouping::NormalVsDeaf);
    REQUIRE(pooled.size() == 1);
    CHECK(pooled[0].group_key == "NORMAL");

    double n = 0.0, mean = 0.0;
    for (const auto& g : per_cuer) {
        n += static_cast<double>(g.count);
        mean += static_cast<double>(g.count) * g.mu_hpt;
    }
    mean /= n;
    double var = 0.0;
    for (const auto& g : per_cuer) {
        var += static_cast<double>(g.count) *
               (g.sigma_hpt * g.sigma_hpt + (g.mu_hpt - mean) * (g.mu_hpt - mean));
    }
    var /= n;

    CHECK(pooled[0].mu_hpt == doctest::Approx(mean).epsilon(1e-9));
    CHECK(pooled[0].sigma_hpt == doctest::Approx(std::sqrt(var)).epsilon(1e-9));
    CHECK(pooled[0].count == static_cast<long>(n));
}

TEST_CASE("stats CSV mirrors the table layout in milliseconds") {
    auto t = table_with({{"C1", 0.1}, {"C1", 0.2}, {"C1", 0.3}});
    auto stats = descriptive_stats(t, Grouping::PerCuer);
    std::string csv = write_stats_csv(stats);
    CHECK(csv.find("group,mu_hpt_ms,sigma_hpt_ms,mu_lvd_ms,sigma_lvd_ms,syllable_count") == 0);
    CHECK(csv.find("C1,200,82,") != std::string::npos);
}
