#include "cuesync/error.hpp"
#include "cuesync/normalize.hpp"
#include "cuesync/regression.hpp"
#include "cuesync/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace cuesync;

namespace {

// Normalized rows with prescribed (lve_log, lvi_log, lvd_z, hpt_z).
VowelMeasures norm_row(double lve_log, double lvi_log, double lvd_z, double hpt_z,
                       const std::string& cuer = "C1") {
    VowelMeasures r;
    r.cuer_id = cuer;
    r.sentence_id = "s";
    r.label = "a";
    r.lve = std::pow(10.0, lve_log);
    r.lvi = std::pow(10.0, lvi_log);
    r.lvd = 0.338 + 0.079 * lvd_z;
    r.hpt = 0.242 + 0.177 * hpt_z;
    r.alpha_bar = 0.5;
    r.beta_bar = 0.35;
    r.lve_log = lve_log;
    r.lvi_log = lvi_log;
    r.lvd_z = lvd_z;
    r.hpt_z = hpt_z;
    return r;
}

NormContext nf1_context() {
    return {NormPolicy::PerCuer, {{"C1", 0.242, 0.177, 0.338, 0.079, 100}}};
}

} // namespace

TEST_CASE("ols: exact small fits") {
    auto two = ols_fit({{0, 1}, {1, 3}});
    CHECK(two.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(two.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(two.residual_mse == doctest::Approx(0.0));

    auto line = ols_fit({{0, 0}, {1, 1}, {2, 2}});
    CHECK(line.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(line.intercept == doctest::Approx(0.0));
    CHECK(line.n == 3);
}

TEST_CASE("ols: error paths") {
    CHECK_THROWS_AS(ols_fit({{0, 1}}), Error);
    try {
        ols_fit({{1, 0}, {1, 1}, {1, 2}});
        FAIL("expected DegenerateDesign");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateDesign);
    }
}

TEST_CASE("ols: Monte-Carlo recovery of a noisy line") {
    Rng rng(2024);
    std::vector<Point> points;
    points.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(-1.0, 1.0);
        points.push_back({x, 0.8 * x - 0.1 + rng.normal(0.0, 0.05)});
    }
    auto m = ols_fit(points);
    CHECK(std::abs(m.slope - 0.8) < 0.01);
    CHECK(std::abs(m.intercept + 0.1) < 0.01);
    CHECK(m.residual_mse == doctest::Approx(0.0025).epsilon(0.1));
}

TEST_CASE("ols: normal equations hold for every fit") {
    Rng rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Point> points;
        const int n = 10 + static_cast<int>(rng.uniform_index(200));
        for (int i = 0; i < n; ++i) {
            points.push_back({rng.uniform(-3, 3), rng.uniform(-3, 3)});
        }
        auto m = ols_fit(points);
        double sr = 0.0, srx = 0.0;
        for (const auto& p : points) {
            const double r = p.y - m(p.x);
            sr += r;
            srx += r * p.x;
        }
        CHECK(std::abs(sr) < 1e-9 * n);
        CHECK(std::abs(srx) < 1e-9 * n);
    }
}

TEST_CASE("fit_f0: two-piece recovery around the breakpoint") {
    const double gamma = -0.34;
    Rng rng(88);
    std::vector<VowelMeasures> storage;
    for (int i = 0; i < 4000; ++i) {
        const double d = rng.uniform(-1.2, 0.4);
        const double y = d <= gamma ? 3.0 * d + 1.0 + rng.normal(0, 0.1)
                                    : 0.2 * d - 0.05 + rng.normal(0, 0.1);
        storage.push_back(norm_row(d, -0.3, 0.0, y));
    }
    std::vector<const VowelMeasures*> rows;
    for (const auto& r : storage) rows.push_back(&r);

    auto m = fit_f0(rows, gamma);
    CHECK(std::abs(m.left.slope - 3.0) < 0.05);
    CHECK(std::abs(m.left.intercept - 1.0) < 0.03);
    CHECK(std::abs(m.right.slope - 0.2) < 0.05);
    CHECK(std::abs(m.right.intercept + 0.05) < 0.02);

    SUBCASE("gamma below the data leaves a side empty") {
        try {
            fit_f0(rows, -5.0);
            FAIL("expected EmptySide");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::EmptySide);
        }
    }
    SUBCASE("grid search lands near the generating breakpoint") {
        MeasureTable table;
        table.rows = storage;
        CHECK(std::abs(grid_search_gamma(table, Subset::All) - gamma) <= 0.05);
    }
}

TEST_CASE("fit_f0: single global line fits both sides alike") {
    Rng rng(12);
    std::vector<VowelMeasures> storage;
    for (int i = 0; i < 6000; ++i) {
        const double d = rng.uniform(-1.2, 0.4);
        storage.push_back(norm_row(d, -0.3, 0.0, 1.5 * d + 0.3 + rng.normal(0, 0.05)));
    }
    std::vector<const VowelMeasures*> rows;
    for (const auto& r : storage) rows.push_back(&r);
    auto m = fit_f0(rows, -0.34);
    CHECK(std::abs(m.left.slope - m.right.slope) < 0.06);
}

TEST_CASE("lambda weights") {
    auto [l1, l2] = lambda_weights(0.5, 0.35, 0.5, 0.35);
    CHECK(l1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(l2 == doctest::Approx(0.5).epsilon(1e-12));

    auto [m1, m2] = lambda_weights(1.0, 0.35, 0.5, 0.35);
    CHECK(m1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(lambda_weights(0.0, 1, 1, 1), Error);
    CHECK_THROWS_AS(lambda_weights(1, -1, 1, 1), Error);
}

TEST_CASE("lambda weights: closure and range over random inputs") {
    Rng rng(404);
    for (int i = 0; i < 100000; ++i) {
        const double a = rng.uniform(1e-4, 5.0);
        const double b = rng.uniform(1e-4, 5.0);
        const double ab = rng.uniform(1e-4, 5.0);
        const double bb = rng.uniform(1e-4, 5.0);
        auto [l1, l2] = lambda_weights(a, b, ab, bb);
        CHECK(std::abs(l1 + l2 - 1.0) <= 1e-12);
        CHECK(l1 > 0.0);
        CHECK(l1 < 1.0);
        CHECK(l2 > 0.0);
        CHECK(l2 < 1.0);
    }
}

TEST_CASE("lambda weights: monotonicity") {
    Rng rng(405);
    for (int i = 0; i < 10000; ++i) {
        const double b = rng.uniform(0.1, 1.0);
        const double ab = rng.uniform(0.1, 1.0);
        const double bb = rng.uniform(0.1, 1.0);
        const double a1 = rng.uniform(0.1, 2.0);
        const double a2 = a1 + rng.uniform(1e-3, 1.0);
        CHECK(lambda_weights(a2, b, ab, bb).first > lambda_weights(a1, b, ab, bb).first);

        const double a = rng.uniform(0.1, 2.0);
        const double b1 = rng.uniform(0.1, 1.0);
        const double b2 = b1 + rng.uniform(1e-3, 1.0);
        CHECK(lambda_weights(a, b2, ab, bb).first < lambda_weights(a, b1, ab, bb).first);
    }
}

TEST_CASE("predict: branch rules of the combined model") {
    HptPredictor p;
    p.variant = Variant::Combined;
    p.gamma = -0.34;
    p.f0 = PiecewiseLveModel{-0.34, {3.5, 1.2}, {0.15, 0.05}};
    p.f1 = LinearModel{6.0, 1.2};
    p.f2 = LinearModel{0.55, 0.02};
    p.norm_context = nf1_context();

    SUBCASE("boundary belongs to the lve branch") {
        auto row = norm_row(-0.34, -0.3, 0.5, 0.0);
        CHECK(predict_hpt_norm(p, row) ==
              doctest::Approx(3.5 * -0.34 + 1.2).epsilon(1e-12));
    }
    SUBCASE("equal weights average f1 and f2") {
        auto row = norm_row(0.2, -0.3, 0.5, 0.0);
        row.lvi = row.alpha_bar; // alpha at the sentence mean
        row.lvd = row.beta_bar;
        const double f1v = 6.0 * -0.3 + 1.2;
        const double f2v = 0.55 * 0.5 + 0.02;
        CHECK(predict_hpt_norm(p, row) == doctest::Approx((f1v + f2v) / 2).epsilon(1e-12));
    }
    SUBCASE("singleton rows use the duration branch only") {
        auto row = norm_row(0.2, -0.3, 0.5, 0.0);
        row.lvi_source = LviSource::ImputedSingleton;
        CHECK(predict_hpt_norm(p, row) == doctest::Approx(0.55 * 0.5 + 0.02).epsilon(1e-12));
    }
    SUBCASE("lve-only equals combined left of gamma") {
        HptPredictor lve = p;
        lve.variant = Variant::LveOnly;
        Rng rng(3);
        for (int i = 0; i < 500; ++i) {
            const double d = rng.uniform(-1.5, -0.34);
            auto row = norm_row(d, rng.uniform(-0.5, 0), rng.normal(), 0.0);
            CHECK(predict_hpt_norm(lve, row) == predict_hpt_norm(p, row));
        }
    }
}

TEST_CASE("predict: baselines") {
    HptPredictor mean;
    mean.variant = Variant::MeanBased;
    mean.norm_context = nf1_context();
    auto row = norm_row(0.1, -0.3, 0.2, 1.3);
    CHECK(predict_hpt_norm(mean, row) == 0.0);
    CHECK(predict_hpt_seconds(mean, row) == doctest::Approx(0.242).epsilon(1e-12));

    HptPredictor audio;
    audio.variant = Variant::AudioBased;
    audio.norm_context = nf1_context();
    CHECK(predict_hpt_norm(audio, row) == doctest::Approx(-0.242 / 0.177).epsilon(1e-12));
    // An audio-based prediction means no hand lead at all.
    CHECK(predict_hpt_seconds(audio, row) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("predict: unfitted predictors are rejected") {
    HptPredictor p;
    p.variant = Variant::Combined;
    p.norm_context = nf1_context();
    auto row = norm_row(0.1, -0.3, 0.2, 0.0);
    try {
        predict_hpt_norm(p, row);
        FAIL("expected UnfittedPredictor");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnfittedPredictor);
    }
}

TEST_CASE("denormalize: table-1 anchors") {
    GroupStats nf1{"NF1", 0.242, 0.177, 0.338, 0.079, 10556};
    CHECK(denormalize_hpt(0.0, nf1) == doctest::Approx(0.242).epsilon(1e-12));
    CHECK(denormalize_hpt(1.0, nf1) == doctest::Approx(0.419).epsilon(1e-12));
    CHECK(predict_hand_instant(1.0, 0.242) == doctest::Approx(0.758).epsilon(1e-12));
}

TEST_CASE("predictor JSON reloads to bit-identical predictions") {
    HptPredictor p;
    p.variant = Variant::Combined;
    p.fit_subset = Subset::Normal;
    p.gamma = -0.34;
    p.f0 = PiecewiseLveModel{-0.34, {3.51234567891234, 1.2000000001, 100, 0.09},
                             {0.15, 0.05, 2000, 0.3}};
    p.f1 = LinearModel{6.000000123, 1.2, 2000, 0.1};
    p.f2 = LinearModel{0.55, 0.02, 2000, 0.1};
    p.norm_context = nf1_context();

    HptPredictor back = predictor_from_json(predictor_to_json(p, "deadbeef"));
    Rng rng(1);
    for (int i = 0; i < 300; ++i) {
        auto row = norm_row(rng.uniform(-1.5, 0.4), rng.uniform(-0.6, 0.1), rng.normal(), 0.0);
        CHECK(predict_hpt_norm(back, row) == predict_hpt_norm(p, row));
        CHECK(predict_hpt_seconds(back, row) == predict_hpt_seconds(p, row));
    }
    CHECK_THROWS_AS(predictor_from_json("{}"), Error);
}

TEST_CASE("fit_predictor: subset selection and empty groups") {
    MeasureTable table;
    Rng rng(55);
    for (int i = 0; i < 200; ++i) {
        auto row = norm_row(rng.uniform(-1.0, 0.3), rng.uniform(-0.6, 0.1), rng.normal(),
                            rng.normal());
        row.sentence_id = "s" + std::to_string(i);
        table.rows.push_back(row);
    }
    NormContext ctx = nf1_context();
    try {
        fit_predictor(table, ctx, Subset::Deaf, Variant::Combined, -0.34);
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyGroup);
    }
    auto p = fit_predictor(table, ctx, Subset::All, Variant::Combined, -0.34);
    CHECK(p.f0.has_value());
    CHECK(p.f1.has_value());
    CHECK(p.f2.has_value());
    auto audio = fit_predictor(table, ctx, Subset::All, Variant::AudioBased, -0.34);
    CHECK(!audio.f0.has_value());
    CHECK(!audio.f1.has_value());
}
