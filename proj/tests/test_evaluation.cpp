#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "spantree/evaluation.hpp"
#include "spantree/rng.hpp"
#include "support/fixtures.hpp"

using namespace spantree;

namespace {

// Brute-force Mann-Whitney statistic over all positive/negative pairs.
double pairwise_auc(const std::vector<ScoredLabel>& scored) {
    long long gt2 = 0;
    long long eq = 0;
    long pos = 0;
    long neg = 0;
    for (const auto& a : scored) {
        if (a.label <= 0) continue;
        ++pos;
        for (const auto& b : scored) {
            if (b.label > 0) continue;
            if (a.score > b.score) gt2 += 1;
            if (a.score == b.score) eq += 1;
        }
    }
    for (const auto& b : scored)
        if (b.label <= 0) ++neg;
    return (2.0 * static_cast<double>(gt2) + static_cast<double>(eq)) /
           (2.0 * static_cast<double>(pos) * static_cast<double>(neg));
}

double trapezoid_area(const std::vector<std::pair<double, double>>& pts) {
    double area = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        area += (pts[i].first - pts[i - 1].first) * (pts[i].second + pts[i - 1].second) / 2.0;
    return area;
}

}  // namespace

TEST_CASE("confusion metrics from the direct formulas") {
    const auto r = compute_metrics({9, 2, 8, 1});
    CHECK(*r.accuracy == doctest::Approx(0.85));
    CHECK(*r.sensitivity == doctest::Approx(0.9));
    CHECK(*r.specificity == doctest::Approx(0.8));
    CHECK(*r.precision == doctest::Approx(9.0 / 11.0));
    CHECK(*r.f1 == doctest::Approx(2.0 * (9.0 / 11.0) * 0.9 / (9.0 / 11.0 + 0.9)));

    const auto perfect = compute_metrics({5, 0, 5, 0});
    CHECK(*perfect.accuracy == 1.0);
    CHECK(*perfect.sensitivity == 1.0);
    CHECK(*perfect.specificity == 1.0);
    CHECK(*perfect.precision == 1.0);
    CHECK(*perfect.f1 == 1.0);
}

TEST_CASE("zero-over-zero metrics are undefined, not zero") {
    // no positive predictions and no positives in truth
    const auto r = compute_metrics({0, 0, 4, 0});
    CHECK_FALSE(r.precision.has_value());
    CHECK_FALSE(r.sensitivity.has_value());
    CHECK_FALSE(r.f1.has_value());
    CHECK(*r.accuracy == 1.0);

    CHECK_THROWS(compute_metrics({0, 0, 0, 0}));
}

TEST_CASE("metrics match a naive recount on random prediction sets") {
    Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(60));
        ConfusionMatrix cm;
        long correct = 0;
        for (int i = 0; i < n; ++i) {
            const int truth = rng.below(2) ? 1 : -1;
            const int guess = rng.below(2) ? 1 : -1;
            if (truth > 0)
                (guess > 0 ? cm.tp : cm.fn) += 1;
            else
                (guess > 0 ? cm.fp : cm.tn) += 1;
            if (truth == guess) ++correct;
        }
        const auto r = compute_metrics(cm);
        CHECK(*r.accuracy ==
              doctest::Approx(static_cast<double>(correct) / n).epsilon(1e-12));
        if (cm.tp + cm.fn > 0)
            CHECK(*r.sensitivity == static_cast<double>(cm.tp) / (cm.tp + cm.fn));
        if (cm.tn + cm.fp > 0)
            CHECK(*r.specificity == static_cast<double>(cm.tn) / (cm.tn + cm.fp));
    }
}

TEST_CASE("auc on hand-checked score sets") {
    const auto perfect =
        roc_auc({{0.9, 1}, {0.8, 1}, {0.2, -1}, {0.1, -1}});
    CHECK(perfect.first == 1.0);

    const auto coin = roc_auc({{0.5, 1}, {0.5, -1}, {0.5, 1}, {0.5, -1}});
    CHECK(coin.first == 0.5);

    // pairs: (0.9>0.5),(0.9>0.1),(0.3<0.5),(0.3>0.1) -> 3/4
    const auto mixed = roc_auc({{0.9, 1}, {0.3, 1}, {0.5, -1}, {0.1, -1}});
    CHECK(mixed.first == doctest::Approx(0.75));

    CHECK_THROWS(roc_auc({{0.5, 1}}));
    CHECK_THROWS(roc_auc({{0.5, 1}, {0.2, 1}}));
}

TEST_CASE("auc equals the brute-force pairwise statistic exactly") {
    Rng rng(31415);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(198));
        std::vector<ScoredLabel> scored;
        bool has_pos = false;
        bool has_neg = false;
        for (int i = 0; i < n; ++i) {
            // quantized scores force plenty of ties
            const double score = static_cast<double>(rng.below(10)) / 10.0;
            const int label = rng.below(2) ? 1 : -1;
            has_pos |= label == 1;
            has_neg |= label == -1;
            scored.push_back({score, label});
        }
        if (!has_pos || !has_neg) continue;
        const auto [auc, points] = roc_auc(scored);
        CHECK(auc == pairwise_auc(scored));  // exact, same integer arithmetic

        // curve invariants
        CHECK(points.front() == std::pair<double, double>{0.0, 0.0});
        CHECK(points.back() == std::pair<double, double>{1.0, 1.0});
        for (std::size_t i = 1; i < points.size(); ++i) {
            CHECK(points[i].first >= points[i - 1].first);
            CHECK(points[i].second >= points[i - 1].second);
        }
        // internal consistency with the trapezoidal area under the curve
        CHECK(std::abs(trapezoid_area(points) - auc) < 1e-9);
    }
}

TEST_CASE("cross-validation on separated blobs is perfect and deterministic") {
    const auto d = testing::make_blobs(30, 101);
    HyperParams p;
    p.seed = 5;
    const auto cv = cross_validate(d, p, 5);
    REQUIRE(cv.folds.size() == 5);
    CHECK(*cv.pooled.accuracy == 1.0);
    CHECK(*cv.pooled.auc == 1.0);
    CHECK(*cv.mean.accuracy == 1.0);
    CHECK(*cv.min.accuracy == 1.0);

    const auto cv2 = cross_validate(d, p, 5);
    CHECK(metrics_csv(d.name, cv) == metrics_csv(d.name, cv2));
}

TEST_CASE("pooled accuracy equals the instance-weighted mean of fold accuracies") {
    // overlapping blobs so fold accuracies differ
    const auto d = testing::make_blobs(23, 103, 2, 2.0);
    HyperParams p;
    p.seed = 9;
    const auto cv = cross_validate(d, p, 5);

    double weighted = 0.0;
    long total = 0;
    for (const auto& f : cv.folds) {
        weighted += *f.metrics.accuracy * static_cast<double>(f.cm.total());
        total += f.cm.total();
    }
    weighted /= static_cast<double>(total);
    CHECK(std::abs(*cv.pooled.accuracy - weighted) < 1e-12);
    CHECK(total == static_cast<long>(d.size()));

    for (const auto& f : cv.folds) {
        CHECK(*cv.min.accuracy <= *f.metrics.accuracy);
        CHECK(*cv.max.accuracy >= *f.metrics.accuracy);
    }
}

TEST_CASE("a constant classifier on a balanced dataset scores 0.5") {
    // All instances share one location, so every comparison ties and every
    // prediction comes out +1; balanced stratified folds then pin accuracy
    // and AUC at exactly one half.
    Dataset d;
    d.feature_count = 2;
    d.name = "degenerate";
    for (int i = 0; i < 30; ++i) d.instances.push_back({{1.0, -2.0}, i % 2 ? -1 : 1, i});
    HyperParams p;
    p.seed = 1;
    const auto cv = cross_validate(d, p, 5);
    for (const auto& f : cv.folds) {
        CHECK(*f.metrics.accuracy == 0.5);
        CHECK(*f.metrics.sensitivity == 1.0);   // everything predicted positive
        CHECK(*f.metrics.specificity == 0.0);
        CHECK(*f.metrics.auc == 0.5);           // all scores equal
    }
    CHECK(*cv.mean.accuracy == 0.5);
    CHECK(*cv.pooled.accuracy == 0.5);
    CHECK(*cv.pooled.auc == 0.5);
}

TEST_CASE("train-ratio sweep reports structure and isolates bad ratios") {
    const auto d = testing::make_blobs(20, 107);
    HyperParams p;
    p.seed = 3;
    const auto rows = train_ratio_sweep(d, p, {0.3, 0.5, 0.8, 0.99});
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(rows[i].ok);
        CHECK(rows[i].mean_accuracy == 1.0);  // separated blobs
        CHECK(rows[i].min_accuracy <= rows[i].mean_accuracy);
        CHECK(rows[i].mean_accuracy <= rows[i].max_accuracy);
    }
    // 0.99 of 40 leaves the test side with no members of one class
    CHECK_FALSE(rows[3].ok);
    CHECK_FALSE(rows[3].error.empty());

    const auto csv = sweep_csv(d.name, rows);
    CHECK(csv.find("error") != std::string::npos);
}

TEST_CASE("report files render undefined metrics explicitly") {
    CrossValidationResult cv;
    FoldReport fr;
    fr.cm = {0, 0, 4, 0};
    fr.metrics = compute_metrics(fr.cm);
    cv.folds.push_back(fr);
    cv.pooled = fr.metrics;
    cv.mean = fr.metrics;
    cv.min = fr.metrics;
    cv.max = fr.metrics;
    const auto csv = metrics_csv("x", cv);
    CHECK(csv.find("undefined") != std::string::npos);
}
