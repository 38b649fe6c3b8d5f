#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "socsim/metrics.hpp"
#include "socsim/rng.hpp"

using namespace socsim;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v[i++] = x;
    return v;
}

/// Sorted-difference closed form for equal-length sample lists.
double w1_sorted_oracle(Eigen::VectorXd a, Eigen::VectorXd b) {
    std::sort(a.data(), a.data() + a.size());
    std::sort(b.data(), b.data() + b.size());
    return (a - b).cwiseAbs().mean();
}

/// Exhaustive warping-path oracle: depth-first over all monotone paths.
double dtw_path_oracle(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    double best = std::numeric_limits<double>::infinity();
    const Eigen::Index m = a.size();
    const Eigen::Index n = b.size();
    const auto walk = [&](auto&& self, Eigen::Index i, Eigen::Index j, double cost) -> void {
        cost += std::abs(a[i] - b[j]);
        if (cost >= best) return;
        if (i == m - 1 && j == n - 1) {
            best = cost;
            return;
        }
        if (i + 1 < m && j + 1 < n) self(self, i + 1, j + 1, cost);
        if (i + 1 < m) self(self, i + 1, j, cost);
        if (j + 1 < n) self(self, i, j + 1, cost);
    };
    walk(walk, 0, 0, 0.0);
    return best;
}

Trajectory toy_trajectory(std::initializer_list<EngagementVector> days) {
    Trajectory trajectory;
    trajectory.engagement = days;
    return trajectory;
}

} // namespace

TEST_CASE("wasserstein1 basics") {
    CHECK(wasserstein1(vec({1, 2, 3}), vec({1, 2, 3})) == doctest::Approx(0.0));
    CHECK(wasserstein1(vec({0, 1}), vec({0.5, 0.5})) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(wasserstein1(vec({5}), vec({5, 5, 5})) == doctest::Approx(0.0));
    CHECK_THROWS_AS(wasserstein1(Eigen::VectorXd(), vec({1})), EmptyInput);
}

TEST_CASE("wasserstein1 equals the sorted closed form on equal lengths") {
    Rng rng(314);
    for (int round = 0; round < 200; ++round) {
        const auto n = static_cast<Eigen::Index>(1 + rng.next_u64() % 20);
        Eigen::VectorXd a(n), b(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            a[i] = rng.uniform(-5.0, 5.0);
            b[i] = rng.uniform(-5.0, 5.0);
        }
        CHECK(std::abs(wasserstein1(a, b) - w1_sorted_oracle(a, b)) <= 1e-12);
    }
}

TEST_CASE("wasserstein1 is a metric on random triples") {
    Rng rng(2718);
    for (int round = 0; round < 500; ++round) {
        auto sample = [&](Eigen::Index n) {
            Eigen::VectorXd v(n);
            for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.uniform(0.0, 1.0);
            return v;
        };
        const auto a = sample(static_cast<Eigen::Index>(1 + rng.next_u64() % 8));
        const auto b = sample(static_cast<Eigen::Index>(1 + rng.next_u64() % 8));
        const auto c = sample(static_cast<Eigen::Index>(1 + rng.next_u64() % 8));
        const double ab = wasserstein1(a, b);
        const double ba = wasserstein1(b, a);
        const double ac = wasserstein1(a, c);
        const double cb = wasserstein1(c, b);
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - ba) <= 1e-12);
        CHECK(ab <= ac + cb + 1e-9);
    }
}

TEST_CASE("fidelity bands have hard boundaries at 0.15 and 0.35") {
    CHECK(classify_w1(0.1159) == FidelityBand::HighFidelity);
    CHECK(classify_w1(0.1499) == FidelityBand::HighFidelity);
    CHECK(classify_w1(0.15) == FidelityBand::Moderate);
    CHECK(classify_w1(0.35) == FidelityBand::Moderate);
    CHECK(classify_w1(0.36) == FidelityBand::Mismatch);
}

TEST_CASE("mape over four-component engagement vectors") {
    const auto actual = toy_trajectory({{100, 50, 20, 10}});
    SUBCASE("identity") {
        CHECK(mape(actual.engagement, actual.engagement) == doctest::Approx(0.0));
    }
    SUBCASE("uniform ten percent error") {
        const auto predicted = toy_trajectory({{110, 55, 22, 11}});
        CHECK(mape(predicted.engagement, actual.engagement) ==
              doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("mean over timesteps and components") {
        // step one +10% everywhere, step two +20% everywhere -> 15%
        const auto two_actual = toy_trajectory({{100, 50, 20, 10}, {100, 50, 20, 10}});
        const auto two_pred = toy_trajectory({{110, 55, 22, 11}, {120, 60, 24, 12}});
        CHECK(mape(two_pred.engagement, two_actual.engagement) ==
              doctest::Approx(15.0).epsilon(1e-12));
    }
    SUBCASE("scaling predictions by 1+delta yields 100*|delta|") {
        Rng rng(5);
        for (int round = 0; round < 50; ++round) {
            const double delta = rng.uniform(-0.5, 0.5);
            std::vector<EngagementVector> actual_series;
            std::vector<EngagementVector> predicted;
            for (int t = 0; t < 4; ++t) {
                EngagementVector day{rng.uniform(1.0, 100.0), rng.uniform(1.0, 100.0),
                                     rng.uniform(1.0, 100.0), rng.uniform(1.0, 100.0)};
                actual_series.push_back(day);
                predicted.push_back({day.views * (1 + delta), day.likes * (1 + delta),
                                     day.comments * (1 + delta), day.shares * (1 + delta)});
            }
            CHECK(mape(predicted, actual_series) ==
                  doctest::Approx(100.0 * std::abs(delta)).epsilon(1e-9));
        }
    }
    SUBCASE("zero reference components are skipped and counted") {
        const auto zero_actual = toy_trajectory({{100, 0, 20, 0}});
        const auto predicted = toy_trajectory({{110, 99, 22, 99}});
        std::int64_t skipped = 0;
        CHECK(mape(predicted.engagement, zero_actual.engagement, &skipped) ==
              doctest::Approx(10.0));
        CHECK(skipped == 2);
    }
    SUBCASE("all-zero reference is an error") {
        const auto zeros = toy_trajectory({{0, 0, 0, 0}});
        const auto predicted = toy_trajectory({{1, 1, 1, 1}});
        CHECK_THROWS_AS(mape(predicted.engagement, zeros.engagement), AllComponentsSkipped);
    }
    SUBCASE("length mismatch is an error") {
        const auto longer = toy_trajectory({{1, 1, 1, 1}, {2, 2, 2, 2}});
        CHECK_THROWS_AS(mape(longer.engagement, actual.engagement), LengthMismatch);
    }
}

TEST_CASE("dtw basics") {
    CHECK(dtw(vec({1, 2, 3}), vec({1, 2, 3})) == doctest::Approx(0.0));
    CHECK(dtw(vec({1, 2, 3}), vec({2, 3, 4})) == doctest::Approx(2.0));
    CHECK(dtw(vec({5}), vec({5, 5, 5})) == doctest::Approx(0.0));
    CHECK_THROWS_AS(dtw(Eigen::VectorXd(), vec({1})), EmptyInput);
}

TEST_CASE("dtw matches the exhaustive path oracle on sampled short series") {
    Rng rng(99);
    for (int round = 0; round < 300; ++round) {
        const auto m = static_cast<Eigen::Index>(1 + rng.next_u64() % 5);
        const auto n = static_cast<Eigen::Index>(1 + rng.next_u64() % 5);
        Eigen::VectorXd a(m), b(n);
        for (Eigen::Index i = 0; i < m; ++i) a[i] = static_cast<double>(rng.next_u64() % 4);
        for (Eigen::Index j = 0; j < n; ++j) b[j] = static_cast<double>(rng.next_u64() % 4);
        CHECK(dtw(a, b) == doctest::Approx(dtw_path_oracle(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("dtw is bounded by the pointwise distance on equal lengths") {
    Rng rng(123);
    for (int round = 0; round < 200; ++round) {
        const auto n = static_cast<Eigen::Index>(1 + rng.next_u64() % 10);
        Eigen::VectorXd a(n), b(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            a[i] = rng.uniform(0.0, 10.0);
            b[i] = rng.uniform(0.0, 10.0);
        }
        CHECK(dtw(a, b) <= (a - b).cwiseAbs().sum() + 1e-12);
    }
}

TEST_CASE("zscore reproducibility statistic") {
    CHECK(zscore_reproducibility({10, 10, 10}) == doctest::Approx(0.0));
    CHECK(zscore_reproducibility({9, 10, 11}) ==
          doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));
    CHECK(zscore_reproducibility({9, 10, 11}) < 1.2247449);
    CHECK(zscore_reproducibility({9, 10, 11}) > 1.2247448);
    CHECK_THROWS_AS(zscore_reproducibility({1.0}), TooFewRuns);
}

TEST_CASE("evaluate composes the metric suite") {
    const auto reference =
        toy_trajectory({{100, 10, 5, 2}, {200, 20, 10, 4}, {150, 15, 7, 3}});

    SUBCASE("a trajectory against itself is all zeros") {
        const auto report = evaluate(reference, reference);
        CHECK(report.w1 == doctest::Approx(0.0));
        CHECK(report.mape_percent == doctest::Approx(0.0));
        CHECK(report.dtw == doctest::Approx(0.0));
        CHECK(report.w1_band == FidelityBand::HighFidelity);
        CHECK_FALSE(report.zscore_max_abs.has_value());
    }
    SUBCASE("identical repeats give zero zscore") {
        const auto report = evaluate(reference, reference, {reference, reference, reference});
        REQUIRE(report.zscore_max_abs.has_value());
        CHECK(*report.zscore_max_abs == doctest::Approx(0.0));
        CHECK(report.run_dtw.size() == 4);
    }
    SUBCASE("horizon mismatch is an error") {
        const auto shorter = toy_trajectory({{1, 1, 1, 1}});
        CHECK_THROWS_AS(evaluate(shorter, reference), HorizonMismatch);
    }
    SUBCASE("report values stay finite on differing trajectories") {
        const auto simulated =
            toy_trajectory({{120, 12, 6, 2}, {180, 18, 9, 4}, {160, 14, 8, 3}});
        const auto report = evaluate(simulated, reference, {simulated});
        CHECK(std::isfinite(report.w1));
        CHECK(std::isfinite(report.mape_percent));
        CHECK(std::isfinite(report.dtw));
        CHECK(std::isfinite(*report.zscore_max_abs));
    }
}

TEST_CASE("min-max normalization maps to the unit interval") {
    const auto normalized = min_max_normalize(vec({2, 4, 6}));
    CHECK(normalized[0] == doctest::Approx(0.0));
    CHECK(normalized[1] == doctest::Approx(0.5));
    CHECK(normalized[2] == doctest::Approx(1.0));
    CHECK(min_max_normalize(vec({3, 3, 3})).isZero());
}
