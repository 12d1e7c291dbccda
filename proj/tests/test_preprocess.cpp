#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "emicast/core.hpp"
#include "emicast/preprocess.hpp"

using namespace emicast;

TEST_CASE("z-scores on [1,1,1,1,100] at threshold 3 flag nothing") {
    // mean 20.8, population SD sqrt(1568.16) = 39.6, z(100) = 79.2/39.6 = 2
    const std::vector<double> series{1, 1, 1, 1, 100};
    auto result = clean_outliers(series, 3.0);
    CHECK(result.flagged.empty());
    CHECK(result.cleaned == series);
    CHECK_FALSE(result.degenerate);

    // independent recomputation of the z-scores
    const double mu = mean_of(series);
    const double sd = population_sd(series);
    CHECK(mu == Catch::Approx(20.8));
    CHECK(sd == Catch::Approx(39.6));
    for (double x : series) CHECK(std::abs((x - mu) / sd) < 3.0);
}

TEST_CASE("constant series is a degenerate no-op") {
    const std::vector<double> series{5, 5, 5};
    auto result = clean_outliers(series, 3.0);
    CHECK(result.cleaned == series);
    CHECK(result.flagged.empty());
    CHECK(result.degenerate);
}

TEST_CASE("an injected spike is flagged and replaced by its left neighbor") {
    std::vector<double> series(100);
    for (std::size_t i = 0; i < series.size(); ++i)
        series[i] = 10.0 + std::sin(static_cast<double>(i) * 0.37);
    const double mu = mean_of(series);
    const double sd = population_sd(series);
    series[60] = mu + 10.0 * sd;

    auto result = clean_outliers(series, 3.0);
    REQUIRE(result.flagged == std::vector<std::size_t>{60});
    CHECK(result.cleaned[60] == series[59]);

    // oracle: independent z computation on the spiked series
    const double mu2 = mean_of(series);
    const double sd2 = population_sd(series);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const bool should_flag = std::abs((series[i] - mu2) / sd2) > 3.0;
        CHECK(should_flag == (i == 60));
    }
}

TEST_CASE("a flagged run collapses onto the last good value") {
    std::vector<double> series(200, 10.0);
    for (std::size_t i = 0; i < series.size(); ++i)
        series[i] += 0.01 * std::sin(static_cast<double>(i));
    series[100] = 500.0;
    series[101] = 600.0;

    auto result = clean_outliers(series, 3.0);
    REQUIRE(result.flagged == std::vector<std::size_t>{100, 101});
    CHECK(result.cleaned[100] == series[99]);
    CHECK(result.cleaned[101] == series[99]); // via the partially cleaned series
}

TEST_CASE("a flagged index 0 takes the first unflagged value") {
    std::vector<double> series(150, 7.0);
    for (std::size_t i = 0; i < series.size(); ++i)
        series[i] += 0.02 * std::cos(static_cast<double>(i) * 1.3);
    series[0] = 900.0;

    auto result = clean_outliers(series, 3.0);
    REQUIRE(result.flagged == std::vector<std::size_t>{0});
    CHECK(result.cleaned[0] == series[1]);
}

TEST_CASE("re-scoring cleaned values against the original moments clears every flag") {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> series(80);
        for (double& v : series) v = 50.0 + rng.uniform(-1.0, 1.0);
        const std::size_t spikes = 1 + static_cast<std::size_t>(rng.below(3));
        for (std::size_t s = 0; s < spikes; ++s)
            series[rng.below(series.size())] = 50.0 + rng.uniform(200.0, 400.0);

        const double mu = mean_of(series);
        const double sd = population_sd(series);
        auto result = clean_outliers(series, 3.0);
        for (std::size_t i : result.flagged)
            CHECK(std::abs((result.cleaned[i] - mu) / sd) <= 3.0);
    }
}

TEST_CASE("clean_outliers validates its preconditions") {
    CHECK_THROWS_AS(clean_outliers({1.0}, 3.0), Error);
    CHECK_THROWS_AS(clean_outliers({1.0, 2.0}, 0.0), Error);
}

TEST_CASE("moving average of a constant is that constant") {
    const std::vector<double> series(20, 3.25);
    for (std::size_t w : {1u, 3u, 7u, 20u}) {
        auto out = moving_average(series, w);
        REQUIRE(out.size() == series.size() - w + 1);
        for (double v : out) CHECK(v == Catch::Approx(3.25).margin(1e-15));
    }
}

TEST_CASE("trailing 7-day average of 1..8 is [4, 5]") {
    auto out = moving_average({1, 2, 3, 4, 5, 6, 7, 8}, 7);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == Catch::Approx(4.0).margin(1e-15)); // 28/7
    CHECK(out[1] == Catch::Approx(5.0).margin(1e-15)); // 35/7
}

TEST_CASE("window 1 is the identity; oversized windows are errors") {
    const std::vector<double> series{2.5, -1.0, 4.0};
    CHECK(moving_average(series, 1) == series);
    CHECK_THROWS_AS(moving_average(series, 4), Error);
    try {
        moving_average(series, 4);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::WindowTooLarge);
    }
}

TEST_CASE("moving average is linear and stays inside the input range") {
    Rng rng(7);
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < 50; ++i) {
        x[i] = rng.uniform(-5, 5);
        y[i] = rng.uniform(-5, 5);
    }
    const double a = 1.7, b = -0.4;
    std::vector<double> combo(50);
    for (std::size_t i = 0; i < 50; ++i) combo[i] = a * x[i] + b * y[i];

    auto ma_combo = moving_average(combo, 7);
    auto ma_x = moving_average(x, 7);
    auto ma_y = moving_average(y, 7);
    for (std::size_t k = 0; k < ma_combo.size(); ++k)
        CHECK(std::abs(ma_combo[k] - (a * ma_x[k] + b * ma_y[k])) <= 1e-12);

    const double lo = *std::min_element(x.begin(), x.end());
    const double hi = *std::max_element(x.begin(), x.end());
    for (double v : ma_x) {
        CHECK(v >= lo - 1e-12);
        CHECK(v <= hi + 1e-12);
    }
}

TEST_CASE("minmax scaling endpoints and degenerate case") {
    auto [scaled, scaler] = minmax_scale({0, 5, 10});
    CHECK(scaled == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(scaler.min == 0.0);
    CHECK(scaler.max == 10.0);
    CHECK_FALSE(scaler.degenerate());

    auto [flat, flat_scaler] = minmax_scale({7, 7});
    CHECK(flat == std::vector<double>{0.5, 0.5});
    CHECK(flat_scaler.degenerate());
    CHECK_THROWS_AS(inverse_scale(flat, flat_scaler), Error);
}

TEST_CASE("inverse_scale endpoints and midpoint") {
    CHECK(inverse_scale({0.0, 1.0}, Scaler{0, 10}) == std::vector<double>{0.0, 10.0});
    CHECK(inverse_scale(std::vector<double>{0.5}, Scaler{2, 4}) == std::vector<double>{3.0});
    CHECK(inverse_scale(0.5, Scaler{2, 4}) == 3.0);
}

TEST_CASE("scale/inverse round trip on a random fixture") {
    Rng rng(99);
    std::vector<double> series(50);
    for (double& v : series) v = rng.uniform(-200, 400);
    auto [scaled, scaler] = minmax_scale(series);
    for (double v : scaled) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    auto back = inverse_scale(scaled, scaler);
    for (std::size_t i = 0; i < series.size(); ++i)
        CHECK(nearly_equal(back[i], series[i], 1e-12));
}

TEST_CASE("make_supervised slides a window of seq_len") {
    auto set = make_supervised({1, 2, 3, 4}, 2);
    REQUIRE(set.size() == 2);
    CHECK(set.inputs(0, 0) == 1);
    CHECK(set.inputs(0, 1) == 2);
    CHECK(set.inputs(1, 0) == 2);
    CHECK(set.inputs(1, 1) == 3);
    CHECK(set.targets == std::vector<double>{3, 4});
}

TEST_CASE("seq_len = n-1 yields exactly one sample") {
    auto set = make_supervised({1, 2, 3, 4, 5}, 4);
    CHECK(set.size() == 1);
    CHECK(set.targets[0] == 5);
    CHECK_THROWS_AS(make_supervised({1, 2, 3}, 3), Error);
}

TEST_CASE("windowing index identities on a 100-point fixture") {
    std::vector<double> series(100);
    for (std::size_t i = 0; i < 100; ++i) series[i] = std::sin(0.21 * static_cast<double>(i));
    auto set = make_supervised(series, 30);
    REQUIRE(set.size() == 70);
    for (int k = 0; k < 70; ++k) {
        for (int j = 0; j < 30; ++j) CHECK(set.inputs(k, j) == series[k + j]);
        CHECK(set.inputs(k, 29) == series[k + 29]);
        CHECK(set.targets[k] == series[k + 30]);
    }
}

TEST_CASE("chronological split preserves order") {
    std::vector<double> series(12);
    for (std::size_t i = 0; i < 12; ++i) series[i] = static_cast<double>(i);
    auto set = make_supervised(series, 2); // 10 samples
    auto [train, test] = train_test_split(set, 0.8);
    CHECK(train.size() == 8);
    CHECK(test.size() == 2);
    CHECK(train.targets.front() == set.targets.front());
    CHECK(test.targets.back() == set.targets.back());

    // concatenating train then test reproduces the original order
    std::vector<double> concat = train.targets;
    concat.insert(concat.end(), test.targets.begin(), test.targets.end());
    CHECK(concat == set.targets);
    for (std::size_t k = 0; k < set.size(); ++k) {
        const SupervisedSet& part = k < train.size() ? train : test;
        const std::size_t local = k < train.size() ? k : k - train.size();
        for (int j = 0; j < set.seq_len; ++j)
            CHECK(part.inputs(static_cast<int>(local), j) == set.inputs(static_cast<int>(k), j));
    }
}

TEST_CASE("two samples split in half; empty partitions are errors") {
    auto set = make_supervised({1, 2, 3, 4}, 2); // 2 samples
    auto [train, test] = train_test_split(set, 0.5);
    CHECK(train.size() == 1);
    CHECK(test.size() == 1);

    auto one = make_supervised({1, 2, 3}, 2); // 1 sample
    CHECK_THROWS_AS(train_test_split(one, 0.5), Error);
    CHECK_THROWS_AS(train_test_split(set, 1.0), Error);
}
