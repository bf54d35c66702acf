#include "fbmlab/compensator.hpp"

#include "fbmlab/engine.hpp"
#include "fbmlab/models.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

using namespace fbmlab;

namespace {

GaussianIncrementModel model(double h, std::size_t k, double horizon = 1.0) {
    return GaussianIncrementModel(HurstIndex(h), uniform_partition(horizon, k));
}

}  // namespace

TEST_CASE("discrete paths start at zero and match the grid") {
    const Partition part = uniform_partition(1.0, 4);
    CHECK_THROWS_AS(DiscretePath(part, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(DiscretePath(part, {0.5, 1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
    const DiscretePath p(part, {0.0, 1.0, 0.5, 0.5, 2.0});
    CHECK(p.values.size() == 5);
}

TEST_CASE("zero weights give a zero compensator") {
    const auto [w, profile] = predictor_weights(model(0.5, 8));
    const std::vector<double> dx{1.0, -2.0, 0.5, 0.25, -1.0, 3.0, 0.0, 1.5};
    std::vector<double> da(8);
    compensator_increments(w, dx, da);
    for (double v : da) CHECK(v == 0.0);
}

TEST_CASE("compensator increments at k = 2 reduce to one regression weight") {
    const auto [w, profile] = weights_levinson(model(0.75, 2).stationary_autocovariances());
    const std::vector<double> dx{0.7, -0.3};
    std::vector<double> da(2);
    compensator_increments(w, dx, da);
    CHECK(da[0] == 0.0);  // the first increment has an empty past
    CHECK(da[1] == w.at(1, 0) * dx[0]);
}

TEST_CASE("decomposition bookkeeping is exact") {
    const Partition part = uniform_partition(1.0, 16);
    const GaussianIncrementModel m = model(0.75, 16);
    const auto [w, profile] = predictor_weights(m);
    const PathSampler sampler(factorize_toeplitz(m.stationary_autocovariances()), 5);

    std::vector<double> dx(16), values(17, 0.0);
    sampler.sample(0, dx);
    for (std::size_t i = 0; i < 16; ++i) values[i + 1] = values[i] + dx[i];

    const DecompositionPath d = compensator_path(w, DiscretePath(part, values));
    REQUIRE(d.x.values.size() == 17);
    REQUIRE(d.a.size() == 17);
    REQUIRE(d.m.size() == 17);
    CHECK(d.a[0] == 0.0);
    CHECK(d.a[1] == 0.0);  // the first increment has an empty past
    CHECK(d.m[0] == 0.0);
    for (std::size_t i = 0; i < 17; ++i) {
        CHECK(d.x.values[i] == values[i]);
        CHECK(d.m[i] == d.x.values[i] - d.a[i]);  // stored exactly in this orientation
    }
}

TEST_CASE("quadratic variation and sup deviation on a hand path") {
    const Partition part = uniform_partition(1.0, 2);
    const DiscretePath p(part, {0.0, 1.0, 0.0});
    CHECK(quadratic_variation(p.values) == 2.0);

    const DecompositionPath d{DiscretePath(part, {0.0, 1.0, 0.0}),
                              {0.0, 0.25, 0.5},
                              {0.0, 0.75, -0.5}};
    CHECK(sup_deviation(d) == 0.75);
}

TEST_CASE("prediction error sums accumulate strictly before the cutoff") {
    const Partition part = uniform_partition(1.0, 4);
    ConditionalProfile profile;
    profile.v = {1.0, 2.0, 4.0, 8.0};
    CHECK(jacod_sum(profile, part, 0.0) == 0.0);
    CHECK(jacod_sum(profile, part, 0.2) == 0.0);
    CHECK(jacod_sum(profile, part, 0.25) == 1.0);  // only the increment ending at 0.25
    CHECK(jacod_sum(profile, part, 0.3) == 1.0);
    CHECK(jacod_sum(profile, part, 0.5) == 3.0);
    CHECK(jacod_sum(profile, part, 1.0) == 15.0);
}

TEST_CASE("terminal prediction error matches its Monte Carlo estimate") {
    const std::size_t k = 16, n = 20000;
    const GaussianIncrementModel m = model(0.75, k);
    const auto [w, profile] = predictor_weights(m);
    const PathSampler sampler(factorize_toeplitz(m.stationary_autocovariances()), 99);

    std::vector<double> dx(k), da(k);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sampler.sample(i, dx);
        compensator_increments(w, dx, da);
        double mart = 0.0;
        for (std::size_t j = 0; j < k; ++j) mart += dx[j] - da[j];
        sum += mart * mart;
        sum2 += mart * mart * mart * mart;
    }
    const double est = sum / static_cast<double>(n);
    const double se =
        std::sqrt((sum2 / static_cast<double>(n) - est * est) / static_cast<double>(n));
    CHECK(std::abs(est - profile.sum()) <= 4.0 * se);
}

TEST_CASE("martingale increments are uncorrelated with the discrete past") {
    // E[(dX_j - dA_j) g(past)] = 0 for g = 1 and g = each past increment
    const std::size_t k = 16, n = 100000;
    const GaussianIncrementModel m = model(0.75, k);
    const auto [w, profile] = predictor_weights(m);
    const PathSampler sampler(factorize_toeplitz(m.stationary_autocovariances()), 314159);

    std::vector<double> dx(k), da(k);
    std::vector<double> sum(k * (k + 1), 0.0), sum2(k * (k + 1), 0.0);
    for (std::size_t p = 0; p < n; ++p) {
        sampler.sample(p, dx);
        compensator_increments(w, dx, da);
        for (std::size_t j = 0; j < k; ++j) {
            const double dm = dx[j] - da[j];
            std::size_t slot = j * (k + 1);
            sum[slot] += dm;
            sum2[slot] += dm * dm;
            for (std::size_t i = 0; i < j; ++i) {
                const double prod = dm * dx[i];
                ++slot;
                sum[slot] += prod;
                sum2[slot] += prod * prod;
            }
        }
    }
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t g = 0; g <= j; ++g) {
            const std::size_t slot = j * (k + 1) + g;
            const double mean = sum[slot] / static_cast<double>(n);
            const double var = sum2[slot] / static_cast<double>(n) - mean * mean;
            const double se = std::sqrt(var / static_cast<double>(n));
            if (se == 0.0) continue;
            worst = std::max(worst, std::abs(mean) / se);
        }
    }
    CHECK(worst <= 4.0);
}

TEST_CASE("step functions are right continuous on the grid") {
    const Partition part = uniform_partition(1.0, 4);
    const StepFunction f(part, {1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(f.at(0.0) == 1.0);
    CHECK(f.at(0.1) == 1.0);
    CHECK(f.at(0.25) == 2.0);
    CHECK(f.at(0.6) == 3.0);
    CHECK(f.at(1.0) == 5.0);
    CHECK_THROWS_AS(StepFunction(part, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("Cesaro averaging of step functions") {
    const Partition part = uniform_partition(1.0, 2);
    std::vector<StepFunction> fs;
    fs.emplace_back(part, std::vector<double>{1.0, 2.0, 3.0});
    CHECK(cesaro_average(fs, 0.6) == 2.0);
    fs.emplace_back(part, std::vector<double>{3.0, 4.0, 5.0});
    CHECK(cesaro_average(fs, 0.0) == 2.0);
    CHECK(cesaro_average(fs, 0.6) == 3.0);
    CHECK(cesaro_average(fs, 1.0) == 4.0);
    CHECK_THROWS_AS(cesaro_average(std::vector<StepFunction>{}, 0.5), std::invalid_argument);
}

TEST_CASE("quadratic variation concentrates for rough paths") {
    // H = 0.25, k = 256: sum of squared increments is k^(1-2H) * T^(2H) in mean
    const std::size_t k = 256, n = 2000;
    const GaussianIncrementModel m = model(0.25, k);
    const PathSampler sampler(factorize_toeplitz(m.stationary_autocovariances()), 17);
    const double expect = analytic_energy(m);
    std::vector<double> dx(k);
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sampler.sample(i, dx);
        double qv = 0.0;
        for (double d : dx) qv += d * d;
        sum += qv;
        sum2 += qv * qv;
    }
    const double mean = sum / static_cast<double>(n);
    const double se = std::sqrt(
        (sum2 / static_cast<double>(n) - mean * mean) / static_cast<double>(n));
    CHECK(std::abs(mean - expect) <= 4.0 * se);
    CHECK(expect == doctest::Approx(16.0).epsilon(1e-12));  // 256^0.5
}
