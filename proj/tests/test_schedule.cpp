#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hieropt/noise.hpp"
#include "hieropt/schedule.hpp"

using namespace hieropt;

namespace {

AdaSchedule fresh(double alpha, ScheduleOptions opts = {}) {
    return AdaSchedule(alpha, 1.0, 1.0, 1.0, opts);
}

}  // namespace

TEST_CASE("ingest and alpha examples") {
    for (double alpha : {0.5, 1.0, 2.0, 5.0}) {
        AdaSchedule s = fresh(alpha);
        s.ingest(0.0, 0.0);
        CHECK(s.alpha_t() == 1.0);
        CHECK(s.beta_t() == 0.0);
    }
    {
        AdaSchedule s = fresh(1.0);
        s.ingest(3.0, 0.0);
        CHECK(s.alpha_t() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(s.beta_t() == doctest::Approx(0.5).epsilon(1e-15));
    }
    {
        AdaSchedule s = fresh(1.0);
        s.ingest(3.0, 12.0);
        CHECK(s.alpha_prime_t() == doctest::Approx(0.25).epsilon(1e-15));
    }
    {
        AdaSchedule s = fresh(2.0);
        s.ingest(0.0, 12.0);
        CHECK(s.alpha_prime_t() == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("schedule preconditions") {
    AdaSchedule s = fresh(1.0);
    CHECK_THROWS_AS(s.alpha_t(), std::logic_error);
    CHECK_THROWS_AS(s.eta_x_t(), std::logic_error);
    CHECK_THROWS_AS(s.eta_y_t(), std::logic_error);
    CHECK_THROWS_AS(s.ingest(-1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(s.ingest(0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(AdaSchedule(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(AdaSchedule(1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("upper step size examples") {
    {
        AdaSchedule s(1.0, 3.0, 1.0, 1.0);
        s.ingest(0.0, 0.0);
        CHECK(s.eta_x_t() == doctest::Approx(3.0).epsilon(1e-15));
    }
    {
        AdaSchedule s(1.0, 2.0, 1.0, 1.0);
        s.ingest(3.0, 0.0);
        s.ingest(0.0, 0.0);
        s.ingest(0.0, 0.0);
        s.ingest(0.0, 0.0);
        // t = 4: eta = 2 * sqrt(0.5) / 2 = sqrt(0.5)
        CHECK(s.eta_x_t() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    }
    {
        // Practical variant divides by sqrt(T) regardless of t.
        AdaSchedule s(1.0, 1.0, 1.0, 1.0,
                      ScheduleOptions{UpperRate::hierarchical, true, 100});
        s.ingest(0.0, 0.0);
        CHECK(s.eta_x_t() == doctest::Approx(0.1).epsilon(1e-15));
        s.ingest(0.0, 0.0);
        CHECK(s.eta_x_t() == doctest::Approx(0.1).epsilon(1e-15));
    }
}

TEST_CASE("lower step size examples") {
    {
        AdaSchedule s(1.0, 1.0, 2.0, 1.0);
        s.ingest(0.0, 0.0);
        CHECK(s.eta_y_t() == doctest::Approx(2.0).epsilon(1e-15));
    }
    {
        AdaSchedule s(1.0, 1.0, 2.0, 1.0);
        s.ingest(0.0, 3.0);
        CHECK(s.eta_y_t() == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        // Tuned AUC settings: gamma = 0.1, eta_y = 0.01.
        AdaSchedule s(0.5, 1.0, 0.01, 0.1);
        s.ingest(0.0, 0.0);
        CHECK(s.eta_y_t() == doctest::Approx(0.1).epsilon(1e-12));
    }
}

TEST_CASE("momentum blend") {
    const RealVector m{2.0, 0.0};
    const RealVector g{0.0, 2.0};
    const RealVector out = momentum_update(m, g, 0.5);
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(1.0));

    const RealVector g2{1.0, -1.0};
    const RealVector nm = momentum_update(m, g2, 0.0);
    CHECK(nm[0] == g2[0]);
    CHECK(nm[1] == g2[1]);

    for (double beta : {0.0, 0.3, 0.9, 1.0}) {
        const RealVector fp = momentum_update(g2, g2, beta);
        CHECK(fp[0] == doctest::Approx(g2[0]).epsilon(1e-15));
        CHECK(fp[1] == doctest::Approx(g2[1]).epsilon(1e-15));
    }
    CHECK_THROWS_AS(momentum_update(RealVector{1.0}, g, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(momentum_update(m, g, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(momentum_update(m, g, -0.1), std::invalid_argument);
}

TEST_CASE("monotonicity over random ingest sequences") {
    RngStream rng(5, "schedule-prop");
    for (int rep = 0; rep < 20; ++rep) {
        AdaSchedule s(rng.uniform(0.2, 3.0), 1.0, 1.0, rng.uniform(0.2, 2.0));
        double prev_alpha = 1.0, prev_alpha_prime = 1.0, prev_eta_y = 1e300;
        for (int t = 1; t <= 200; ++t) {
            s.ingest(std::abs(rng.gaussian()), std::abs(rng.gaussian()));
            CHECK(s.alpha_t() <= prev_alpha + 1e-15);
            CHECK(s.alpha_prime_t() <= s.alpha_t() + 1e-15);
            CHECK(s.eta_y_t() <= prev_eta_y + 1e-15);
            CHECK(s.alpha_t() > 0.0);
            CHECK(s.alpha_t() <= 1.0);
            CHECK(s.beta_t() >= 0.0);
            CHECK(s.beta_t() < 1.0);
            prev_alpha = s.alpha_t();
            prev_alpha_prime = s.alpha_prime_t();
            prev_eta_y = s.eta_y_t();
        }
        CHECK(prev_alpha_prime <= 1.0);
    }
}

TEST_CASE("upper sandwich under bounded noise") {
    // diff statistics built from two independent bounded draws obey
    // sum <= 4 sigma_hi^2 t, hence alpha_t >= alpha / sqrt(alpha^2 + 4 sigma_hi^2 t).
    RngStream rng(17, "schedule-prop");
    const double sigma_hi = 2.0;
    const NoiseModel m = NoiseModel::annulus(1.0, sigma_hi);
    for (int rep = 0; rep < 5; ++rep) {
        const double alpha = rng.uniform(0.5, 3.0);
        AdaSchedule s(alpha, 1.0, 1.0, 1.0);
        for (int t = 1; t <= 2000; ++t) {
            const RealVector e1 = sample_noise(m, 8, rng);
            const RealVector e2 = sample_noise(m, 8, rng);
            s.ingest(norm_sq(sub(e1, e2)), 0.0);
            const double td = static_cast<double>(t);
            CHECK(s.sum_diff_sq() <= 4.0 * sigma_hi * sigma_hi * td * (1.0 + 1e-12));
            const double floor = alpha / std::sqrt(alpha * alpha + 4.0 * sigma_hi * sigma_hi * td);
            CHECK(s.alpha_t() >= floor * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("deterministic reduction is exact") {
    AdaSchedule s(0.7, 1.3, 1.0, 1.0, ScheduleOptions{UpperRate::single_level, false, 0});
    for (int t = 1; t <= 100; ++t) {
        s.ingest(0.0, 0.0);
        CHECK(s.beta_t() == 0.0);
        CHECK(s.eta_x_t() == 1.3 / std::sqrt(static_cast<double>(t)));
    }
}
