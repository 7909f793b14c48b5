#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hieropt/config.hpp"
#include "hieropt/harness.hpp"
#include "hieropt/verify.hpp"

using namespace hieropt;

TEST_CASE("t0 floor and validation") {
    BoundParams zero;
    zero.sigma_lo = 0.0;
    zero.sigma_hi = 0.0;
    zero.delta = 0.1;
    zero.T = 100;
    CHECK(compute_t0(zero) == 2);

    BoundParams bad;
    bad.sigma_lo = 2.0;
    bad.sigma_hi = 1.0;
    CHECK_THROWS_AS(compute_t0(bad), std::invalid_argument);

    BoundParams half;
    half.sigma_lo = 0.0;
    half.sigma_hi = 1.0;
    half.T = 10;
    CHECK_THROWS_AS(compute_t0(half), std::invalid_argument);
}

TEST_CASE("t0 for equal noise bounds") {
    // sigma_lo = sigma_hi: c0 = 1/2, so t0 = ceil((A + sqrt(B)/2) * 4).
    BoundParams p;
    p.sigma_lo = 3.0;
    p.sigma_hi = 3.0;
    p.delta = 0.05;
    p.T = 2000;
    CHECK(p.c0() == doctest::Approx(0.5).epsilon(1e-15));
    const double expected =
        std::ceil((p.A_T() + 0.5 * std::sqrt(p.B_T())) * 4.0);
    CHECK(compute_t0(p) == static_cast<std::int64_t>(expected));
}

TEST_CASE("golden t0 value") {
    // delta = 0.1, T = 1e4, kappa = 1: frozen against a by-hand evaluation
    // of 72 * log(600 * log(60000)).
    BoundParams p;
    p.sigma_lo = 1.0;
    p.sigma_hi = 1.0;
    p.delta = 0.1;
    p.T = 10000;
    const double by_hand = 72.0 * std::log((60.0 / 0.1) * std::log(6.0 * 1e4));
    CHECK(static_cast<std::int64_t>(std::ceil(by_hand)) == 634);
    CHECK(compute_t0(p) == 634);
    CHECK(p.kappa_sigma() == 1.0);
}

TEST_CASE("recursion identity corner cases") {
    // All beta = 0: deviation is exactly zero.
    {
        std::vector<double> betas(10, 0.0), alphas(10, 1.0);
        std::vector<RealVector> eps, shifts;
        RngStream rng(1, "x");
        for (int i = 0; i < 10; ++i) {
            eps.push_back(RealVector{rng.uniform(-1.0, 1.0)});
            shifts.push_back(RealVector{rng.uniform(-1.0, 1.0)});
        }
        CHECK(check_recursion_identity(betas, alphas, eps, shifts) == 0.0);
    }
    // Pure decay: zero noise and shifts.
    {
        std::vector<double> betas{0.0, 0.5, 0.5, 0.5}, alphas{1.0, 0.5, 0.5, 0.5};
        std::vector<RealVector> eps(4, RealVector{0.0}), shifts(4, RealVector{0.0});
        CHECK(check_recursion_identity(betas, alphas, eps, shifts) == 0.0);
    }
    // alpha + beta must be 1.
    {
        std::vector<double> betas{0.5}, alphas{0.6};
        std::vector<RealVector> eps{RealVector{0.0}}, shifts{RealVector{0.0}};
        CHECK_THROWS_AS(check_recursion_identity(betas, alphas, eps, shifts),
                        std::invalid_argument);
    }
}

TEST_CASE("recursion identity on random sequences") {
    RngStream rng(9, "recursion");
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 100, dim = 4;
        std::vector<double> betas(n), alphas(n);
        std::vector<RealVector> eps(n), shifts(n);
        for (std::size_t k = 0; k < n; ++k) {
            betas[k] = rng.uniform(0.0, 0.999);
            alphas[k] = 1.0 - betas[k];
            RealVector e(dim), s(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                e[j] = rng.gaussian();
                s[j] = 0.1 * rng.gaussian();
            }
            eps[k] = e;
            shifts[k] = s;
        }
        CHECK(check_recursion_identity(betas, alphas, eps, shifts) <= 1e-10);
    }
}

TEST_CASE("adagrad sum inequalities") {
    // All-zero sequence: both sides zero.
    {
        const auto rep = check_adagrad_sums(std::vector<double>(10, 0.0), 1.0);
        CHECK(rep.lhs_over_g == 0.0);
        CHECK(rep.rhs_over_g2 == 0.0);
        CHECK(rep.ok);
    }
    // Single vector with squared norm 3, G0 = 1.
    {
        const auto rep = check_adagrad_sums({std::sqrt(3.0)}, 1.0);
        CHECK(rep.lhs_over_g == doctest::Approx(1.5).epsilon(1e-14));
        CHECK(rep.rhs_over_g == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-14));
        CHECK(rep.ok);
    }
    // Random sequences.
    RngStream rng(2, "adagrad");
    for (int rep_i = 0; rep_i < 20; ++rep_i) {
        std::vector<double> norms(10000);
        for (double& v : norms) v = std::abs(rng.gaussian()) * std::exp(rng.uniform(-1.0, 2.0));
        CHECK(check_adagrad_sums(norms, rng.uniform(0.1, 2.0)).ok);
    }
    CHECK_THROWS_AS(check_adagrad_sums({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("neumann operator bound") {
    // Scalar saturation: (mu, l) = (1, 2), N = 1 has error exactly 0.5.
    const auto sat = check_neumann_bound(1.0, 2.0, 1, 1, 1, 1, 5);
    CHECK(sat.worst_error == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sat.worst_bound == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sat.ok);

    // mu = l: exact in one term for every N.
    const auto exact = check_neumann_bound(2.0, 2.0, 1, 5, 5, 6, 6);
    CHECK(exact.worst_error <= 1e-12);

    // Random matrices over two parameter pairs.
    CHECK(check_neumann_bound(1.0, 2.0, 1, 20, 20, 16, 7).ok);
    CHECK(check_neumann_bound(0.5, 3.0, 1, 20, 20, 12, 8).ok);
    CHECK(check_neumann_bound(1.0, 2.0, 10, 10, 5, 8, 9).ok);  // 8x8, N = 10 case

    CHECK_THROWS_AS(check_neumann_bound(0.0, 1.0, 1, 2, 1, 2, 1), std::invalid_argument);
}

TEST_CASE("hypergradient bias on the deterministic scalar problem") {
    const BilevelProblem p = make_onedim_bilevel();
    for (int n = 1; n <= 12; ++n) {
        NeumannConfig cfg{n, 2.0, 1.0, false};
        const auto rep = check_hypergrad_bias(p, RealVector{0.0}, cfg, 1, 1);
        // Closed-form geometric error: (1 - mu/l)^N * |grad_y f(x, y*)|.
        CHECK(rep.bias == doctest::Approx(std::pow(0.5, n)).epsilon(1e-10));
        CHECK(rep.se == 0.0);
        CHECK(rep.ok);
    }
}

TEST_CASE("hypergradient bias with zero lower-level coupling") {
    BilevelProblem p = make_onedim_bilevel();
    p.grad_x_f = [](const RealVector& x, const RealVector&) { return x; };
    p.grad_y_f = [](const RealVector&, const RealVector&) { return RealVector{0.0}; };
    p.grad_phi = [](const RealVector& x) { return x; };
    NeumannConfig cfg{3, 2.0, 1.0, false};
    const auto rep = check_hypergrad_bias(p, RealVector{0.8}, cfg, 100, 2);
    CHECK(rep.bound == 0.0);
    CHECK(rep.ok);
}

TEST_CASE("sandwich checks on recorded traces") {
    RunConfig base;
    base.problem = "quad-single";
    base.dim_x = 8;
    base.mu = 1.0;
    base.L = 4.0;
    base.algorithm = "ada-nsgdm";
    base.T = 500;
    base.eta_x = 0.5;
    base.output_path = "";

    // Sphere noise: sigma_lo = sigma_hi, upper bound holds for every seed.
    {
        RunConfig c = base;
        c.noise_x = NoiseModel::sphere(1.5);
        BoundParams params;
        params.sigma_lo = 1.5;
        params.sigma_hi = 1.5;
        params.delta = 0.01;
        params.T = c.T;
        SandwichAccumulator acc(params);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            c.seed = seed;
            acc.add(run_experiment(c));
        }
        CHECK(acc.report().upper_all_ok);
    }
    // Zero noise: sums identically zero, upper bound trivially holds.
    {
        RunConfig c = base;
        c.noise_x = NoiseModel::none();
        c.seed = 1;
        const RunTrace t = run_experiment(c);
        CHECK(t.rows.back().sum_diff_sq == 0.0);
        BoundParams params;
        params.sigma_lo = 0.0;
        params.sigma_hi = 0.0;
        params.delta = 0.01;
        params.T = c.T;
        const auto res = check_momentum_sandwich_seed(t, params);
        CHECK(res.upper_ok);
        CHECK(res.lower_ok_from_t0);
    }
    // Gaussian traces are not two-sided: hard error.
    {
        RunConfig c = base;
        c.noise_x = NoiseModel::gaussian(1.0);
        c.seed = 1;
        const RunTrace t = run_experiment(c);
        BoundParams params;
        params.sigma_lo = 1.0;
        params.sigma_hi = 2.0;
        params.delta = 0.01;
        params.T = c.T;
        CHECK_THROWS_AS(check_momentum_sandwich_seed(t, params), std::invalid_argument);
    }
}

TEST_CASE("log-log slope fit recovers exact power laws") {
    std::vector<std::pair<double, double>> pts;
    for (int t = 10; t <= 1000; t += 7) pts.emplace_back(t, 3.0 * std::pow(t, 0.5));
    CHECK(fit_loglog_slope(pts) == doctest::Approx(0.5).epsilon(1e-10));
    std::vector<std::pair<double, double>> flat{{1.0, 2.0}, {10.0, 2.0}};
    CHECK(fit_loglog_slope(flat) == doctest::Approx(0.0));
    CHECK_THROWS_AS(fit_loglog_slope({{1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("lower-level error accumulates at the square-root rate") {
    RunConfig c;
    c.problem = "quad-minimax";
    c.dim_x = 5;
    c.dim_y = 5;
    c.mu = 1.0;
    c.L = 3.0;
    c.algorithm = "ada-minimax";
    c.T = 6000;
    c.alpha = 1.0;
    c.eta_x = 1.0;
    c.eta_y = 1.0;
    c.gamma = 1.0;
    c.noise_x = NoiseModel::annulus(1.0, 2.0);
    c.noise_y = NoiseModel::annulus(1.0, 2.0);
    c.seed = 4;
    c.output_path = "";
    const RunTrace trace = run_experiment(c);
    const SlopeReport rep = check_lower_level_rate(trace);
    CHECK(rep.ok);
}
