#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hieropt/hypergrad.hpp"

using namespace hieropt;

namespace {

HvpFn constant_hessian(double h) {
    return [h](const RealVector& v, RngStream&) { return scale(v, h); };
}

}  // namespace

TEST_CASE("series length one is v / l_g1") {
    RngStream rng(1, "neumann");
    const NeumannConfig cfg{1, 2.0, 1.0, false};
    const RealVector out = neumann_apply(constant_hessian(1.7), cfg, RealVector{3.0, -1.0}, rng);
    CHECK(out[0] == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(out[1] == doctest::Approx(-0.5).epsilon(1e-15));
}

TEST_CASE("scalar geometric series values") {
    RngStream rng(1, "neumann");
    // Hessian = mu = 1, l = 2: H_N = 1 - 2^{-N}; exact inverse 1.
    {
        const NeumannConfig cfg{1, 2.0, 1.0, false};
        const double h1 = neumann_apply(constant_hessian(1.0), cfg, RealVector{1.0}, rng)[0];
        CHECK(h1 == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(std::abs(h1 - 1.0) == doctest::Approx(0.5).epsilon(1e-15));  // saturates the bound
    }
    {
        const NeumannConfig cfg{20, 2.0, 1.0, false};
        const double h20 = neumann_apply(constant_hessian(1.0), cfg, RealVector{1.0}, rng)[0];
        CHECK(h20 == doctest::Approx(1.0 - std::pow(0.5, 20)).epsilon(1e-14));
    }
}

TEST_CASE("deterministic error shrinks monotonically with N") {
    RngStream rng(1, "neumann");
    double prev = 1e300;
    for (int n = 1; n <= 25; ++n) {
        const NeumannConfig cfg{n, 2.0, 1.0, false};
        const double val = neumann_apply(constant_hessian(1.3), cfg, RealVector{1.0}, rng)[0];
        const double err = std::abs(val - 1.0 / 1.3);
        CHECK(err <= prev + 1e-15);
        prev = err;
    }
}

TEST_CASE("exact oracle matches the implicit gradient") {
    const BilevelProblem q = make_quadratic_bilevel(3, 4, 1.0, 2.0, 13);
    RngStream rng(2, "test-points");
    for (int rep = 0; rep < 5; ++rep) {
        RealVector x(3);
        for (std::size_t i = 0; i < 3; ++i) x[i] = rng.uniform(-1.5, 1.5);
        const RealVector at_star = hypergrad_exact(q, x, q.y_star(x));
        CHECK(norm(sub(at_star, q.grad_phi(x))) <= 1e-10 * (1.0 + norm(at_star)));
    }
    // grad_y f == 0 leaves only grad_x f.
    BilevelProblem p = make_onedim_bilevel();
    p.grad_x_f = [](const RealVector& x, const RealVector&) { return x; };
    p.grad_y_f = [](const RealVector&, const RealVector&) { return RealVector{0.0}; };
    CHECK(hypergrad_exact(p, RealVector{2.5}, RealVector{0.0})[0] == 2.5);
}

TEST_CASE("exact oracle rejects a singular Hessian") {
    BilevelProblem p = make_onedim_bilevel();
    p.hess_yy_g = [](const RealVector&, const RealVector&) { return Matrix::Zero(1, 1); };
    CHECK_THROWS_AS(hypergrad_exact(p, RealVector{0.0}, RealVector{0.0}), std::runtime_error);
}

TEST_CASE("one-dimensional estimate agrees with the exact oracle") {
    // Deterministic problem, l_g1 = mu_g = 1: a single term is already exact.
    const BilevelProblem p = make_onedim_bilevel();
    const NeumannConfig cfg{1, 1.0, 1.0, false};
    RngStream rng(3, "neumann");
    const RealVector est = hypergrad_estimate(p, RealVector{0.0}, RealVector{0.0}, cfg, rng);
    const RealVector exact = hypergrad_exact(p, RealVector{0.0}, RealVector{0.0});
    CHECK(est[0] == doctest::Approx(exact[0]).epsilon(1e-15));
    CHECK(exact[0] == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("vanishing correction leaves the upper gradient") {
    BilevelProblem p = make_onedim_bilevel();
    p.grad_x_f = [](const RealVector& x, const RealVector&) { return x; };
    p.grad_y_f = [](const RealVector&, const RealVector&) { return RealVector{0.0}; };
    const NeumannConfig cfg{5, 1.0, 1.0, false};
    RngStream rng(4, "neumann");
    const RealVector est = hypergrad_estimate(p, RealVector{1.25}, RealVector{0.3}, cfg, rng);
    CHECK(est[0] == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("estimator bias respects the geometric bound") {
    const BilevelProblem q = make_quadratic_bilevel(4, 4, 1.0, 2.0, 21, 0.2);
    const RealVector x{0.5, -0.3, 0.2, 0.1};
    const RealVector ys = q.y_star(x);
    NeumannConfig cfg{8, q.l_g1, q.mu_g, false};
    RngStream rng(7, "neumann");
    const std::size_t samples = 20000;
    RealVector mean(4);
    for (std::size_t i = 0; i < samples; ++i)
        mean = add(mean, hypergrad_estimate(q, x, ys, cfg, rng));
    mean = scale(mean, 1.0 / static_cast<double>(samples));
    const double l_f0 = norm(q.grad_y_f(x, ys));
    const double bound = (q.l_g1 * l_f0 / q.mu_g) * std::pow(1.0 - q.mu_g / q.l_g1, cfg.N);
    // Generous Monte-Carlo allowance on top of the deterministic part.
    const double mc_allowance = 5.0 * 2.0 / std::sqrt(static_cast<double>(samples));
    CHECK(norm(sub(mean, q.grad_phi(x))) <= bound + mc_allowance);
}

TEST_CASE("recommended series lengths") {
    CHECK(recommended_N(10000, NeumannConfig{1, 2.0, 1.0, false}) == 20);
    CHECK(recommended_N(100, NeumannConfig{1, 1.0, 1.0, false}) == 1);
    CHECK_THROWS_AS(recommended_N(1, NeumannConfig{1, 2.0, 1.0, false}), std::invalid_argument);
    // Hand check against the defining inequality.
    const NeumannConfig cfg{1, 2.0, 1.0, false};
    for (std::int64_t t : {10L, 100L, 5000L}) {
        const int n = recommended_N(t, cfg);
        const double rate = std::log(2.0);
        CHECK(n >= 3.0 * std::log(static_cast<double>(t)) / (2.0 * rate) - 1e-12);
        CHECK(n - 1 < 3.0 * std::log(static_cast<double>(t)) / (2.0 * rate) + 1.0);
    }
}

TEST_CASE("economy mode matches the full estimator on deterministic problems") {
    const BilevelProblem q = make_quadratic_bilevel(3, 3, 1.0, 2.0, 31);
    const RealVector x{0.2, -0.5, 0.9};
    const RealVector y{0.1, 0.1, -0.2};
    const RealVector v{1.0, 2.0, -1.0};
    NeumannConfig full{6, 2.0, 1.0, false};
    NeumannConfig econ{6, 2.0, 1.0, true};
    RngStream r1(9, "neumann"), r2(9, "neumann");
    const RealVector a = neumann_inverse_apply(q, x, y, v, full, r1);
    const RealVector b = neumann_inverse_apply(q, x, y, v, econ, r2);
    CHECK(norm(sub(a, b)) <= 1e-14 * (1.0 + norm(a)));

    // With sampling the two modes draw differently but both stay finite.
    const BilevelProblem qs = make_quadratic_bilevel(3, 3, 1.0, 2.0, 31, 0.2);
    RngStream r3(9, "neumann"), r4(9, "neumann");
    const RealVector as = neumann_inverse_apply(qs, x, y, v, full, r3);
    const RealVector bs = neumann_inverse_apply(qs, x, y, v, econ, r4);
    CHECK(as.finite());
    CHECK(bs.finite());
    CHECK(norm(sub(as, bs)) > 0.0);
}

TEST_CASE("config validation") {
    const NeumannConfig zero_terms{0, 2.0, 1.0, false};
    const NeumannConfig inverted{1, 1.0, 2.0, false};
    CHECK_THROWS_AS(zero_terms.validate(), std::invalid_argument);
    CHECK_THROWS_AS(inverted.validate(), std::invalid_argument);
    RngStream rng(1, "neumann");
    const BilevelProblem p = make_onedim_bilevel();
    CHECK_THROWS_AS(
        neumann_inverse_apply(p, RealVector{0.0}, RealVector{0.0}, RealVector{1.0, 2.0},
                              NeumannConfig{1, 1.0, 1.0, false}, rng),
        std::invalid_argument);
}
