#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "hieropt/baselines.hpp"

using namespace hieropt;

namespace {

MinimaxProblem constant_gradients(double gx, double gy) {
    MinimaxProblem p;
    p.dim_x = 1;
    p.dim_y = 1;
    p.grad_x = [gx](const RealVector&, const RealVector&) { return RealVector{gx}; };
    p.grad_y = [gy](const RealVector&, const RealVector&) { return RealVector{gy}; };
    return p;
}

}  // namespace

TEST_CASE("sgda hand step on the one-dimensional saddle") {
    const MinimaxProblem p = make_onedim_minimax();
    BaselineConfig cfg;
    cfg.eta_x = 0.1;
    cfg.eta_y = 0.1;
    BaselineState state;
    state.x = RealVector{0.0};
    state.y = RealVector{1.0};
    OracleStreams streams(1);
    sgda_step(state, p, cfg, streams);
    CHECK(state.x[0] == doctest::Approx(-0.1).epsilon(1e-15));
    CHECK(state.y[0] == doctest::Approx(0.9).epsilon(1e-15));
    // Step length is exactly eta_x * ||g_x||.
    CHECK(state.last_step_norm == doctest::Approx(0.1 * 1.0).epsilon(1e-15));
}

TEST_CASE("sgda fixed point at zero gradients") {
    const MinimaxProblem p = constant_gradients(0.0, 0.0);
    BaselineConfig cfg;
    BaselineState state;
    state.x = RealVector{0.7};
    state.y = RealVector{-0.2};
    OracleStreams streams(1);
    for (int i = 0; i < 4; ++i) sgda_step(state, p, cfg, streams);
    CHECK(state.x[0] == 0.7);
    CHECK(state.y[0] == -0.2);
}

TEST_CASE("tiada unit first step and monotone denominator") {
    const MinimaxProblem p = make_onedim_minimax();  // at (0,1): |g_x| = |g_y| = 1
    BaselineConfig cfg;
    cfg.eta_x = 1.0;
    cfg.eta_y = 1.0;
    BaselineState state;
    state.x = RealVector{0.0};
    state.y = RealVector{1.0};
    OracleStreams streams(1);
    tiada_step(state, p, cfg, streams);
    CHECK(state.v_x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(state.last_eta_x == doctest::Approx(1.0).epsilon(1e-15));  // max(v)^0.6 = 1
    double prev = state.last_eta_x;
    for (int i = 0; i < 20; ++i) {
        tiada_step(state, p, cfg, streams);
        CHECK(state.last_eta_x <= prev + 1e-15);
        prev = state.last_eta_x;
    }
}

TEST_CASE("tiada guards the zero accumulator") {
    const MinimaxProblem p = constant_gradients(0.0, 0.0);
    BaselineConfig cfg;
    BaselineState state;
    state.x = RealVector{1.0};
    state.y = RealVector{1.0};
    OracleStreams streams(1);
    tiada_step(state, p, cfg, streams);
    CHECK(state.x[0] == 1.0);  // zero gradient, guarded denominator
    CHECK(std::isfinite(state.last_eta_x));
}

TEST_CASE("tiada exponents must separate time scales") {
    BaselineConfig cfg;
    cfg.tiada_alpha = 0.4;
    cfg.tiada_beta = 0.6;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("adagrad-norm step factor and accumulator counting") {
    // First gradient with squared norm 3 and eta = 2, gamma = 1: factor 1.
    const MinimaxProblem p = constant_gradients(std::sqrt(3.0), 0.0);
    BaselineConfig cfg;
    cfg.eta_x = 2.0;
    cfg.gamma = 1.0;
    BaselineState state;
    state.x = RealVector{0.0};
    state.y = RealVector{0.0};
    OracleStreams streams(1);
    adagradnorm_gda_step(state, p, cfg, streams);
    CHECK(state.last_eta_x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(state.x[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-14));

    // Unit-norm gradients: accumulator counts iterations.
    const MinimaxProblem unit = constant_gradients(1.0, 1.0);
    BaselineState s2;
    s2.x = RealVector{0.0};
    s2.y = RealVector{0.0};
    for (int t = 1; t <= 50; ++t) {
        adagradnorm_gda_step(s2, unit, cfg, streams);
        CHECK(s2.v_x == doctest::Approx(static_cast<double>(t)).epsilon(1e-13));
    }
}

TEST_CASE("adagrad-norm freezes on zero gradients") {
    const MinimaxProblem p = constant_gradients(0.0, 0.0);
    BaselineConfig cfg;
    BaselineState state;
    state.x = RealVector{0.4};
    state.y = RealVector{0.6};
    OracleStreams streams(1);
    for (int i = 0; i < 5; ++i) adagradnorm_gda_step(state, p, cfg, streams);
    CHECK(state.x[0] == 0.4);
    CHECK(state.y[0] == 0.6);
}

TEST_CASE("fixed-momentum normalized method limits") {
    SingleLevelProblem p;
    p.dim = 2;
    p.grad = [](const RealVector& x) { return x; };

    // beta = 1 freezes the momentum at m_1.
    BaselineConfig frozen;
    frozen.fixed_beta = 1.0;
    BaselineState state;
    state.x = RealVector{1.0, 0.5};
    RngStream rng(1, "upper-grad");
    nsgdm_fixed_step(state, p, frozen, rng);
    const RealVector m1 = state.m;
    for (int i = 0; i < 3; ++i) nsgdm_fixed_step(state, p, frozen, rng);
    CHECK(norm(sub(state.m, m1)) == 0.0);

    // beta = 0 is plain normalized SGD with step eta/sqrt(t).
    BaselineConfig plain;
    plain.eta_x = 0.5;
    BaselineState s2;
    s2.x = RealVector{1.0, 0.0};
    RngStream rng2(1, "upper-grad");
    nsgdm_fixed_step(s2, p, plain, rng2);
    CHECK(s2.x[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s2.x[1] == 0.0);
}

TEST_CASE("zero momentum and zero noise collapse onto the adaptive method") {
    const SingleLevelProblem p = make_quadratic_single(6, 1.0, 4.0, 12);
    RunSettings s;
    s.T = 100;
    s.seed = 1;
    s.eta_x = 0.7;
    s.fixed_beta = 0.0;
    s.x0 = RealVector(6, 0.4);
    const RunTrace fixed = run(p, Algorithm::nsgdm_fixed, s);
    const RunTrace ada = run(p, Algorithm::ada_nsgdm, s);
    CHECK(norm(sub(fixed.final_x, ada.final_x)) == 0.0);
    for (std::size_t i = 0; i < fixed.rows.size(); ++i)
        CHECK(*fixed.rows[i].grad_phi_norm == *ada.rows[i].grad_phi_norm);
}

TEST_CASE("baselines are deterministic given seed") {
    MinimaxProblem p = make_onedim_minimax(NoiseModel::gaussian(5.0));
    BaselineConfig cfg;
    cfg.eta_x = 2.0;
    cfg.eta_y = 2.0;
    BaselineState a, b;
    a.x = b.x = RealVector{3.0};
    a.y = b.y = RealVector{1.0};
    OracleStreams sa(9), sb(9);
    for (int t = 0; t < 100; ++t) {
        tiada_step(a, p, cfg, sa);
        tiada_step(b, p, cfg, sb);
    }
    CHECK(a.x[0] == b.x[0]);
    CHECK(a.y[0] == b.y[0]);
    CHECK(a.v_x == b.v_x);
}
