#include "hieropt/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hieropt {

void BaselineConfig::validate() const {
    if (!(eta_x > 0.0) || !(eta_y > 0.0))
        throw std::invalid_argument("BaselineConfig: step sizes must be > 0");
    if (!(tiada_alpha > 0.0) || !(tiada_alpha < 1.0) || !(tiada_beta > 0.0) ||
        !(tiada_beta < 1.0))
        throw std::invalid_argument("BaselineConfig: TiAda exponents must lie in (0, 1)");
    if (!(tiada_alpha > tiada_beta))
        throw std::invalid_argument("BaselineConfig: need tiada_alpha > tiada_beta");
    if (!(fixed_beta >= 0.0) || !(fixed_beta <= 1.0))
        throw std::invalid_argument("BaselineConfig: fixed_beta must lie in [0, 1]");
    if (!(gamma > 0.0)) throw std::invalid_argument("BaselineConfig: gamma must be > 0");
}

namespace {

RealVector draw_gy(const MinimaxProblem& problem, const RealVector& x, const RealVector& y,
                   OracleStreams& streams, bool shared_xi) {
    return problem.sample_grad_y(x, y, shared_xi ? streams.upper : streams.lower);
}

}  // namespace

void sgda_step(BaselineState& state, const MinimaxProblem& problem, const BaselineConfig& cfg,
               OracleStreams& streams, bool shared_xi) {
    const RealVector gx = problem.sample_grad_x(state.x, state.y, streams.upper);
    const RealVector gy = draw_gy(problem, state.x, state.y, streams, shared_xi);
    const RealVector dx = scale(gx, -cfg.eta_x);
    state.last_step_norm = norm(dx);
    state.x_moved = state.last_step_norm > 0.0;
    state.x = add(state.x, dx);
    state.y = axpy(state.y, cfg.eta_y, gy);
    state.last_eta_x = cfg.eta_x;
    state.last_eta_y = cfg.eta_y;
    ++state.t;
}

void tiada_step(BaselineState& state, const MinimaxProblem& problem, const BaselineConfig& cfg,
                OracleStreams& streams, bool shared_xi) {
    const RealVector gx = problem.sample_grad_x(state.x, state.y, streams.upper);
    const RealVector gy = draw_gy(problem, state.x, state.y, streams, shared_xi);
    state.v_x += norm_sq(gx);
    state.v_y += norm_sq(gy);
    const double denom_x =
        std::max(std::pow(std::max(state.v_x, state.v_y), cfg.tiada_alpha), 1e-12);
    const double denom_y = std::max(std::pow(state.v_y, cfg.tiada_beta), 1e-12);
    const RealVector dx = scale(gx, -cfg.eta_x / denom_x);
    state.last_step_norm = norm(dx);
    state.x_moved = state.last_step_norm > 0.0;
    state.x = add(state.x, dx);
    state.y = axpy(state.y, cfg.eta_y / denom_y, gy);
    state.last_eta_x = cfg.eta_x / denom_x;
    state.last_eta_y = cfg.eta_y / denom_y;
    ++state.t;
}

void adagradnorm_gda_step(BaselineState& state, const MinimaxProblem& problem,
                          const BaselineConfig& cfg, OracleStreams& streams, bool shared_xi) {
    const RealVector gx = problem.sample_grad_x(state.x, state.y, streams.upper);
    const RealVector gy = draw_gy(problem, state.x, state.y, streams, shared_xi);
    state.v_x += norm_sq(gx);
    state.v_y += norm_sq(gy);
    const double step_x = cfg.eta_x / std::sqrt(cfg.gamma * cfg.gamma + state.v_x);
    const double step_y = cfg.eta_y / std::sqrt(cfg.gamma * cfg.gamma + state.v_y);
    const RealVector dx = scale(gx, -step_x);
    state.last_step_norm = norm(dx);
    state.x_moved = state.last_step_norm > 0.0;
    state.x = add(state.x, dx);
    state.y = axpy(state.y, step_y, gy);
    state.last_eta_x = step_x;
    state.last_eta_y = step_y;
    ++state.t;
}

void nsgdm_fixed_step(BaselineState& state, const SingleLevelProblem& problem,
                      const BaselineConfig& cfg, RngStream& rng) {
    const RealVector g = problem.sample_grad(state.x, rng);
    state.m = state.t == 0 ? g : momentum_update(state.m, g, cfg.fixed_beta);
    ++state.t;
    const double eta = cfg.eta_x / std::sqrt(static_cast<double>(state.t));
    const double m_norm = norm(state.m);
    state.last_eta_x = eta;
    state.last_eta_y = 0.0;
    if (m_norm > 0.0) {
        const RealVector d = scale(state.m, -eta / m_norm);
        state.last_step_norm = norm(d);
        state.x_moved = true;
        state.x = add(state.x, d);
    } else {
        state.last_step_norm = 0.0;
        state.x_moved = false;
    }
}

}  // namespace hieropt
