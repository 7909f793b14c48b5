#pragma once

#include <cstdint>

#include "hieropt/optimizers.hpp"
#include "hieropt/problems.hpp"

namespace hieropt {

/// Settings for the comparison optimizers. tiada_alpha/tiada_beta are the
/// two exponents of the time-scale-separated accumulators; fixed_beta the
/// constant momentum of the non-adaptive normalized method (1 freezes the
/// momentum at m_1).
struct BaselineConfig {
    double eta_x = 1.0;
    double eta_y = 1.0;
    double tiada_alpha = 0.6;
    double tiada_beta = 0.4;
    double fixed_beta = 0.0;
    double gamma = 1.0;

    void validate() const;
};

struct BaselineState {
    RealVector x;
    RealVector y;
    RealVector m;     // nsgdm_fixed only
    double v_x = 0.0;  // accumulated squared upper gradient norms
    double v_y = 0.0;  // accumulated squared lower gradient norms
    std::int64_t t = 0;

    bool x_moved = false;
    double last_step_norm = 0.0;
    double last_eta_x = 0.0;
    double last_eta_y = 0.0;
};

/// x <- x - eta_x * g_x ; y <- y + eta_y * g_y (constant steps).
void sgda_step(BaselineState& state, const MinimaxProblem& problem, const BaselineConfig& cfg,
               OracleStreams& streams, bool shared_xi = true);

/// Time-scale separated accumulators:
///   x <- x - eta_x * g_x / max(v_x, v_y)^tiada_alpha
///   y <- y + eta_y * g_y / v_y^tiada_beta
/// with the denominators floored at 1e-12.
void tiada_step(BaselineState& state, const MinimaxProblem& problem, const BaselineConfig& cfg,
                OracleStreams& streams, bool shared_xi = true);

/// AdaGrad-Norm on both levels with shared gamma.
void adagradnorm_gda_step(BaselineState& state, const MinimaxProblem& problem,
                          const BaselineConfig& cfg, OracleStreams& streams,
                          bool shared_xi = true);

/// Normalized SGD with constant momentum and step eta_x/sqrt(t).
void nsgdm_fixed_step(BaselineState& state, const SingleLevelProblem& problem,
                      const BaselineConfig& cfg, RngStream& rng);

}  // namespace hieropt
