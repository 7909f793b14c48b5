#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "hieropt/hypergrad.hpp"
#include "hieropt/problems.hpp"
#include "hieropt/schedule.hpp"
#include "hieropt/trace.hpp"

namespace hieropt {

enum class Algorithm {
    ada_nsgdm,
    ada_minimax,
    ada_bio,
    ada_minimax_practical,
    sgda,
    tiada,
    adagradnorm_gda,
    nsgdm_fixed,
};

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// Oracle randomness for one run: each oracle role owns a stream, so a run
/// is a pure function of (seed, config).
struct OracleStreams {
    RngStream upper;
    RngStream upper_tilde;
    RngStream lower;

    explicit OracleStreams(std::uint64_t seed)
        : upper(seed, "upper-grad"), upper_tilde(seed, "upper-grad-tilde"),
          lower(seed, "lower-grad") {}
};

/// State shared by the three adaptive algorithms. y is zero-dim for
/// single-level use; prev_gx only participates in the practical variant.
struct OptimizerState {
    RealVector x;
    RealVector y;
    RealVector m;
    AdaSchedule schedule;
    RealVector prev_gx;
    std::int64_t t = 0;

    // Step bookkeeping for trace recording.
    bool x_moved = false;
    double last_step_norm = 0.0;

    OptimizerState(RealVector x0, RealVector y0, AdaSchedule sched)
        : x(std::move(x0)), y(std::move(y0)), schedule(std::move(sched)) {}
};

/// One iteration of adaptive normalized SGD with momentum: draws the sample
/// pair at x_t, ingests ||g - g~||^2, blends the momentum (m_1 = g_1), and
/// takes the unit-direction step of length eta_t. A zero momentum skips the
/// step but still advances t.
void ada_nsgdm_step(OptimizerState& state, const SingleLevelProblem& problem,
                    RngStream& rng_upper, RngStream& rng_upper_tilde);

/// One iteration of the adaptive minimax algorithm: normalized momentum
/// step on x, AdaGrad-Norm ascent on y, both from gradients at (x_t, y_t).
/// shared_xi draws the y-sample from the same stream as g_x (the same-
/// sample reading); practical_prev_grad replaces the independent second
/// sample with the previous iteration's gradient (diff 0 at t = 1).
void ada_minimax_step(OptimizerState& state, const MinimaxProblem& problem,
                      OracleStreams& streams, bool shared_xi = true,
                      bool practical_prev_grad = false);

/// One iteration of the adaptive bilevel algorithm: two independent
/// truncated-series hypergradient draws at (x_t, y_t), one lower-level
/// gradient, normalized momentum step on x, AdaGrad-Norm descent on y.
void ada_bio_step(OptimizerState& state, const BilevelProblem& problem,
                  const NeumannConfig& cfg, OracleStreams& streams);

struct RunSettings {
    std::int64_t T = 0;
    std::uint64_t seed = 0;
    double alpha = 1.0;
    double eta_x = 1.0;
    double eta_y = 1.0;
    double gamma = 1.0;
    bool shared_xi = true;
    NeumannConfig neumann;  // ada_bio only; N must be resolved
    double tiada_alpha = 0.6;
    double tiada_beta = 0.4;
    double fixed_beta = 0.0;
    RealVector x0;
    RealVector y0;  // ignored for single-level algorithms
};

using AnyProblem = std::variant<SingleLevelProblem, MinimaxProblem, BilevelProblem>;

/// Executes T iterations and records per-iteration metrics; deterministic
/// given (settings, seed). Metrics needing missing analytic truth are
/// emitted as absent. Throws std::invalid_argument when the algorithm and
/// problem kind do not match.
RunTrace run(const AnyProblem& problem, Algorithm algo, const RunSettings& settings);

}  // namespace hieropt
