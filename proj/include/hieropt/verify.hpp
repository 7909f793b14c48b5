#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hieropt/hypergrad.hpp"
#include "hieropt/problems.hpp"
#include "hieropt/trace.hpp"
#include "hieropt/vec.hpp"

namespace hieropt {

/// Two-sided noise constants and the concentration quantities derived from
/// them:
///   kappa_sigma = sigma_hi / sigma_lo            (0/0 convention: 1)
///   c0          = sigma_lo^2 / (4 sigma_hi^2 - 2 sigma_lo^2)
///   A_T(delta)  = 16 log(60 log(6T) / delta)
///   B_T(delta)  = 16 log^2(60 log(6T) / delta)
///   t0          = max{2, (A_T + c0 sqrt(B_T)) / c0^2}, rounded up.
struct BoundParams {
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    double delta = 0.01;
    std::int64_t T = 1;

    void validate() const;
    double kappa_sigma() const;
    double c0() const;
    double A_T() const;
    double B_T() const;
};

/// t0 per the formula above; 2 when sigma_lo = sigma_hi = 0. sigma_lo = 0
/// with sigma_hi > 0 leaves t0 undefined and is a hard error.
std::int64_t compute_t0(const BoundParams& params);

struct SandwichSeedResult {
    bool upper_ok = false;          // sum_diff_sq <= 4 sigma_hi^2 t for all t
    bool lower_ok_from_t0 = false;  // sum_diff_sq >= sigma_lo^2 t for all t in [t0, T]
    bool lower_ok_from_2 = false;   // same from t = 2 (informational)
};

struct SandwichReport {
    std::int64_t t0 = 0;
    std::int64_t T = 0;
    std::size_t seeds = 0;
    bool upper_all_ok = false;
    double lower_fraction = 0.0;
    bool lower_window_empty = false;  // t0 > T: the gated window is vacuous
    double lower_fraction_from_2 = 0.0;

    bool pass(double target = 0.95) const {
        return upper_all_ok && lower_fraction >= target;
    }
};

/// Per-seed sandwich check on a recorded trace. The trace must have been
/// produced under a two-sided noise model matching params (hard error
/// otherwise).
SandwichSeedResult check_momentum_sandwich_seed(const RunTrace& trace,
                                                const BoundParams& params);

/// Aggregates seed results into the fraction report.
class SandwichAccumulator {
public:
    explicit SandwichAccumulator(const BoundParams& params);
    void add(const RunTrace& trace);
    SandwichReport report() const;

private:
    BoundParams params_;
    std::int64_t t0_;
    std::size_t seeds_ = 0;
    std::size_t upper_ok_ = 0;
    std::size_t lower_ok_ = 0;
    std::size_t lower_ok_from_2_ = 0;
};

SandwichReport check_momentum_sandwich(const std::vector<RunTrace>& traces,
                                       const BoundParams& params);

/// Builds the momentum deviation by the step recursion
///   e_t = beta_t e_{t-1} + alpha_t eps_t + beta_t S_t   (e_1 = eps_1)
/// and by its closed form, returning the max difference norm over t.
/// Requires alpha_k + beta_k = 1.
double check_recursion_identity(const std::vector<double>& betas,
                                const std::vector<double>& alphas,
                                const std::vector<RealVector>& epsilons,
                                const std::vector<RealVector>& shifts);

struct AdaGradSumReport {
    double lhs_over_g = 0.0;   // sum ||g||^2 / G_t
    double rhs_over_g = 0.0;   // 2 sqrt(sum ||g||^2)
    double lhs_over_g2 = 0.0;  // sum ||g||^2 / G_t^2
    double rhs_over_g2 = 0.0;  // 2 log(G_T / G_0)
    bool ok = false;
};

/// Both accumulated-step inequalities on an arbitrary norm sequence.
AdaGradSumReport check_adagrad_sums(const std::vector<double>& grad_norms, double G0);

struct NeumannBoundReport {
    bool ok = false;
    double max_error_excess = 0.0;  // max over (matrix, N) of error - bound
    double max_norm_excess = 0.0;   // max of ||H_N|| - 1/mu_g
    bool monotone = true;           // error non-increasing in N per matrix
    double worst_error = 0.0;
    double worst_bound = 0.0;
};

/// Deterministic-Hessian operator bound: for random symmetric matrices with
/// spectrum in [mu_g, l_g1] (extremes pinned) and every N in [n_min, n_max],
/// reconstructs H_N through the matrix-free series apply and compares
/// ||H_N - A^{-1}||_2 against (1/mu_g)(1 - mu_g/l_g1)^N via an
/// eigendecomposition oracle, with 1e-10 slack.
NeumannBoundReport check_neumann_bound(double mu_g, double l_g1, int n_min, int n_max,
                                       int num_matrices, int max_dim, std::uint64_t seed);

struct HypergradBiasReport {
    double bias = 0.0;   // ||sample mean - grad Phi(x)||
    double bound = 0.0;  // (l_g1 l_f0 / mu_g)(1 - mu_g/l_g1)^N
    double se = 0.0;     // sqrt(trace(cov)/n) of the sample mean
    double l_f0 = 0.0;   // ||grad_y f(x, y*(x))||
    bool ok = false;     // bias <= bound + 5 se
};

/// Monte-Carlo bias of the stochastic hypergradient at (x, y*(x)) against
/// the analytic grad Phi. Requires y_star and grad_phi on the problem.
HypergradBiasReport check_hypergrad_bias(const BilevelProblem& problem, const RealVector& x,
                                         const NeumannConfig& cfg, std::size_t samples,
                                         std::uint64_t seed);

struct SlopeReport {
    double slope = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    bool ok = false;
    std::size_t points = 0;
};

/// Least-squares slope of log(value) against log(t) over the positive
/// entries; throws when fewer than two usable points exist.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& t_value);

/// Qualitative lower-level error rate: the cumulative squared distance
/// sum_{k<=t} ||y_k - y*_k||^2 on a noisy trace should grow like sqrt(t);
/// fits the log-log slope over t in [max(10, T/10), T] and checks it lies
/// in [0.3, 0.7].
SlopeReport check_lower_level_rate(const RunTrace& trace);

}  // namespace hieropt
