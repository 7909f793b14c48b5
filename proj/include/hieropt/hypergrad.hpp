#pragma once

#include <cstdint>
#include <functional>

#include "hieropt/problems.hpp"

namespace hieropt {

/// Truncated-series configuration for the randomized inverse-Hessian
/// estimator. l_g1 is the spectral normalizer (an upper bound on the
/// lower-level Hessian spectrum), mu_g the strong-convexity modulus.
struct NeumannConfig {
    int N = 1;
    double l_g1 = 1.0;
    double mu_g = 1.0;
    /// Economy mode: one Hessian sample per series term, applied n times,
    /// instead of a fresh sample per factor. Excluded from acceptance.
    bool reuse_sample_per_term = false;

    void validate() const;
};

using HvpFn = std::function<RealVector(const RealVector&, RngStream&)>;

/// Applies the truncated-series inverse approximation
///   H = (1/l) * sum_{n=0}^{N-1} prod_{j=1}^{n} (I - Hessian_sample/l)
/// to v, product by product, with a fresh sample per factor (empty product
/// for n = 0). Only Hessian-vector products are used.
RealVector neumann_apply(const HvpFn& hvp, const NeumannConfig& cfg, const RealVector& v,
                         RngStream& rng);

/// neumann_apply wired to the problem's stochastic lower-level Hessian.
RealVector neumann_inverse_apply(const BilevelProblem& problem, const RealVector& x,
                                 const RealVector& y, const RealVector& v,
                                 const NeumannConfig& cfg, RngStream& rng);

/// One stochastic hypergradient sample:
///   grad_x F - (Jacobian sample) * H * grad_y F,
/// with the Jacobian sample independent of the Hessian samples and of the
/// gradient noise.
RealVector hypergrad_estimate(const BilevelProblem& problem, const RealVector& x,
                              const RealVector& y, const NeumannConfig& cfg, RngStream& rng);

/// Direct-solve oracle: grad_x f - J [hess_yy g]^{-1} grad_y f at (x, y),
/// deterministic. Verification only; throws if the Hessian is not positive
/// definite.
RealVector hypergrad_exact(const BilevelProblem& problem, const RealVector& x,
                           const RealVector& y);

/// Smallest N with N >= 3 log T / (2 log(1/(1 - mu_g/l_g1))); 1 when
/// mu_g == l_g1 (the series is exact after one term).
int recommended_N(std::int64_t T, const NeumannConfig& cfg);

}  // namespace hieropt
