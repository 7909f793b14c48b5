#pragma once

#include <cstdint>

#include "hieropt/vec.hpp"

namespace hieropt {

/// How the upper-level step size is formed from the running statistics.
///   hierarchical : eta_x * sqrt(alpha'_t) / sqrt(t)   (minimax / bilevel)
///   single_level : eta_x * sqrt(alpha_t)  / sqrt(t)   (plain nonconvex)
enum class UpperRate { hierarchical, single_level };

struct ScheduleOptions {
    UpperRate upper_rate = UpperRate::hierarchical;
    /// Practical variant: divide the upper step by sqrt(T) instead of
    /// sqrt(t). Requires horizon_T >= 1 when set.
    bool sqrt_T_horizon = false;
    std::int64_t horizon_T = 0;
};

/// Running accumulators producing the adaptive momentum parameter and both
/// step sizes:
///
///   alpha_t  = alpha / sqrt(alpha^2 + sum_k ||g_{x,k} - g~_{x,k}||^2)
///   alpha'_t = alpha / sqrt(alpha^2 + sum_k ||g_{x,k} - g~_{x,k}||^2 + ||g_{y,k}||^2)
///   beta_t   = 1 - alpha_t
///   eta_x_t  = eta_x * sqrt(alpha'_t) / sqrt(t)    (or alpha_t, see UpperRate)
///   eta_y_t  = eta_y / sqrt(gamma^2 + sum_k ||g_{y,k}||^2)
///
/// Sums are inclusive: values for iteration t are read only after the
/// iteration-t statistics have been ingested. Reading before the first
/// ingest is a logic error.
class AdaSchedule {
public:
    AdaSchedule(double alpha, double eta_x, double eta_y, double gamma,
                ScheduleOptions opts = {});

    /// Adds iteration-t statistics: diff_sq = ||g_{x,t} - g~_{x,t}||^2 and
    /// lower_sq = ||g_{y,t}||^2 (0 for single-level use). Negative inputs
    /// are a hard error.
    void ingest(double diff_sq, double lower_sq);

    double alpha_t() const;
    double alpha_prime_t() const;
    double beta_t() const;
    double eta_x_t() const;
    double eta_y_t() const;

    std::int64_t t() const { return t_; }
    double sum_diff_sq() const { return sum_diff_sq_; }
    double sum_lower_sq() const { return sum_lower_sq_; }
    double alpha_base() const { return alpha_; }
    double eta_x_base() const { return eta_x_; }
    double eta_y_base() const { return eta_y_; }
    double gamma() const { return gamma_; }
    const ScheduleOptions& options() const { return opts_; }

private:
    void require_started(const char* what) const;

    double alpha_;
    double eta_x_;
    double eta_y_;
    double gamma_;
    ScheduleOptions opts_;
    double sum_diff_sq_ = 0.0;
    double sum_lower_sq_ = 0.0;
    std::int64_t t_ = 0;
};

/// beta * m_prev + (1 - beta) * g. Dimensions must match, beta in [0, 1]
/// (beta = 1 freezes the momentum, the fixed-momentum baseline uses it).
RealVector momentum_update(const RealVector& m_prev, const RealVector& g, double beta);

}  // namespace hieropt
