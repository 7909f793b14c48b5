#include "hieropt/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace hieropt {

AdaSchedule::AdaSchedule(double alpha, double eta_x, double eta_y, double gamma,
                         ScheduleOptions opts)
    : alpha_(alpha), eta_x_(eta_x), eta_y_(eta_y), gamma_(gamma), opts_(opts) {
    if (!(alpha > 0.0)) throw std::invalid_argument("AdaSchedule: alpha must be > 0");
    if (!(eta_x > 0.0)) throw std::invalid_argument("AdaSchedule: eta_x must be > 0");
    if (!(eta_y > 0.0)) throw std::invalid_argument("AdaSchedule: eta_y must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("AdaSchedule: gamma must be > 0");
    if (opts.sqrt_T_horizon && opts.horizon_T < 1)
        throw std::invalid_argument("AdaSchedule: sqrt(T) horizon requires horizon_T >= 1");
}

void AdaSchedule::ingest(double diff_sq, double lower_sq) {
    if (!(diff_sq >= 0.0) || !(lower_sq >= 0.0))
        throw std::invalid_argument("AdaSchedule::ingest: statistics must be >= 0");
    sum_diff_sq_ += diff_sq;
    sum_lower_sq_ += lower_sq;
    ++t_;
}

void AdaSchedule::require_started(const char* what) const {
    if (t_ < 1)
        throw std::logic_error(std::string(what) + ": schedule read before first ingest");
}

double AdaSchedule::alpha_t() const {
    require_started("alpha_t");
    if (sum_diff_sq_ == 0.0) return 1.0;
    return alpha_ / std::sqrt(alpha_ * alpha_ + sum_diff_sq_);
}

double AdaSchedule::alpha_prime_t() const {
    require_started("alpha_prime_t");
    const double extra = sum_diff_sq_ + sum_lower_sq_;
    if (extra == 0.0) return 1.0;
    return alpha_ / std::sqrt(alpha_ * alpha_ + extra);
}

double AdaSchedule::beta_t() const { return 1.0 - alpha_t(); }

double AdaSchedule::eta_x_t() const {
    require_started("eta_x_t");
    const double a = opts_.upper_rate == UpperRate::hierarchical ? alpha_prime_t() : alpha_t();
    const double denom =
        opts_.sqrt_T_horizon ? std::sqrt(static_cast<double>(opts_.horizon_T))
                             : std::sqrt(static_cast<double>(t_));
    return eta_x_ * std::sqrt(a) / denom;
}

double AdaSchedule::eta_y_t() const {
    require_started("eta_y_t");
    return eta_y_ / std::sqrt(gamma_ * gamma_ + sum_lower_sq_);
}

RealVector momentum_update(const RealVector& m_prev, const RealVector& g, double beta) {
    require_same_dim(m_prev, g, "momentum_update");
    if (!(beta >= 0.0) || !(beta <= 1.0))
        throw std::invalid_argument("momentum_update: beta must lie in [0, 1]");
    RealVector out(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) out[i] = beta * m_prev[i] + (1.0 - beta) * g[i];
    return out;
}

}  // namespace hieropt
