#include "hieropt/hypergrad.hpp"

#include <cmath>
#include <stdexcept>

namespace hieropt {

void NeumannConfig::validate() const {
    if (N < 1) throw std::invalid_argument("NeumannConfig: N must be >= 1");
    if (!(mu_g > 0.0) || !(l_g1 >= mu_g))
        throw std::invalid_argument("NeumannConfig: need 0 < mu_g <= l_g1");
}

RealVector neumann_apply(const HvpFn& hvp, const NeumannConfig& cfg, const RealVector& v,
                         RngStream& rng) {
    cfg.validate();
    const double inv_l = 1.0 / cfg.l_g1;
    RealVector acc = v;  // n = 0 term: empty product
    for (int n = 1; n < cfg.N; ++n) {
        RealVector w = v;
        if (cfg.reuse_sample_per_term) {
            // One sample per term: replaying the same stream state applies
            // the identical sampled operator at every factor.
            const RngStream term_rng(rng.next_u64(), "neumann-econ-term");
            for (int j = 1; j <= n; ++j) {
                RngStream factor_rng = term_rng;
                w = axpy(w, -inv_l, hvp(w, factor_rng));
            }
        } else {
            for (int j = 1; j <= n; ++j) w = axpy(w, -inv_l, hvp(w, rng));
        }
        acc = add(acc, w);
    }
    return scale(acc, inv_l);
}

RealVector neumann_inverse_apply(const BilevelProblem& problem, const RealVector& x,
                                 const RealVector& y, const RealVector& v,
                                 const NeumannConfig& cfg, RngStream& rng) {
    if (v.dim() != problem.dim_y)
        throw std::invalid_argument("neumann_inverse_apply: v dimension mismatch");
    auto hvp = [&](const RealVector& w, RngStream& r) { return problem.hvp_yy_g(x, y, w, r); };
    return neumann_apply(hvp, cfg, v, rng);
}

RealVector hypergrad_estimate(const BilevelProblem& problem, const RealVector& x,
                              const RealVector& y, const NeumannConfig& cfg, RngStream& rng) {
    const RealVector gx = problem.sample_grad_x_f(x, y, rng);
    const RealVector gy = problem.sample_grad_y_f(x, y, rng);
    const RealVector h = neumann_inverse_apply(problem, x, y, gy, cfg, rng);
    const RealVector correction = problem.jvp_xy_g(x, y, h, rng);
    return sub(gx, correction);
}

RealVector hypergrad_exact(const BilevelProblem& problem, const RealVector& x,
                           const RealVector& y) {
    const Matrix a = problem.hess_yy_g(x, y);
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("hypergrad_exact: lower-level Hessian is not positive definite");
    const EVector solved = llt.solve(to_eigen(problem.grad_y_f(x, y)));
    const EVector gx = to_eigen(problem.grad_x_f(x, y));
    return from_eigen(gx - problem.jac_xy_g(x, y) * solved);
}

int recommended_N(std::int64_t T, const NeumannConfig& cfg) {
    cfg.validate();
    if (T < 2) throw std::invalid_argument("recommended_N: T must be >= 2");
    if (cfg.mu_g == cfg.l_g1) return 1;
    const double rate = std::log(1.0 / (1.0 - cfg.mu_g / cfg.l_g1));
    const double n = 3.0 * std::log(static_cast<double>(T)) / (2.0 * rate);
    return std::max(1, static_cast<int>(std::ceil(n)));
}

}  // namespace hieropt
