#include "hieropt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hieropt/linalg.hpp"

namespace hieropt {

void BoundParams::validate() const {
    if (!(sigma_lo >= 0.0)) throw std::invalid_argument("BoundParams: sigma_lo must be >= 0");
    if (sigma_hi < sigma_lo)
        throw std::invalid_argument("BoundParams: sigma_hi must be >= sigma_lo");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("BoundParams: delta must lie in (0, 1)");
    if (T < 1) throw std::invalid_argument("BoundParams: T must be >= 1");
}

double BoundParams::kappa_sigma() const {
    validate();
    if (sigma_hi == 0.0) return 1.0;  // 0/0 convention
    if (sigma_lo == 0.0)
        throw std::invalid_argument("BoundParams: kappa undefined for sigma_lo = 0 < sigma_hi");
    return sigma_hi / sigma_lo;
}

double BoundParams::c0() const {
    validate();
    if (sigma_lo == 0.0)
        throw std::invalid_argument("BoundParams: c0 undefined for sigma_lo = 0");
    return sigma_lo * sigma_lo / (4.0 * sigma_hi * sigma_hi - 2.0 * sigma_lo * sigma_lo);
}

double BoundParams::A_T() const {
    validate();
    const double inner = 60.0 * std::log(6.0 * static_cast<double>(T)) / delta;
    return 16.0 * std::log(inner);
}

double BoundParams::B_T() const {
    const double l = A_T() / 16.0;
    return 16.0 * l * l;
}

std::int64_t compute_t0(const BoundParams& params) {
    params.validate();
    if (params.sigma_hi == 0.0) return 2;
    if (params.sigma_lo == 0.0)
        throw std::invalid_argument("compute_t0: undefined for sigma_lo = 0 < sigma_hi");
    const double c = params.c0();
    const double raw = (params.A_T() + c * std::sqrt(params.B_T())) / (c * c);
    return std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(raw)));
}

namespace {

void require_matching_noise(const RunTrace& trace, const BoundParams& params) {
    const NoiseModel& n = trace.noise_x;
    if (!n.two_sided())
        throw std::invalid_argument(
            "check_momentum_sandwich: trace noise is not two-sided (" + n.to_string() + ")");
    const double tol = 1e-12;
    if (std::abs(n.norm_lower_bound() - params.sigma_lo) > tol ||
        std::abs(n.norm_upper_bound() - params.sigma_hi) > tol)
        throw std::invalid_argument(
            "check_momentum_sandwich: trace noise bounds do not match params (" +
            n.to_string() + ")");
}

}  // namespace

SandwichSeedResult check_momentum_sandwich_seed(const RunTrace& trace,
                                                const BoundParams& params) {
    require_matching_noise(trace, params);
    const std::int64_t t0 = compute_t0(params);
    const double upper_factor = 4.0 * params.sigma_hi * params.sigma_hi;
    const double lower_factor = params.sigma_lo * params.sigma_lo;

    SandwichSeedResult res;
    res.upper_ok = true;
    res.lower_ok_from_t0 = true;
    res.lower_ok_from_2 = true;
    for (const TraceRow& row : trace.rows) {
        if (!row.sum_diff_sq.has_value())
            throw std::invalid_argument("check_momentum_sandwich: trace lacks sum_diff_sq");
        const double t = static_cast<double>(row.t);
        const double sum = *row.sum_diff_sq;
        // 1e-9 relative slack absorbs accumulation rounding only; the bound
        // itself is deterministic.
        if (sum > upper_factor * t * (1.0 + 1e-9)) res.upper_ok = false;
        if (lower_factor > 0.0 && sum < lower_factor * t * (1.0 - 1e-9)) {
            if (row.t >= t0) res.lower_ok_from_t0 = false;
            if (row.t >= 2) res.lower_ok_from_2 = false;
        }
    }
    return res;
}

SandwichAccumulator::SandwichAccumulator(const BoundParams& params)
    : params_(params), t0_(compute_t0(params)) {}

void SandwichAccumulator::add(const RunTrace& trace) {
    const SandwichSeedResult r = check_momentum_sandwich_seed(trace, params_);
    ++seeds_;
    if (r.upper_ok) ++upper_ok_;
    if (r.lower_ok_from_t0) ++lower_ok_;
    if (r.lower_ok_from_2) ++lower_ok_from_2_;
}

SandwichReport SandwichAccumulator::report() const {
    SandwichReport rep;
    rep.t0 = t0_;
    rep.T = params_.T;
    rep.seeds = seeds_;
    rep.upper_all_ok = seeds_ > 0 && upper_ok_ == seeds_;
    rep.lower_fraction =
        seeds_ == 0 ? 0.0 : static_cast<double>(lower_ok_) / static_cast<double>(seeds_);
    rep.lower_window_empty = t0_ > params_.T;
    rep.lower_fraction_from_2 =
        seeds_ == 0 ? 0.0 : static_cast<double>(lower_ok_from_2_) / static_cast<double>(seeds_);
    return rep;
}

SandwichReport check_momentum_sandwich(const std::vector<RunTrace>& traces,
                                       const BoundParams& params) {
    SandwichAccumulator acc(params);
    for (const RunTrace& t : traces) acc.add(t);
    return acc.report();
}

double check_recursion_identity(const std::vector<double>& betas,
                                const std::vector<double>& alphas,
                                const std::vector<RealVector>& epsilons,
                                const std::vector<RealVector>& shifts) {
    const std::size_t n = betas.size();
    if (alphas.size() != n || epsilons.size() != n || shifts.size() != n || n == 0)
        throw std::invalid_argument("check_recursion_identity: sequence lengths must match");
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(alphas[k] + betas[k] - 1.0) > 1e-12)
            throw std::invalid_argument("check_recursion_identity: alpha_k + beta_k must be 1");

    // Step recursion.
    std::vector<RealVector> by_recursion(n);
    by_recursion[0] = epsilons[0];
    for (std::size_t k = 1; k < n; ++k) {
        RealVector e = scale(by_recursion[k - 1], betas[k]);
        e = axpy(e, alphas[k], epsilons[k]);
        e = axpy(e, betas[k], shifts[k]);
        by_recursion[k] = e;
    }

    // Closed form: e_t = beta_{2:t} e_1 + sum_k beta_{(k+1):t} alpha_k eps_k
    //                    + sum_k beta_{k:t} S_k, with empty products = 1.
    double max_dev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        RealVector closed(epsilons[0].dim());
        double prod = 1.0;  // beta_{(k+1):t} built backwards from k = t
        RealVector noise_sum(epsilons[0].dim());
        RealVector shift_sum(epsilons[0].dim());
        for (std::size_t k = t; k >= 1; --k) {
            noise_sum = axpy(noise_sum, prod * alphas[k], epsilons[k]);
            shift_sum = axpy(shift_sum, prod * betas[k], shifts[k]);
            prod *= betas[k];
        }
        closed = axpy(noise_sum, prod, epsilons[0]);  // prod = beta_{2:t} here
        closed = add(closed, shift_sum);
        max_dev = std::max(max_dev, norm(sub(closed, by_recursion[t])));
    }
    return max_dev;
}

AdaGradSumReport check_adagrad_sums(const std::vector<double>& grad_norms, double G0) {
    if (!(G0 > 0.0)) throw std::invalid_argument("check_adagrad_sums: G0 must be > 0");
    AdaGradSumReport rep;
    double g_sq_sum = 0.0;
    double running = G0 * G0;
    for (double gn : grad_norms) {
        const double sq = gn * gn;
        g_sq_sum += sq;
        running += sq;
        const double g_t = std::sqrt(running);
        rep.lhs_over_g += sq / g_t;
        rep.lhs_over_g2 += sq / running;
    }
    rep.rhs_over_g = 2.0 * std::sqrt(g_sq_sum);
    rep.rhs_over_g2 = 2.0 * std::log(std::sqrt(running) / G0);
    const double slack = 1e-12;
    rep.ok = rep.lhs_over_g <= rep.rhs_over_g + slack &&
             rep.lhs_over_g2 <= rep.rhs_over_g2 + slack;
    return rep;
}

NeumannBoundReport check_neumann_bound(double mu_g, double l_g1, int n_min, int n_max,
                                       int num_matrices, int max_dim, std::uint64_t seed) {
    if (!(mu_g > 0.0) || !(l_g1 >= mu_g))
        throw std::invalid_argument("check_neumann_bound: need 0 < mu_g <= l_g1");
    if (n_min < 1 || n_max < n_min)
        throw std::invalid_argument("check_neumann_bound: bad N range");
    RngStream rng(seed, "neumann-check");
    NeumannBoundReport rep;
    rep.ok = true;
    rep.max_error_excess = -1e300;
    rep.max_norm_excess = -1e300;

    for (int m = 0; m < num_matrices; ++m) {
        const int dim = 1 + static_cast<int>(rng.uniform() * max_dim);
        const Matrix a = spd_with_spectrum(dim, mu_g, l_g1, rng);
        const Matrix a_inv = a.llt().solve(Matrix::Identity(dim, dim));
        auto hvp = [&a](const RealVector& v, RngStream&) {
            return from_eigen(a * to_eigen(v));
        };
        double prev_error = 1e300;
        for (int n = n_min; n <= n_max; ++n) {
            NeumannConfig cfg{n, l_g1, mu_g, false};
            Matrix h(dim, dim);
            // Column-by-column reconstruction through the series apply.
            RngStream unused(0, "deterministic");
            for (int j = 0; j < dim; ++j) {
                RealVector e(static_cast<std::size_t>(dim));
                e[static_cast<std::size_t>(j)] = 1.0;
                h.col(j) = to_eigen(neumann_apply(hvp, cfg, e, unused));
            }
            const double error = sym_operator_norm(h - a_inv);
            const double bound = (1.0 / mu_g) * std::pow(1.0 - mu_g / l_g1, n);
            const double h_norm = sym_operator_norm(h);
            rep.max_error_excess = std::max(rep.max_error_excess, error - bound);
            rep.max_norm_excess = std::max(rep.max_norm_excess, h_norm - 1.0 / mu_g);
            if (error > bound + 1e-10 || h_norm > 1.0 / mu_g + 1e-10) rep.ok = false;
            if (error > prev_error + 1e-10) rep.monotone = false;
            if (error > rep.worst_error) {
                rep.worst_error = error;
                rep.worst_bound = bound;
            }
            prev_error = error;
        }
    }
    if (!rep.monotone) rep.ok = false;
    return rep;
}

HypergradBiasReport check_hypergrad_bias(const BilevelProblem& problem, const RealVector& x,
                                         const NeumannConfig& cfg, std::size_t samples,
                                         std::uint64_t seed) {
    cfg.validate();
    if (samples < 1) throw std::invalid_argument("check_hypergrad_bias: samples must be >= 1");
    if (!problem.has_y_star() || !problem.has_grad_phi())
        throw std::invalid_argument("check_hypergrad_bias: problem lacks analytic truth");
    const RealVector y = problem.y_star(x);
    RngStream rng(seed, "neumann");

    RealVector mean(problem.dim_x);
    RealVector m2(problem.dim_x);  // per-coordinate sum of squared deviations
    for (std::size_t i = 1; i <= samples; ++i) {
        const RealVector est = hypergrad_estimate(problem, x, y, cfg, rng);
        for (std::size_t j = 0; j < mean.dim(); ++j) {
            const double delta = est[j] - mean[j];
            mean[j] += delta / static_cast<double>(i);
            m2[j] += delta * (est[j] - mean[j]);
        }
    }
    double var_trace = 0.0;
    if (samples > 1)
        for (std::size_t j = 0; j < m2.dim(); ++j)
            var_trace += m2[j] / static_cast<double>(samples - 1);

    HypergradBiasReport rep;
    rep.l_f0 = norm(problem.grad_y_f(x, y));
    rep.bias = norm(sub(mean, problem.grad_phi(x)));
    rep.bound = (cfg.l_g1 * rep.l_f0 / cfg.mu_g) * std::pow(1.0 - cfg.mu_g / cfg.l_g1, cfg.N);
    rep.se = std::sqrt(var_trace / static_cast<double>(samples));
    rep.ok = rep.bias <= rep.bound + 5.0 * rep.se + 1e-10;
    return rep;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& t_value) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = 0;
    for (const auto& [t, v] : t_value) {
        if (!(t > 0.0) || !(v > 0.0)) continue;
        const double lx = std::log(t), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) throw std::invalid_argument("fit_loglog_slope: need at least two positive points");
    const double dn = static_cast<double>(n);
    const double denom = dn * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate abscissae");
    return (dn * sxy - sx * sy) / denom;
}

SlopeReport check_lower_level_rate(const RunTrace& trace) {
    SlopeReport rep;
    rep.lo = 0.3;
    rep.hi = 0.7;
    const std::int64_t T = trace.rows.empty() ? 0 : trace.rows.back().t;
    const std::int64_t t_lo = std::max<std::int64_t>(10, T / 10);
    std::vector<std::pair<double, double>> pts;
    double cum = 0.0;
    for (const TraceRow& row : trace.rows) {
        if (!row.dist_y.has_value())
            throw std::invalid_argument("check_lower_level_rate: trace lacks dist_y");
        cum += *row.dist_y * *row.dist_y;
        if (row.t >= t_lo) pts.emplace_back(static_cast<double>(row.t), cum);
    }
    rep.points = pts.size();
    rep.slope = fit_loglog_slope(pts);
    rep.ok = rep.slope >= rep.lo && rep.slope <= rep.hi;
    return rep;
}

}  // namespace hieropt
