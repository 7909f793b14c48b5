#include "hieropt/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "hieropt/baselines.hpp"

namespace hieropt {

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::ada_nsgdm: return "ada-nsgdm";
        case Algorithm::ada_minimax: return "ada-minimax";
        case Algorithm::ada_bio: return "ada-bio";
        case Algorithm::ada_minimax_practical: return "ada-minimax-practical";
        case Algorithm::sgda: return "sgda";
        case Algorithm::tiada: return "tiada";
        case Algorithm::adagradnorm_gda: return "adagradnorm-gda";
        case Algorithm::nsgdm_fixed: return "nsgdm-fixed";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::ada_nsgdm, Algorithm::ada_minimax, Algorithm::ada_bio,
                        Algorithm::ada_minimax_practical, Algorithm::sgda, Algorithm::tiada,
                        Algorithm::adagradnorm_gda, Algorithm::nsgdm_fixed})
        if (name == to_string(a)) return a;
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

namespace {

/// Normalized momentum step shared by the three adaptive algorithms. The
/// recorded step length is the norm of the displacement as applied, so the
/// invariant check is not polluted by cancellation against large iterates.
void normalized_x_step(OptimizerState& state, double eta) {
    const double m_norm = norm(state.m);
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

}  // namespace

void ada_nsgdm_step(OptimizerState& state, const SingleLevelProblem& problem,
                    RngStream& rng_upper, RngStream& rng_upper_tilde) {
    const RealVector g = problem.sample_grad(state.x, rng_upper);
    const RealVector g_tilde = problem.sample_grad(state.x, rng_upper_tilde);
    state.schedule.ingest(norm_sq(sub(g, g_tilde)), 0.0);
    state.m = state.t == 0 ? g : momentum_update(state.m, g, state.schedule.beta_t());
    ++state.t;
    normalized_x_step(state, state.schedule.eta_x_t());
}

void ada_minimax_step(OptimizerState& state, const MinimaxProblem& problem,
                      OracleStreams& streams, bool shared_xi, bool practical_prev_grad) {
    const RealVector gx = problem.sample_grad_x(state.x, state.y, streams.upper);
    double diff_sq = 0.0;
    if (practical_prev_grad) {
        if (state.t >= 1) diff_sq = norm_sq(sub(gx, state.prev_gx));
        state.prev_gx = gx;
    } else {
        const RealVector gx_tilde = problem.sample_grad_x(state.x, state.y, streams.upper_tilde);
        diff_sq = norm_sq(sub(gx, gx_tilde));
    }
    const RealVector gy =
        problem.sample_grad_y(state.x, state.y, shared_xi ? streams.upper : streams.lower);
    state.schedule.ingest(diff_sq, norm_sq(gy));
    state.m = state.t == 0 ? gx : momentum_update(state.m, gx, state.schedule.beta_t());
    ++state.t;
    normalized_x_step(state, state.schedule.eta_x_t());
    state.y = axpy(state.y, state.schedule.eta_y_t(), gy);
}

void ada_bio_step(OptimizerState& state, const BilevelProblem& problem,
                  const NeumannConfig& cfg, OracleStreams& streams) {
    const RealVector gx = hypergrad_estimate(problem, state.x, state.y, cfg, streams.upper);
    const RealVector gx_tilde =
        hypergrad_estimate(problem, state.x, state.y, cfg, streams.upper_tilde);
    const RealVector gy = problem.sample_grad_y_g(state.x, state.y, streams.lower);
    state.schedule.ingest(norm_sq(sub(gx, gx_tilde)), norm_sq(gy));
    state.m = state.t == 0 ? gx : momentum_update(state.m, gx, state.schedule.beta_t());
    ++state.t;
    normalized_x_step(state, state.schedule.eta_x_t());
    state.y = axpy(state.y, -state.schedule.eta_y_t(), gy);
}

namespace {

struct Recorder {
    RunTrace trace;
    double grad_norm_sum = 0.0;
    bool have_truth = true;

    void record(std::int64_t t, std::optional<double> grad_phi_norm) {
        TraceRow row;
        row.t = t;
        if (grad_phi_norm.has_value() && have_truth) {
            grad_norm_sum += *grad_phi_norm;
            row.grad_phi_norm = grad_phi_norm;
            row.avg_grad_norm = grad_norm_sum / static_cast<double>(t);
        } else {
            have_truth = false;
        }
        trace.rows.push_back(row);
    }

    TraceRow& last() { return trace.rows.back(); }

    void record_step_dev(bool moved, double step_norm, double eta) {
        if (!moved || !(eta > 0.0)) return;
        const double dev = std::abs(step_norm - eta) / eta;
        if (dev > trace.max_step_len_rel_dev) trace.max_step_len_rel_dev = dev;
    }
};

void check_dims(const RealVector& v, std::size_t dim, const char* what) {
    if (v.dim() != dim)
        throw std::invalid_argument(std::string(what) + ": initial point has dimension " +
                                    std::to_string(v.dim()) + ", problem expects " +
                                    std::to_string(dim));
}

RunTrace run_single(const SingleLevelProblem& problem, Algorithm algo,
                    const RunSettings& s) {
    check_dims(s.x0, problem.dim, "run");
    OracleStreams streams(s.seed);
    Recorder rec;
    rec.trace.normalized_steps = true;

    if (algo == Algorithm::ada_nsgdm) {
        AdaSchedule sched(s.alpha, s.eta_x, s.eta_y, s.gamma,
                          ScheduleOptions{UpperRate::single_level, false, 0});
        OptimizerState state(s.x0, RealVector(), std::move(sched));
        rec.trace.initial_x = state.x;
        for (std::int64_t t = 1; t <= s.T; ++t) {
            const RealVector x_before = state.x;
            ada_nsgdm_step(state, problem, streams.upper, streams.upper_tilde);
            rec.record(t, norm(problem.grad(x_before)));
            TraceRow& row = rec.last();
            row.alpha_t = state.schedule.alpha_t();
            row.alpha_prime_t = state.schedule.alpha_prime_t();
            row.eta_x_t = state.schedule.eta_x_t();
            row.sum_diff_sq = state.schedule.sum_diff_sq();
            row.sum_lower_sq = state.schedule.sum_lower_sq();
            rec.record_step_dev(state.x_moved, state.last_step_norm, *row.eta_x_t);
        }
        rec.trace.final_x = state.x;
    } else {  // nsgdm_fixed
        BaselineConfig cfg;
        cfg.eta_x = s.eta_x;
        cfg.eta_y = s.eta_y;
        cfg.fixed_beta = s.fixed_beta;
        cfg.gamma = s.gamma;
        cfg.validate();
        BaselineState state;
        state.x = s.x0;
        rec.trace.initial_x = state.x;
        for (std::int64_t t = 1; t <= s.T; ++t) {
            const RealVector x_before = state.x;
            nsgdm_fixed_step(state, problem, cfg, streams.upper);
            rec.record(t, norm(problem.grad(x_before)));
            rec.last().eta_x_t = state.last_eta_x;
            rec.record_step_dev(state.x_moved, state.last_step_norm, state.last_eta_x);
        }
        rec.trace.final_x = state.x;
    }
    rec.trace.noise_x = problem.noise;
    return std::move(rec.trace);
}

RunTrace run_minimax(const MinimaxProblem& problem, Algorithm algo, const RunSettings& s) {
    check_dims(s.x0, problem.dim_x, "run");
    check_dims(s.y0, problem.dim_y, "run");
    OracleStreams streams(s.seed);
    Recorder rec;

    auto truth_norm = [&](const RealVector& x) -> std::optional<double> {
        if (!problem.has_grad_phi()) return std::nullopt;
        return norm(problem.grad_phi(x));
    };
    auto dist_to_y_star = [&](const RealVector& x,
                              const RealVector& y) -> std::optional<double> {
        if (!problem.has_y_star()) return std::nullopt;
        return norm(sub(y, problem.y_star(x)));
    };

    const bool adaptive =
        algo == Algorithm::ada_minimax || algo == Algorithm::ada_minimax_practical;
    if (adaptive) {
        rec.trace.normalized_steps = true;
        const bool practical = algo == Algorithm::ada_minimax_practical;
        ScheduleOptions opts{UpperRate::hierarchical, practical, practical ? s.T : 0};
        if (practical && s.T == 0) opts = ScheduleOptions{UpperRate::hierarchical, false, 0};
        AdaSchedule sched(s.alpha, s.eta_x, s.eta_y, s.gamma, opts);
        OptimizerState state(s.x0, s.y0, std::move(sched));
        rec.trace.initial_x = state.x;
        for (std::int64_t t = 1; t <= s.T; ++t) {
            const RealVector x_before = state.x;
            const RealVector y_before = state.y;
            ada_minimax_step(state, problem, streams, s.shared_xi, practical);
            rec.record(t, truth_norm(x_before));
            TraceRow& row = rec.last();
            row.alpha_t = state.schedule.alpha_t();
            row.alpha_prime_t = state.schedule.alpha_prime_t();
            row.eta_x_t = state.schedule.eta_x_t();
            row.eta_y_t = state.schedule.eta_y_t();
            row.dist_y = dist_to_y_star(x_before, y_before);
            row.sum_diff_sq = state.schedule.sum_diff_sq();
            row.sum_lower_sq = state.schedule.sum_lower_sq();
            rec.record_step_dev(state.x_moved, state.last_step_norm, *row.eta_x_t);
        }
        rec.trace.final_x = state.x;
        rec.trace.final_y = state.y;
    } else {
        BaselineConfig cfg;
        cfg.eta_x = s.eta_x;
        cfg.eta_y = s.eta_y;
        cfg.tiada_alpha = s.tiada_alpha;
        cfg.tiada_beta = s.tiada_beta;
        cfg.gamma = s.gamma;
        cfg.validate();
        BaselineState state;
        state.x = s.x0;
        state.y = s.y0;
        rec.trace.initial_x = state.x;
        for (std::int64_t t = 1; t <= s.T; ++t) {
            const RealVector x_before = state.x;
            const RealVector y_before = state.y;
            switch (algo) {
                case Algorithm::sgda:
                    sgda_step(state, problem, cfg, streams, s.shared_xi);
                    break;
                case Algorithm::tiada:
                    tiada_step(state, problem, cfg, streams, s.shared_xi);
                    break;
                case Algorithm::adagradnorm_gda:
                    adagradnorm_gda_step(state, problem, cfg, streams, s.shared_xi);
                    break;
                default:
                    throw std::invalid_argument("run: algorithm/problem mismatch");
            }
            rec.record(t, truth_norm(x_before));
            TraceRow& row = rec.last();
            row.eta_x_t = state.last_eta_x;
            row.eta_y_t = state.last_eta_y;
            row.dist_y = dist_to_y_star(x_before, y_before);
            if (algo != Algorithm::sgda) row.sum_lower_sq = state.v_y;
        }
        rec.trace.final_x = state.x;
        rec.trace.final_y = state.y;
    }
    rec.trace.noise_x = problem.noise_x;
    rec.trace.noise_y = problem.noise_y;
    return std::move(rec.trace);
}

RunTrace run_bilevel(const BilevelProblem& problem, const RunSettings& s) {
    check_dims(s.x0, problem.dim_x, "run");
    check_dims(s.y0, problem.dim_y, "run");
    s.neumann.validate();
    OracleStreams streams(s.seed);
    Recorder rec;
    rec.trace.normalized_steps = true;

    AdaSchedule sched(s.alpha, s.eta_x, s.eta_y, s.gamma,
                      ScheduleOptions{UpperRate::hierarchical, false, 0});
    OptimizerState state(s.x0, s.y0, std::move(sched));
    rec.trace.initial_x = state.x;
    for (std::int64_t t = 1; t <= s.T; ++t) {
        const RealVector x_before = state.x;
        const RealVector y_before = state.y;
        ada_bio_step(state, problem, s.neumann, streams);
        std::optional<double> truth;
        if (problem.has_grad_phi()) truth = norm(problem.grad_phi(x_before));
        rec.record(t, truth);
        TraceRow& row = rec.last();
        row.alpha_t = state.schedule.alpha_t();
        row.alpha_prime_t = state.schedule.alpha_prime_t();
        row.eta_x_t = state.schedule.eta_x_t();
        row.eta_y_t = state.schedule.eta_y_t();
        if (problem.has_y_star()) row.dist_y = norm(sub(y_before, problem.y_star(x_before)));
        row.sum_diff_sq = state.schedule.sum_diff_sq();
        row.sum_lower_sq = state.schedule.sum_lower_sq();
        rec.record_step_dev(state.x_moved, state.last_step_norm, *row.eta_x_t);
    }
    rec.trace.final_x = state.x;
    rec.trace.final_y = state.y;
    rec.trace.noise_x = problem.noise_x_f;
    rec.trace.noise_y = problem.noise_y_g;
    return std::move(rec.trace);
}

}  // namespace

RunTrace run(const AnyProblem& problem, Algorithm algo, const RunSettings& settings) {
    if (settings.T < 0) throw std::invalid_argument("run: T must be >= 0");
    const auto start = std::chrono::steady_clock::now();
    RunTrace trace;
    switch (algo) {
        case Algorithm::ada_nsgdm:
        case Algorithm::nsgdm_fixed: {
            const auto* p = std::get_if<SingleLevelProblem>(&problem);
            if (!p)
                throw std::invalid_argument("run: a single-level problem is required for " +
                                            std::string(to_string(algo)));
            trace = run_single(*p, algo, settings);
            break;
        }
        case Algorithm::ada_minimax:
        case Algorithm::ada_minimax_practical:
        case Algorithm::sgda:
        case Algorithm::tiada:
        case Algorithm::adagradnorm_gda: {
            const auto* p = std::get_if<MinimaxProblem>(&problem);
            if (!p)
                throw std::invalid_argument("run: a minimax problem is required for " +
                                            std::string(to_string(algo)));
            trace = run_minimax(*p, algo, settings);
            break;
        }
        case Algorithm::ada_bio: {
            const auto* p = std::get_if<BilevelProblem>(&problem);
            if (!p) throw std::invalid_argument("run: a bilevel problem is required for ada-bio");
            trace = run_bilevel(*p, settings);
            break;
        }
    }
    trace.algorithm = to_string(algo);
    trace.seed = settings.seed;
    trace.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return trace;
}

}  // namespace hieropt
