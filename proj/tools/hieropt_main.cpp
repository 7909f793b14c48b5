#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "hieropt/harness.hpp"
#include "hieropt/optimizers.hpp"
#include "hieropt/verify.hpp"

namespace {

using namespace hieropt;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

void usage(std::ostream& out) {
    out << "usage: hieropt <command> [options]\n"
           "\n"
           "commands:\n"
           "  run     --config <path> [--set key=value ...] [--out <dir>]\n"
           "  sweep   --config <path> --axis <key> --values v1,v2,... \n"
           "          [--seeds a,b,c] [--set key=value ...] [--out <dir>]\n"
           "  verify  [--check <name>|all]   names: recursion, adagrad-sum,\n"
           "          neumann, hypergrad-bias, sandwich, lower-rate\n";
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

struct ParsedArgs {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> sets;
    std::string out_dir;
    std::string axis;
    std::vector<std::string> values;
    std::vector<std::uint64_t> seeds;
    std::string check = "all";
};

ParsedArgs parse_args(int argc, char** argv, int start) {
    ParsedArgs a;
    for (int i = start; i < argc; ++i) {
        const std::string flag = argv[i];
        auto need_value = [&](const char* name) -> std::string {
            if (i + 1 >= argc)
                throw std::invalid_argument(std::string(name) + " requires a value");
            return argv[++i];
        };
        if (flag == "--config") a.config_path = need_value("--config");
        else if (flag == "--set") {
            const std::string kv = need_value("--set");
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
            a.sets.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        } else if (flag == "--out") a.out_dir = need_value("--out");
        else if (flag == "--axis") a.axis = need_value("--axis");
        else if (flag == "--values") a.values = split_commas(need_value("--values"));
        else if (flag == "--seeds") {
            for (const std::string& s : split_commas(need_value("--seeds")))
                a.seeds.push_back(std::stoull(s));
        } else if (flag == "--check") a.check = need_value("--check");
        else throw std::invalid_argument("unknown flag '" + flag + "'");
    }
    return a;
}

RunConfig load_config(const ParsedArgs& a) {
    RunConfig c = a.config_path.empty() ? RunConfig{} : parse_config_file(a.config_path);
    for (const auto& [k, v] : a.sets) apply_set(c, k, v);
    return c;
}

int cmd_run(const ParsedArgs& a) {
    RunConfig c = load_config(a);
    if (!a.out_dir.empty() && !c.output_path.empty()) {
        std::filesystem::create_directories(a.out_dir);
        c.output_path = a.out_dir + "/" +
                        std::filesystem::path(c.output_path).filename().string();
    }
    const RunTrace trace = run_experiment(c);
    std::printf("wrote %s (%zu rows, algorithm %s, wall %.3fs)\n", c.output_path.c_str(),
                trace.rows.size(), trace.algorithm.c_str(), trace.wall_time_sec);
    if (!trace.rows.empty() && trace.rows.back().avg_grad_norm.has_value())
        std::printf("final avg grad norm: %.6g\n", *trace.rows.back().avg_grad_norm);
    return kExitOk;
}

int cmd_sweep(const ParsedArgs& a) {
    if (a.axis.empty()) throw std::invalid_argument("sweep requires --axis");
    if (a.values.empty()) throw std::invalid_argument("sweep requires a nonempty --values list");
    RunConfig base = load_config(a);
    std::vector<std::uint64_t> seeds = a.seeds.empty()
                                           ? std::vector<std::uint64_t>{base.seed}
                                           : a.seeds;
    const std::string out = a.out_dir.empty() ? "sweep_out" : a.out_dir;
    const auto rows = run_sweep(base, a.axis, a.values, seeds, out);
    std::printf("wrote %zu traces and summary.csv under %s\n", rows.size(), out.c_str());
    return kExitOk;
}

struct CheckOutcome {
    bool ran = false;
    bool ok = true;
};

void report(CheckOutcome& outcome, const std::string& name, bool ok, const std::string& detail) {
    outcome.ran = true;
    outcome.ok = outcome.ok && ok;
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void check_recursion(CheckOutcome& outcome) {
    RngStream rng(2024, "verify-recursion");
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 100, dim = 5;
        std::vector<double> betas(n), alphas(n);
        std::vector<RealVector> eps(n), shifts(n);
        for (std::size_t k = 0; k < n; ++k) {
            betas[k] = rng.uniform(0.0, 0.99);
            alphas[k] = 1.0 - betas[k];
            RealVector e(dim), s(dim);
            for (std::size_t j = 0; j < dim; ++j) {
                e[j] = rng.uniform(-1.0, 1.0);
                s[j] = rng.uniform(-1.0, 1.0);
            }
            eps[k] = e;
            shifts[k] = s;
        }
        worst = std::max(worst, check_recursion_identity(betas, alphas, eps, shifts));
    }
    report(outcome, "recursion", worst <= 1e-8,
           "max closed-form deviation " + fmt(worst) + " (tolerance 1e-8)");
}

void check_adagrad(CheckOutcome& outcome) {
    RngStream rng(7, "verify-adagrad");
    bool ok = true;
    double margin1 = 1e300, margin2 = 1e300;
    for (int rep = 0; rep < 100; ++rep) {
        const double scale = std::exp(rng.uniform(-2.0, 3.0));
        std::vector<double> norms(10000);
        for (double& v : norms) v = std::abs(rng.gaussian()) * scale;
        const double g0 = rng.uniform(0.1, 2.0);
        const auto rep_out = check_adagrad_sums(norms, g0);
        ok = ok && rep_out.ok;
        margin1 = std::min(margin1, rep_out.rhs_over_g - rep_out.lhs_over_g);
        margin2 = std::min(margin2, rep_out.rhs_over_g2 - rep_out.lhs_over_g2);
    }
    report(outcome, "adagrad-sum", ok,
           "min margins " + fmt(margin1) + " / " + fmt(margin2) + " over 100 sequences");
}

void check_neumann(CheckOutcome& outcome) {
    const auto rep = check_neumann_bound(1.0, 2.0, 1, 20, 50, 16, 11);
    // 1-D saturation: (mu, l) = (1, 2), N = 1 meets the bound with equality.
    const auto sat = check_neumann_bound(1.0, 2.0, 1, 1, 1, 1, 5);
    const bool saturated = std::abs(sat.worst_error - 0.5) <= 1e-12;
    report(outcome, "neumann", rep.ok && rep.monotone && saturated,
           "max bound excess " + fmt(rep.max_error_excess) + ", norm excess " +
               fmt(rep.max_norm_excess) + ", 1-D N=1 error " + fmt(sat.worst_error));
}

void check_hypergrad(CheckOutcome& outcome) {
    // Deterministic 1-D: measured bias equals the geometric prediction.
    const BilevelProblem onedim = make_onedim_bilevel();
    bool det_ok = true;
    double det_worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
        NeumannConfig cfg{n, 2.0, 1.0, false};
        const auto rep = check_hypergrad_bias(onedim, RealVector{0.0}, cfg, 1, 3);
        const double predicted = std::pow(0.5, n);  // (1 - mu/l)^N * |grad_y f|
        const double dev = std::abs(rep.bias - predicted);
        det_worst = std::max(det_worst, dev);
        det_ok = det_ok && dev <= 1e-10;
    }
    // Stochastic 4x4 instance.
    BilevelProblem quad = make_quadratic_bilevel(4, 4, 1.0, 2.0, 3, 0.2);
    quad.noise_x_f = NoiseModel::gaussian(0.3);
    quad.noise_y_f = NoiseModel::gaussian(0.3);
    NeumannConfig cfg{1, quad.l_g1, quad.mu_g, false};
    cfg.N = recommended_N(10000, cfg);
    const auto mc = check_hypergrad_bias(quad, RealVector{0.4, -0.2, 0.1, 0.3}, cfg, 20000, 9);
    report(outcome, "hypergrad-bias", det_ok && mc.ok,
           "1-D prediction deviation " + fmt(det_worst) + "; MC bias " + fmt(mc.bias) +
               " vs bound+5se " + fmt(mc.bound + 5.0 * mc.se) + " (N=" +
               std::to_string(cfg.N) + ")");
}

RunConfig sandwich_base_config() {
    RunConfig c;
    c.problem = "quad-single";
    c.dim_x = 10;
    c.mu = 1.0;
    c.L = 10.0;
    c.algorithm = "ada-nsgdm";
    c.T = 10000;
    c.alpha = 1.0;
    c.eta_x = 0.5;
    c.noise_x = NoiseModel::annulus(1.0, 2.0);
    c.output_path = "";
    return c;
}

void check_sandwich(CheckOutcome& outcome) {
    BoundParams params;
    params.sigma_lo = 1.0;
    params.sigma_hi = 2.0;
    params.delta = 0.01;
    params.T = 10000;
    SandwichAccumulator acc(params);
    RunConfig base = sandwich_base_config();
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        RunConfig c = base;
        c.seed = seed;
        acc.add(run_experiment(c));
    }
    const SandwichReport rep = acc.report();
    std::string detail = "upper bound held on " + std::to_string(rep.seeds) +
                         "/200 seeds; lower-bound fraction " + fmt(rep.lower_fraction) +
                         " from t0=" + std::to_string(rep.t0);
    if (rep.lower_window_empty)
        detail += " (window empty at T=" + std::to_string(rep.T) + "; fraction from t=2: " +
                  fmt(rep.lower_fraction_from_2) + ")";
    report(outcome, "sandwich", rep.pass(0.95), detail);
}

void check_lower_rate(CheckOutcome& outcome) {
    RunConfig c;
    c.problem = "quad-minimax";
    c.dim_x = 5;
    c.dim_y = 5;
    c.mu = 1.0;
    c.L = 3.0;
    c.algorithm = "ada-minimax";
    c.T = 10000;
    c.alpha = 1.0;
    c.eta_x = 1.0;
    c.eta_y = 1.0;
    c.gamma = 1.0;
    c.noise_x = NoiseModel::annulus(1.0, 2.0);
    c.noise_y = NoiseModel::annulus(1.0, 2.0);
    c.output_path = "";
    const RunTrace trace = run_experiment(c);
    const SlopeReport rep = check_lower_level_rate(trace);
    report(outcome, "lower-rate", rep.ok,
           "log-log slope of cumulative lower-level error " + fmt(rep.slope) +
               " (target [0.3, 0.7])");
}

int cmd_verify(const ParsedArgs& a) {
    CheckOutcome outcome;
    const std::string& c = a.check;
    const bool all = c == "all";
    if (all || c == "recursion") check_recursion(outcome);
    if (all || c == "adagrad-sum") check_adagrad(outcome);
    if (all || c == "neumann") check_neumann(outcome);
    if (all || c == "hypergrad-bias") check_hypergrad(outcome);
    if (all || c == "sandwich") check_sandwich(outcome);
    if (all || c == "lower-rate") check_lower_rate(outcome);
    if (!outcome.ran) throw std::invalid_argument("unknown check '" + c + "'");
    return outcome.ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        usage(std::cerr);
        return kExitUsage;
    }
    const std::string command = argv[1];
    try {
        const ParsedArgs args = parse_args(argc, argv, 2);
        if (command == "run") return cmd_run(args);
        if (command == "sweep") return cmd_sweep(args);
        if (command == "verify") return cmd_verify(args);
        usage(std::cerr);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        usage(std::cerr);
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
