#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hieropt/noise.hpp"
#include "hieropt/optimizers.hpp"

namespace hieropt {

/// Flat experiment configuration. Serialized as one key=value pair per
/// line with '#' comments; parse(serialize(c)) reproduces c exactly.
struct RunConfig {
    std::string problem = "onedim";  // onedim|quad-minimax|quad-bilevel|quad-single|auc
    std::int64_t dim_x = 1;
    std::int64_t dim_y = 1;
    double mu = 1.0;
    double L = 2.0;
    double mu_g = 1.0;
    double l_g1 = 2.0;
    std::uint64_t problem_seed = 1;

    std::string algorithm = "ada-minimax";
    std::int64_t T = 100;
    std::uint64_t seed = 1;
    double alpha = 1.0;
    double eta_x = 1.0;
    double eta_y = 1.0;
    double gamma = 1.0;

    NoiseModel noise_x;
    NoiseModel noise_y;
    NoiseModel noise_fy;  // bilevel grad_y_f oracle
    double sigma_hess = 0.0;

    std::string neumann_N = "auto";  // "auto" or a positive integer
    bool shared_xi = true;
    double tiada_alpha = 0.6;
    double tiada_beta = 0.4;
    double fixed_beta = 0.0;

    /// Broadcast initial scalars; unset means the problem's default.
    std::optional<double> x0;
    std::optional<double> y0;

    std::string output_path = "trace.csv";

    bool operator==(const RunConfig&) const = default;
};

/// Parses a key=value config file ('#' comments, blank lines ignored).
/// Unknown keys are a hard error.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Applies one key=value override. The pseudo-key "sigma" expands to
/// gaussian noise of that magnitude on both gradient oracles (none at 0).
void apply_set(RunConfig& config, const std::string& key, const std::string& value);

std::string serialize(const RunConfig& config);

struct BuiltRun {
    AnyProblem problem;
    Algorithm algo;
    RunSettings settings;
};

/// Validates the config, constructs the problem instance, resolves
/// neumann_N = "auto" through the series-length rule, and fills the initial
/// point. Invalid values are hard errors.
BuiltRun build_run(const RunConfig& config);

}  // namespace hieropt
