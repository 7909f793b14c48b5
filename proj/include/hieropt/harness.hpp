#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hieropt/config.hpp"
#include "hieropt/trace.hpp"

namespace hieropt {

/// Executes the configured run, writes the trace CSV to
/// config.output_path (skipped when empty), and returns the trace with the
/// serialized config echoed in its metadata. Bit-reproducible per
/// (config, seed).
RunTrace run_experiment(const RunConfig& config);

struct SweepRow {
    std::string value;
    std::uint64_t seed = 0;
    double final_avg_grad_norm = 0.0;  // NaN when truth was unavailable
    double best_grad_phi_norm = 0.0;
};

/// One run per (axis value, seed), fanned out across HIEROPT_THREADS
/// workers (default: machine parallelism); per-run CSVs plus summary.csv
/// land in out_dir. Output is identical to sequential execution.
std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& axis,
                                const std::vector<std::string>& values,
                                const std::vector<std::uint64_t>& seeds,
                                const std::string& out_dir);

/// Worker cap from HIEROPT_THREADS, clamped to >= 1.
unsigned sweep_parallelism();

inline constexpr const char* kSummaryCsvHeader =
    "value,seed,final_avg_grad_norm,best_grad_phi_norm";

}  // namespace hieropt
