#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hieropt/noise.hpp"
#include "hieropt/vec.hpp"

namespace hieropt {

/// One iteration record. Optional metrics are emitted as empty CSV fields
/// when the run has no analytic truth (or the algorithm has no such
/// quantity); they are never silently approximated.
struct TraceRow {
    std::int64_t t = 0;
    std::optional<double> grad_phi_norm;
    std::optional<double> avg_grad_norm;
    std::optional<double> alpha_t;
    std::optional<double> alpha_prime_t;
    std::optional<double> eta_x_t;
    std::optional<double> eta_y_t;
    std::optional<double> dist_y;
    std::optional<double> sum_diff_sq;
    std::optional<double> sum_lower_sq;
};

/// Frozen CSV schema; golden-file tested.
inline constexpr const char* kTraceCsvHeader =
    "t,grad_phi_norm,avg_grad_norm,alpha_t,alpha_prime_t,eta_x_t,eta_y_t,dist_y,"
    "sum_diff_sq,sum_lower_sq";

struct RunTrace {
    std::vector<TraceRow> rows;

    // Run metadata (not part of the CSV; wall time would break
    // byte-reproducibility).
    std::string config_echo;
    std::string algorithm;
    std::uint64_t seed = 0;
    double wall_time_sec = 0.0;
    RealVector initial_x;
    RealVector final_x;
    RealVector final_y;  // zero-dim for single-level runs
    NoiseModel noise_x;
    NoiseModel noise_y;
    /// Max over steps with nonzero momentum of | ||dx|| - eta | / eta;
    /// negative when the run took no normalized step.
    double max_step_len_rel_dev = -1.0;
    bool normalized_steps = false;
};

/// Serializes header plus one line per row, doubles as shortest-round-trip
/// decimal ("%.17g"), empty field for absent values.
std::string trace_to_csv(const RunTrace& trace);

/// Writes trace_to_csv(trace) to path; throws on I/O failure.
void write_trace_csv(const RunTrace& trace, const std::string& path);

}  // namespace hieropt
