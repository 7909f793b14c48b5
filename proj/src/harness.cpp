#include "hieropt/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "hieropt/optimizers.hpp"

namespace hieropt {

RunTrace run_experiment(const RunConfig& config) {
    BuiltRun built = build_run(config);
    RunTrace trace = run(built.problem, built.algo, built.settings);
    trace.config_echo = serialize(config);
    if (!config.output_path.empty()) write_trace_csv(trace, config.output_path);
    return trace;
}

unsigned sweep_parallelism() {
    if (const char* env = std::getenv("HIEROPT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

namespace {

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == ',' || c == '/' || c == '\\' || c == '=') c = '_';
    return s;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& base, const std::string& axis,
                                const std::vector<std::string>& values,
                                const std::vector<std::uint64_t>& seeds,
                                const std::string& out_dir) {
    if (values.empty()) throw std::invalid_argument("run_sweep: empty value list");
    if (seeds.empty()) throw std::invalid_argument("run_sweep: empty seed list");
    {
        // Axis validation up front: the parameter must exist in the config.
        RunConfig probe = base;
        apply_set(probe, axis, values.front());
    }
    std::filesystem::create_directories(out_dir);

    struct Task {
        RunConfig config;
        std::string value;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (const std::string& v : values) {
        for (std::uint64_t seed : seeds) {
            RunConfig c = base;
            apply_set(c, axis, v);
            c.seed = seed;
            c.output_path = out_dir + "/" + sanitize(axis) + "-" + sanitize(v) + "__seed-" +
                            std::to_string(seed) + ".csv";
            tasks.push_back(Task{std::move(c), v, seed});
        }
    }

    std::vector<SweepRow> rows(tasks.size());
    std::vector<std::string> errors(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                const RunTrace trace = run_experiment(tasks[i].config);
                SweepRow row;
                row.value = tasks[i].value;
                row.seed = tasks[i].seed;
                row.final_avg_grad_norm = std::numeric_limits<double>::quiet_NaN();
                row.best_grad_phi_norm = std::numeric_limits<double>::quiet_NaN();
                if (!trace.rows.empty() && trace.rows.back().avg_grad_norm.has_value())
                    row.final_avg_grad_norm = *trace.rows.back().avg_grad_norm;
                double best = std::numeric_limits<double>::infinity();
                for (const TraceRow& r : trace.rows)
                    if (r.grad_phi_norm.has_value() && *r.grad_phi_norm < best)
                        best = *r.grad_phi_norm;
                if (std::isfinite(best)) row.best_grad_phi_norm = best;
                rows[i] = std::move(row);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };

    const unsigned workers =
        std::min<std::size_t>(sweep_parallelism(), tasks.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const std::string& err : errors)
        if (!err.empty()) throw std::runtime_error("run_sweep: " + err);

    std::ofstream summary(out_dir + "/summary.csv", std::ios::binary);
    if (!summary) throw std::runtime_error("run_sweep: cannot write summary.csv");
    summary << kSummaryCsvHeader << "\n";
    for (const SweepRow& r : rows) {
        summary << r.value << "," << r.seed << ",";
        if (std::isfinite(r.final_avg_grad_norm)) summary << fmt(r.final_avg_grad_norm);
        summary << ",";
        if (std::isfinite(r.best_grad_phi_norm)) summary << fmt(r.best_grad_phi_norm);
        summary << "\n";
    }
    return rows;
}

}  // namespace hieropt
