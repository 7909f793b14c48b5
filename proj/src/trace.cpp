#include "hieropt/trace.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hieropt {

namespace {

void append_field(std::string& out, const std::optional<double>& v) {
    out.push_back(',');
    if (v.has_value()) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", *v);
        out += buf;
    }
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
    std::string out = kTraceCsvHeader;
    out.push_back('\n');
    for (const TraceRow& r : trace.rows) {
        out += std::to_string(r.t);
        append_field(out, r.grad_phi_norm);
        append_field(out, r.avg_grad_norm);
        append_field(out, r.alpha_t);
        append_field(out, r.alpha_prime_t);
        append_field(out, r.eta_x_t);
        append_field(out, r.eta_y_t);
        append_field(out, r.dist_y);
        append_field(out, r.sum_diff_sq);
        append_field(out, r.sum_lower_sq);
        out.push_back('\n');
    }
    return out;
}

void write_trace_csv(const RunTrace& trace, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_trace_csv: cannot open '" + path + "'");
    const std::string body = trace_to_csv(trace);
    f.write(body.data(), static_cast<std::streamsize>(body.size()));
    if (!f) throw std::runtime_error("write_trace_csv: write failed for '" + path + "'");
}

}  // namespace hieropt
