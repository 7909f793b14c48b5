#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace hieropt {

/// Dense real-valued point/gradient in R^d. All public operations keep
/// entries finite; binary operations require matching dimensions.
class RealVector {
public:
    RealVector() = default;
    explicit RealVector(std::size_t dim, double fill = 0.0) : entries_(dim, fill) {}
    RealVector(std::initializer_list<double> values) : entries_(values) {}
    explicit RealVector(std::vector<double> values) : entries_(std::move(values)) {}

    std::size_t dim() const { return entries_.size(); }
    double& operator[](std::size_t i) { return entries_[i]; }
    double operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<double>& entries() const { return entries_; }
    std::vector<double>& entries() { return entries_; }

    bool finite() const {
        for (double v : entries_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    std::vector<double> entries_;
};

inline void require_same_dim(const RealVector& a, const RealVector& b, const char* op) {
    if (a.dim() != b.dim())
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
}

inline RealVector add(const RealVector& a, const RealVector& b) {
    require_same_dim(a, b, "add");
    RealVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline RealVector sub(const RealVector& a, const RealVector& b) {
    require_same_dim(a, b, "sub");
    RealVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] - b[i];
    return out;
}

inline RealVector scale(const RealVector& a, double s) {
    RealVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = s * a[i];
    return out;
}

/// a + s*b, without forming the intermediate.
inline RealVector axpy(const RealVector& a, double s, const RealVector& b) {
    require_same_dim(a, b, "axpy");
    RealVector out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a[i] + s * b[i];
    return out;
}

inline double dot(const RealVector& a, const RealVector& b) {
    require_same_dim(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm_sq(const RealVector& a) { return dot(a, a); }

inline double norm(const RealVector& a) { return std::sqrt(norm_sq(a)); }

}  // namespace hieropt
