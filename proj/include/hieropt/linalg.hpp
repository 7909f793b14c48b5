#pragma once

#include <Eigen/Dense>

#include "hieropt/rng.hpp"
#include "hieropt/vec.hpp"

namespace hieropt {

using Matrix = Eigen::MatrixXd;
using EVector = Eigen::VectorXd;

inline EVector to_eigen(const RealVector& v) {
    EVector out(static_cast<Eigen::Index>(v.dim()));
    for (std::size_t i = 0; i < v.dim(); ++i) out[static_cast<Eigen::Index>(i)] = v[i];
    return out;
}

inline RealVector from_eigen(const EVector& v) {
    RealVector out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = v[i];
    return out;
}

/// Gaussian-entry matrix, seeded through the stream.
Matrix random_matrix(int rows, int cols, RngStream& rng);

/// Orthogonal matrix from the QR factorization of a Gaussian draw.
Matrix random_orthogonal(int n, RngStream& rng);

/// Symmetric matrix with eigenvalues drawn uniformly in [lo, hi]; for n >= 2
/// the extreme eigenvalues are pinned to lo and hi so the moduli are exact.
Matrix spd_with_spectrum(int n, double lo, double hi, RngStream& rng);

/// Zero-mean symmetric perturbation with Frobenius norm equal to magnitude
/// (hence spectral norm <= magnitude). Returns zero when magnitude == 0.
Matrix symmetric_perturbation(int n, double magnitude, RngStream& rng);

/// Zero-mean perturbation with Frobenius norm equal to magnitude.
Matrix bounded_perturbation(int rows, int cols, double magnitude, RngStream& rng);

/// Operator 2-norm via a self-adjoint eigensolve (symmetric input).
double sym_operator_norm(const Matrix& a);

}  // namespace hieropt
