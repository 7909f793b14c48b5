#include "hieropt/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace hieropt {

Matrix random_matrix(int rows, int cols, RngStream& rng) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
    return m;
}

Matrix random_orthogonal(int n, RngStream& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
    Matrix q = qr.householderQ();
    // Fix the sign convention so the factorization is unique.
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i)
        if (r(i, i) < 0) q.col(i) = -q.col(i);
    return q;
}

Matrix spd_with_spectrum(int n, double lo, double hi, RngStream& rng) {
    if (n < 1) throw std::invalid_argument("spd_with_spectrum: n must be >= 1");
    if (!(lo > 0.0) || !(hi >= lo))
        throw std::invalid_argument("spd_with_spectrum: need 0 < lo <= hi");
    EVector eigs(n);
    for (int i = 0; i < n; ++i) eigs[i] = rng.uniform(lo, hi);
    eigs[0] = lo;
    if (n >= 2) eigs[1] = hi;
    Matrix q = random_orthogonal(n, rng);
    return q * eigs.asDiagonal() * q.transpose();
}

Matrix symmetric_perturbation(int n, double magnitude, RngStream& rng) {
    if (magnitude == 0.0) return Matrix::Zero(n, n);
    Matrix s = random_matrix(n, n, rng);
    s = 0.5 * (s + s.transpose()).eval();
    const double f = s.norm();
    if (f == 0.0) return Matrix::Zero(n, n);
    return (magnitude / f) * s;
}

Matrix bounded_perturbation(int rows, int cols, double magnitude, RngStream& rng) {
    if (magnitude == 0.0) return Matrix::Zero(rows, cols);
    Matrix s = random_matrix(rows, cols, rng);
    const double f = s.norm();
    if (f == 0.0) return Matrix::Zero(rows, cols);
    return (magnitude / f) * s;
}

double sym_operator_norm(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

}  // namespace hieropt
