#pragma once

#include <cstdint>
#include <functional>

#include "hieropt/linalg.hpp"
#include "hieropt/noise.hpp"
#include "hieropt/rng.hpp"
#include "hieropt/vec.hpp"

namespace hieropt {

using GradFn = std::function<RealVector(const RealVector&)>;
using ValueFn = std::function<double(const RealVector&)>;
using GradXYFn = std::function<RealVector(const RealVector&, const RealVector&)>;
using ValueXYFn = std::function<double(const RealVector&, const RealVector&)>;
using MatrixXYFn = std::function<Matrix(const RealVector&, const RealVector&)>;

/// min_x f(x) with a stochastic first-order oracle.
struct SingleLevelProblem {
    std::size_t dim = 0;
    GradFn grad;       // deterministic gradient
    ValueFn value;     // optional
    NoiseModel noise;

    RealVector sample_grad(const RealVector& x, RngStream& rng) const;
};

/// min_x max_y f(x,y), f strongly concave in y. Oracles are the
/// deterministic gradients plus NoiseModel perturbations; y_star/grad_phi
/// carry the analytic truth when the instance has one.
struct MinimaxProblem {
    std::size_t dim_x = 0, dim_y = 0;
    GradXYFn grad_x, grad_y;
    NoiseModel noise_x, noise_y;
    GradFn y_star;     // optional
    GradFn grad_phi;   // optional
    ValueXYFn value;   // f(x,y), optional
    double mu = 0.0;   // strong-concavity modulus
    double L = 0.0;    // smoothness (metadata)

    bool has_y_star() const { return static_cast<bool>(y_star); }
    bool has_grad_phi() const { return static_cast<bool>(grad_phi); }
    bool has_value() const { return static_cast<bool>(value); }

    RealVector sample_grad_x(const RealVector& x, const RealVector& y, RngStream& rng) const;
    RealVector sample_grad_y(const RealVector& x, const RealVector& y, RngStream& rng) const;

    /// Phi(x) = f(x, y*(x)); requires value and y_star.
    double phi(const RealVector& x) const;
};

/// min_x f(x, y*(x)) s.t. y*(x) = argmin_y g(x,y), g strongly convex in y.
/// Second-order oracles are matrix-free; the deterministic Hessian/Jacobian
/// are also exposed for the exact-solve verification path.
struct BilevelProblem {
    std::size_t dim_x = 0, dim_y = 0;
    GradXYFn grad_x_f, grad_y_f, grad_y_g;
    MatrixXYFn hess_yy_g;  // d_y x d_y, deterministic
    MatrixXYFn jac_xy_g;   // d_x x d_y, deterministic (mixed partial of g)
    NoiseModel noise_x_f, noise_y_f, noise_y_g;
    /// Spectral-norm bound on the Hessian/Jacobian sample perturbations.
    /// The built-in instances shrink the deterministic spectrum so samples
    /// stay inside [mu_g, l_g1].
    double sigma_hess = 0.0;
    double mu_g = 0.0;
    double l_g1 = 0.0;
    GradFn y_star;    // optional
    GradFn grad_phi;  // optional
    ValueXYFn value_f;

    bool has_y_star() const { return static_cast<bool>(y_star); }
    bool has_grad_phi() const { return static_cast<bool>(grad_phi); }
    bool has_value() const { return static_cast<bool>(value_f); }

    RealVector sample_grad_x_f(const RealVector& x, const RealVector& y, RngStream& rng) const;
    RealVector sample_grad_y_f(const RealVector& x, const RealVector& y, RngStream& rng) const;
    RealVector sample_grad_y_g(const RealVector& x, const RealVector& y, RngStream& rng) const;

    /// (Hessian sample) * v with a fresh symmetric bounded perturbation.
    RealVector hvp_yy_g(const RealVector& x, const RealVector& y, const RealVector& v,
                        RngStream& rng) const;
    /// (Jacobian sample) * v, v in R^{d_y} -> R^{d_x}.
    RealVector jvp_xy_g(const RealVector& x, const RealVector& y, const RealVector& v,
                        RngStream& rng) const;

    double phi(const RealVector& x) const;
};

/// f(x,y) = cos x + x*y - y^2/2, so y*(x) = x and grad Phi(x) = x - sin x.
MinimaxProblem make_onedim_minimax(NoiseModel noise = NoiseModel::none());

/// f(x,y) = x'Ax/2 + x'By - y'Cy/2 with spectrum(C) in [mu, L] (extremes
/// pinned); y*(x) = C^{-1}B'x and grad Phi(x) = (A + B C^{-1} B')x.
MinimaxProblem make_quadratic_minimax(std::size_t dim_x, std::size_t dim_y, double mu, double L,
                                      std::uint64_t seed);

/// g = y^2/2 - x*y, f = (y-1)^2/2: y* = x, Phi = (x-1)^2/2. Deterministic.
BilevelProblem make_onedim_bilevel();

/// g(x,y) = y'Hy/2 + y'Kx with spectrum(H) in [mu_g, l_g1];
/// f(x,y) = ||y - y_ref||^2/2 + 0.05||x||^2. When sigma_hess > 0 the
/// deterministic spectrum is shrunk by sigma_hess on both ends so perturbed
/// samples stay inside [mu_g, l_g1].
BilevelProblem make_quadratic_bilevel(std::size_t dim_x, std::size_t dim_y, double mu_g,
                                      double l_g1, std::uint64_t seed, double sigma_hess = 0.0);

/// f(x) = x'Qx/2 with spectrum(Q) in [mu, L] (extremes pinned).
SingleLevelProblem make_quadratic_single(std::size_t dim, double mu, double L,
                                         std::uint64_t seed);

/// AUC surrogate on synthetic imbalanced 2-D Gaussian blobs: upper variable
/// (w, a, b) in R^4, lower variable the dual scalar. Stress problem only.
MinimaxProblem make_auc_minimax(std::uint64_t seed, std::size_t n_samples = 200,
                                double positive_fraction = 0.1);

/// Componentwise central difference of Phi. Requires analytic y* and an f
/// evaluator (deterministic mode); otherwise a hard error.
RealVector finite_diff_grad_phi(const MinimaxProblem& problem, const RealVector& x, double h);
RealVector finite_diff_grad_phi(const BilevelProblem& problem, const RealVector& x, double h);

}  // namespace hieropt
