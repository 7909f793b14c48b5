#include "hieropt/problems.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace hieropt {

RealVector SingleLevelProblem::sample_grad(const RealVector& x, RngStream& rng) const {
    return add(grad(x), sample_noise(noise, dim, rng));
}

RealVector MinimaxProblem::sample_grad_x(const RealVector& x, const RealVector& y,
                                         RngStream& rng) const {
    return add(grad_x(x, y), sample_noise(noise_x, dim_x, rng));
}

RealVector MinimaxProblem::sample_grad_y(const RealVector& x, const RealVector& y,
                                         RngStream& rng) const {
    return add(grad_y(x, y), sample_noise(noise_y, dim_y, rng));
}

double MinimaxProblem::phi(const RealVector& x) const {
    if (!has_value() || !has_y_star())
        throw std::logic_error("MinimaxProblem::phi: analytic y* or f value unavailable");
    return value(x, y_star(x));
}

RealVector BilevelProblem::sample_grad_x_f(const RealVector& x, const RealVector& y,
                                           RngStream& rng) const {
    return add(grad_x_f(x, y), sample_noise(noise_x_f, dim_x, rng));
}

RealVector BilevelProblem::sample_grad_y_f(const RealVector& x, const RealVector& y,
                                           RngStream& rng) const {
    return add(grad_y_f(x, y), sample_noise(noise_y_f, dim_y, rng));
}

RealVector BilevelProblem::sample_grad_y_g(const RealVector& x, const RealVector& y,
                                           RngStream& rng) const {
    return add(grad_y_g(x, y), sample_noise(noise_y_g, dim_y, rng));
}

RealVector BilevelProblem::hvp_yy_g(const RealVector& x, const RealVector& y,
                                    const RealVector& v, RngStream& rng) const {
    EVector ev = to_eigen(v);
    EVector out = hess_yy_g(x, y) * ev;
    if (sigma_hess > 0.0) {
        const Matrix e = symmetric_perturbation(static_cast<int>(dim_y), sigma_hess, rng);
        out += e * ev;
    }
    return from_eigen(out);
}

RealVector BilevelProblem::jvp_xy_g(const RealVector& x, const RealVector& y,
                                    const RealVector& v, RngStream& rng) const {
    EVector ev = to_eigen(v);
    EVector out = jac_xy_g(x, y) * ev;
    if (sigma_hess > 0.0) {
        const Matrix p = bounded_perturbation(static_cast<int>(dim_x),
                                              static_cast<int>(dim_y), sigma_hess, rng);
        out += p * ev;
    }
    return from_eigen(out);
}

double BilevelProblem::phi(const RealVector& x) const {
    if (!has_value() || !has_y_star())
        throw std::logic_error("BilevelProblem::phi: analytic y* or f value unavailable");
    return value_f(x, y_star(x));
}

MinimaxProblem make_onedim_minimax(NoiseModel noise) {
    MinimaxProblem p;
    p.dim_x = 1;
    p.dim_y = 1;
    p.grad_x = [](const RealVector& x, const RealVector& y) {
        return RealVector{y[0] - std::sin(x[0])};
    };
    p.grad_y = [](const RealVector& x, const RealVector& y) {
        return RealVector{x[0] - y[0]};
    };
    p.noise_x = noise;
    p.noise_y = noise;
    p.y_star = [](const RealVector& x) { return x; };
    p.grad_phi = [](const RealVector& x) { return RealVector{x[0] - std::sin(x[0])}; };
    p.value = [](const RealVector& x, const RealVector& y) {
        return std::cos(x[0]) + x[0] * y[0] - 0.5 * y[0] * y[0];
    };
    p.mu = 1.0;
    p.L = 2.0;  // valid joint smoothness constant; metadata only
    return p;
}

MinimaxProblem make_quadratic_minimax(std::size_t dim_x, std::size_t dim_y, double mu, double L,
                                      std::uint64_t seed) {
    if (!(mu > 0.0) || !(L >= mu))
        throw std::invalid_argument("make_quadratic_minimax: need 0 < mu <= L");
    const int dx = static_cast<int>(dim_x);
    const int dy = static_cast<int>(dim_y);
    RngStream rng(seed, "quad-minimax-instance");

    auto a = std::make_shared<Matrix>(spd_with_spectrum(dx, mu, L, rng));
    auto b = std::make_shared<Matrix>(bounded_perturbation(dx, dy, 1.0, rng));
    auto c = std::make_shared<Matrix>(spd_with_spectrum(dy, mu, L, rng));
    auto c_llt = std::make_shared<Eigen::LLT<Matrix>>(*c);
    // Phi(x) = x'(A + B C^{-1} B')x / 2
    auto phi_mat = std::make_shared<Matrix>(*a + *b * c_llt->solve(b->transpose()));

    MinimaxProblem p;
    p.dim_x = dim_x;
    p.dim_y = dim_y;
    p.grad_x = [a, b](const RealVector& x, const RealVector& y) {
        return from_eigen(*a * to_eigen(x) + *b * to_eigen(y));
    };
    p.grad_y = [b, c](const RealVector& x, const RealVector& y) {
        return from_eigen(b->transpose() * to_eigen(x) - *c * to_eigen(y));
    };
    p.y_star = [b, c_llt](const RealVector& x) {
        return from_eigen(c_llt->solve(b->transpose() * to_eigen(x)));
    };
    p.grad_phi = [phi_mat](const RealVector& x) { return from_eigen(*phi_mat * to_eigen(x)); };
    p.value = [a, b, c](const RealVector& xr, const RealVector& yr) {
        EVector x = to_eigen(xr), y = to_eigen(yr);
        return 0.5 * x.dot(*a * x) + x.dot(*b * y) - 0.5 * y.dot(*c * y);
    };
    p.mu = mu;
    p.L = sym_operator_norm(*a) + sym_operator_norm(*c) + b->norm();
    return p;
}

BilevelProblem make_onedim_bilevel() {
    BilevelProblem p;
    p.dim_x = 1;
    p.dim_y = 1;
    p.grad_x_f = [](const RealVector&, const RealVector&) { return RealVector{0.0}; };
    p.grad_y_f = [](const RealVector&, const RealVector& y) { return RealVector{y[0] - 1.0}; };
    p.grad_y_g = [](const RealVector& x, const RealVector& y) {
        return RealVector{y[0] - x[0]};
    };
    p.hess_yy_g = [](const RealVector&, const RealVector&) {
        return Matrix::Identity(1, 1);
    };
    p.jac_xy_g = [](const RealVector&, const RealVector&) {
        return Matrix::Constant(1, 1, -1.0);
    };
    p.mu_g = 1.0;
    p.l_g1 = 1.0;
    p.y_star = [](const RealVector& x) { return x; };
    p.grad_phi = [](const RealVector& x) { return RealVector{x[0] - 1.0}; };
    p.value_f = [](const RealVector&, const RealVector& y) {
        return 0.5 * (y[0] - 1.0) * (y[0] - 1.0);
    };
    return p;
}

BilevelProblem make_quadratic_bilevel(std::size_t dim_x, std::size_t dim_y, double mu_g,
                                      double l_g1, std::uint64_t seed, double sigma_hess) {
    if (!(mu_g > 0.0) || !(l_g1 >= mu_g))
        throw std::invalid_argument("make_quadratic_bilevel: need 0 < mu_g <= l_g1");
    if (sigma_hess < 0.0)
        throw std::invalid_argument("make_quadratic_bilevel: sigma_hess must be >= 0");
    if (sigma_hess > 0.0 && !(2.0 * sigma_hess < l_g1 - mu_g))
        throw std::invalid_argument(
            "make_quadratic_bilevel: sigma_hess too large for the spectral box");
    const int dx = static_cast<int>(dim_x);
    const int dy = static_cast<int>(dim_y);
    RngStream rng(seed, "quad-bilevel-instance");

    auto h = std::make_shared<Matrix>(
        spd_with_spectrum(dy, mu_g + sigma_hess, l_g1 - sigma_hess, rng));
    auto k = std::make_shared<Matrix>(bounded_perturbation(dy, dx, 1.0, rng));
    auto y_ref = std::make_shared<EVector>(dy);
    for (int i = 0; i < dy; ++i) (*y_ref)[i] = rng.gaussian();
    const double r = 0.1;
    Eigen::LLT<Matrix> h_llt(*h);
    auto w = std::make_shared<Matrix>(-h_llt.solve(*k));  // y*(x) = W x

    BilevelProblem p;
    p.dim_x = dim_x;
    p.dim_y = dim_y;
    p.grad_x_f = [r](const RealVector& x, const RealVector&) { return scale(x, r); };
    p.grad_y_f = [y_ref](const RealVector&, const RealVector& y) {
        return from_eigen(to_eigen(y) - *y_ref);
    };
    p.grad_y_g = [h, k](const RealVector& x, const RealVector& y) {
        return from_eigen(*h * to_eigen(y) + *k * to_eigen(x));
    };
    p.hess_yy_g = [h](const RealVector&, const RealVector&) { return *h; };
    p.jac_xy_g = [k](const RealVector&, const RealVector&) { return Matrix(k->transpose()); };
    p.sigma_hess = sigma_hess;
    p.mu_g = mu_g;
    p.l_g1 = l_g1;
    p.y_star = [w](const RealVector& x) { return from_eigen(*w * to_eigen(x)); };
    p.grad_phi = [w, y_ref, r](const RealVector& xr) {
        EVector x = to_eigen(xr);
        return from_eigen(r * x + w->transpose() * (*w * x - *y_ref));
    };
    p.value_f = [y_ref, r](const RealVector& xr, const RealVector& yr) {
        EVector x = to_eigen(xr), y = to_eigen(yr);
        return 0.5 * (y - *y_ref).squaredNorm() + 0.5 * r * x.squaredNorm();
    };
    return p;
}

SingleLevelProblem make_quadratic_single(std::size_t dim, double mu, double L,
                                         std::uint64_t seed) {
    if (!(mu > 0.0) || !(L >= mu))
        throw std::invalid_argument("make_quadratic_single: need 0 < mu <= L");
    RngStream rng(seed, "quad-single-instance");
    auto q = std::make_shared<Matrix>(spd_with_spectrum(static_cast<int>(dim), mu, L, rng));

    SingleLevelProblem p;
    p.dim = dim;
    p.grad = [q](const RealVector& x) { return from_eigen(*q * to_eigen(x)); };
    p.value = [q](const RealVector& xr) {
        EVector x = to_eigen(xr);
        return 0.5 * x.dot(*q * x);
    };
    return p;
}

MinimaxProblem make_auc_minimax(std::uint64_t seed, std::size_t n_samples,
                                double positive_fraction) {
    if (n_samples < 2 || !(positive_fraction > 0.0) || !(positive_fraction < 1.0))
        throw std::invalid_argument("make_auc_minimax: bad dataset parameters");
    RngStream rng(seed, "auc-instance");

    struct Data {
        std::vector<Eigen::Vector2d> x;
        std::vector<int> label;  // +1 / -1
        double p = 0.0;          // positive fraction
    };
    auto d = std::make_shared<Data>();
    std::size_t n_pos = static_cast<std::size_t>(std::lround(positive_fraction * n_samples));
    n_pos = std::max<std::size_t>(1, std::min(n_pos, n_samples - 1));
    for (std::size_t i = 0; i < n_samples; ++i) {
        const bool pos = i < n_pos;
        const double cx = pos ? 1.0 : -1.0;
        d->x.emplace_back(cx + rng.gaussian(), cx + rng.gaussian());
        d->label.push_back(pos ? 1 : -1);
    }
    d->p = static_cast<double>(n_pos) / static_cast<double>(n_samples);

    // Upper variable u = (w1, w2, a, b); lower variable the dual scalar.
    auto score = [](const Data& data, const RealVector& u, std::size_t i) {
        return u[0] * data.x[i][0] + u[1] * data.x[i][1];
    };
    auto grad_u = [d, score](const RealVector& u, const RealVector& al) {
        const Data& data = *d;
        const double p = data.p, q = 1.0 - data.p, alpha = al[0];
        const double inv_n = 1.0 / static_cast<double>(data.x.size());
        RealVector g(4);
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const double h = score(data, u, i);
            if (data.label[i] == 1) {
                const double coef = 2.0 * q * (h - u[2]) - 2.0 * (1.0 + alpha) * q;
                g[0] += inv_n * coef * data.x[i][0];
                g[1] += inv_n * coef * data.x[i][1];
                g[2] += inv_n * (-2.0 * q * (h - u[2]));
            } else {
                const double coef = 2.0 * p * (h - u[3]) + 2.0 * (1.0 + alpha) * p;
                g[0] += inv_n * coef * data.x[i][0];
                g[1] += inv_n * coef * data.x[i][1];
                g[3] += inv_n * (-2.0 * p * (h - u[3]));
            }
        }
        return g;
    };
    auto grad_alpha = [d, score](const RealVector& u, const RealVector& al) {
        const Data& data = *d;
        const double p = data.p, q = 1.0 - data.p;
        const double inv_n = 1.0 / static_cast<double>(data.x.size());
        double s = 0.0;
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const double h = score(data, u, i);
            s += inv_n * 2.0 * (data.label[i] == 1 ? -q * h : p * h);
        }
        return RealVector{s - 2.0 * p * q * al[0]};
    };
    auto alpha_star = [d, score](const RealVector& u) {
        const Data& data = *d;
        const double p = data.p, q = 1.0 - data.p;
        const double inv_n = 1.0 / static_cast<double>(data.x.size());
        double s = 0.0;
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const double h = score(data, u, i);
            s += inv_n * (data.label[i] == 1 ? -q * h : p * h);
        }
        return RealVector{s / (p * q)};
    };
    auto value = [d, score](const RealVector& u, const RealVector& al) {
        const Data& data = *d;
        const double p = data.p, q = 1.0 - data.p, alpha = al[0];
        const double inv_n = 1.0 / static_cast<double>(data.x.size());
        double v = 0.0;
        for (std::size_t i = 0; i < data.x.size(); ++i) {
            const double h = score(data, u, i);
            if (data.label[i] == 1)
                v += inv_n * (q * (h - u[2]) * (h - u[2]) - 2.0 * (1.0 + alpha) * q * h);
            else
                v += inv_n * (p * (h - u[3]) * (h - u[3]) + 2.0 * (1.0 + alpha) * p * h);
        }
        return v - p * q * alpha * alpha;
    };

    MinimaxProblem prob;
    prob.dim_x = 4;
    prob.dim_y = 1;
    prob.grad_x = grad_u;
    prob.grad_y = grad_alpha;
    prob.y_star = alpha_star;
    prob.grad_phi = [grad_u, alpha_star](const RealVector& u) {
        return grad_u(u, alpha_star(u));
    };
    prob.value = value;
    prob.mu = 2.0 * d->p * (1.0 - d->p);
    double max_sq = 0.0;
    for (const auto& xi : d->x) max_sq = std::max(max_sq, xi.squaredNorm());
    prob.L = 2.0 * (1.0 + max_sq);
    return prob;
}

namespace {

template <typename Problem>
RealVector central_diff(const Problem& problem, const RealVector& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_diff_grad_phi: h must be > 0");
    RealVector g(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        RealVector hi = x, lo = x;
        hi[i] += h;
        lo[i] -= h;
        g[i] = (problem.phi(hi) - problem.phi(lo)) / (2.0 * h);
    }
    return g;
}

}  // namespace

RealVector finite_diff_grad_phi(const MinimaxProblem& problem, const RealVector& x, double h) {
    return central_diff(problem, x, h);
}

RealVector finite_diff_grad_phi(const BilevelProblem& problem, const RealVector& x, double h) {
    return central_diff(problem, x, h);
}

}  // namespace hieropt
