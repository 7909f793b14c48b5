#pragma once

#include <string>

#include "hieropt/rng.hpp"
#include "hieropt/vec.hpp"

namespace hieropt {

/// Zero-mean perturbation generator used by all stochastic oracles.
///
/// Kinds:
///   none          -- zero vector
///   gaussian(s)   -- i.i.d. N(0, s^2) per coordinate
///   sphere(r)     -- uniform on the sphere of radius r (norm exactly r)
///   annulus(a, b) -- uniform direction, radius uniform in [a, b]
///
/// sphere and annulus realize the two-sided noise-norm bound; gaussian is
/// the synthetic-experiment model. Parameters are validated at construction.
class NoiseModel {
public:
    enum class Kind { none, gaussian, sphere, annulus };

    NoiseModel() : kind_(Kind::none), a_(0.0), b_(0.0) {}

    static NoiseModel none() { return NoiseModel(); }
    static NoiseModel gaussian(double sigma);
    static NoiseModel sphere(double radius);
    static NoiseModel annulus(double lo, double hi);

    Kind kind() const { return kind_; }
    /// sigma for gaussian, radius for sphere, lower radius for annulus.
    double param_a() const { return a_; }
    /// upper radius for annulus, unused otherwise.
    double param_b() const { return b_; }

    /// Almost-sure lower bound on the sample norm (0 for none/gaussian).
    double norm_lower_bound() const;
    /// Almost-sure upper bound on the sample norm; +inf for gaussian.
    double norm_upper_bound() const;
    /// True when the sample norm is a.s. bounded away from infinity.
    bool two_sided() const;

    bool is_zero() const { return kind_ == Kind::none; }

    /// "none", "gaussian:2", "annulus:1,3", ...
    std::string to_string() const;
    static NoiseModel parse(const std::string& text);

    bool operator==(const NoiseModel& o) const {
        return kind_ == o.kind_ && a_ == o.a_ && b_ == o.b_;
    }

private:
    Kind kind_;
    double a_;
    double b_;
};

/// Draws one zero-mean perturbation of the given dimension.
RealVector sample_noise(const NoiseModel& model, std::size_t dim, RngStream& rng);

}  // namespace hieropt
