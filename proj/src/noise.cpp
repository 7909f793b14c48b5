#include "hieropt/noise.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace hieropt {

NoiseModel NoiseModel::gaussian(double sigma) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian noise: sigma must be >= 0");
    NoiseModel m;
    m.kind_ = Kind::gaussian;
    m.a_ = sigma;
    return m;
}

NoiseModel NoiseModel::sphere(double radius) {
    if (!(radius >= 0.0)) throw std::invalid_argument("sphere noise: radius must be >= 0");
    NoiseModel m;
    m.kind_ = Kind::sphere;
    m.a_ = radius;
    return m;
}

NoiseModel NoiseModel::annulus(double lo, double hi) {
    if (!(lo >= 0.0)) throw std::invalid_argument("annulus noise: lower radius must be >= 0");
    if (!(hi >= lo)) throw std::invalid_argument("annulus noise: upper radius must be >= lower");
    NoiseModel m;
    m.kind_ = Kind::annulus;
    m.a_ = lo;
    m.b_ = hi;
    return m;
}

double NoiseModel::norm_lower_bound() const {
    switch (kind_) {
        case Kind::none: return 0.0;
        case Kind::gaussian: return 0.0;
        case Kind::sphere: return a_;
        case Kind::annulus: return a_;
    }
    return 0.0;
}

double NoiseModel::norm_upper_bound() const {
    switch (kind_) {
        case Kind::none: return 0.0;
        case Kind::gaussian:
            return a_ == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        case Kind::sphere: return a_;
        case Kind::annulus: return b_;
    }
    return 0.0;
}

bool NoiseModel::two_sided() const { return std::isfinite(norm_upper_bound()); }

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string NoiseModel::to_string() const {
    switch (kind_) {
        case Kind::none: return "none";
        case Kind::gaussian: return "gaussian:" + fmt(a_);
        case Kind::sphere: return "sphere:" + fmt(a_);
        case Kind::annulus: return "annulus:" + fmt(a_) + "," + fmt(b_);
    }
    return "none";
}

NoiseModel NoiseModel::parse(const std::string& text) {
    if (text == "none") return none();
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("noise model: expected kind[:params], got '" + text + "'");
    const std::string kind = text.substr(0, colon);
    const std::string args = text.substr(colon + 1);
    try {
        if (kind == "gaussian") return gaussian(std::stod(args));
        if (kind == "sphere") return sphere(std::stod(args));
        if (kind == "annulus") {
            auto comma = args.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("annulus noise: expected lo,hi");
            return annulus(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("noise model: bad parameters in '" + text + "'");
    }
    throw std::invalid_argument("noise model: unknown kind '" + kind + "'");
}

namespace {

RealVector unit_direction(std::size_t dim, RngStream& rng) {
    for (;;) {
        RealVector g(dim);
        for (std::size_t i = 0; i < dim; ++i) g[i] = rng.gaussian();
        const double n = norm(g);
        if (n > 0.0) return scale(g, 1.0 / n);
    }
}

}  // namespace

RealVector sample_noise(const NoiseModel& model, std::size_t dim, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("sample_noise: dim must be >= 1");
    switch (model.kind()) {
        case NoiseModel::Kind::none:
            return RealVector(dim);
        case NoiseModel::Kind::gaussian: {
            RealVector v(dim);
            for (std::size_t i = 0; i < dim; ++i) v[i] = model.param_a() * rng.gaussian();
            return v;
        }
        case NoiseModel::Kind::sphere:
            return scale(unit_direction(dim, rng), model.param_a());
        case NoiseModel::Kind::annulus: {
            const double r = rng.uniform(model.param_a(), model.param_b());
            return scale(unit_direction(dim, rng), r);
        }
    }
    return RealVector(dim);
}

}  // namespace hieropt
