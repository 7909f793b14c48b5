#include "hieropt/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hieropt/hypergrad.hpp"

namespace hieropt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for " + key + ": '" + v + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + v + "'");
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad integer value for " + key + ": '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad boolean value for " + key + ": '" + v + "'");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void apply_set(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "problem") c.problem = value;
    else if (key == "dim_x") c.dim_x = parse_int(key, value);
    else if (key == "dim_y") c.dim_y = parse_int(key, value);
    else if (key == "mu") c.mu = parse_double(key, value);
    else if (key == "L") c.L = parse_double(key, value);
    else if (key == "mu_g") c.mu_g = parse_double(key, value);
    else if (key == "l_g1") c.l_g1 = parse_double(key, value);
    else if (key == "problem_seed") c.problem_seed = parse_uint(key, value);
    else if (key == "algorithm") c.algorithm = value;
    else if (key == "T") c.T = parse_int(key, value);
    else if (key == "seed") c.seed = parse_uint(key, value);
    else if (key == "alpha") c.alpha = parse_double(key, value);
    else if (key == "eta_x") c.eta_x = parse_double(key, value);
    else if (key == "eta_y") c.eta_y = parse_double(key, value);
    else if (key == "gamma") c.gamma = parse_double(key, value);
    else if (key == "noise_x") c.noise_x = NoiseModel::parse(value);
    else if (key == "noise_y") c.noise_y = NoiseModel::parse(value);
    else if (key == "noise_fy") c.noise_fy = NoiseModel::parse(value);
    else if (key == "sigma_hess") c.sigma_hess = parse_double(key, value);
    else if (key == "neumann_N") c.neumann_N = value;
    else if (key == "shared_xi") c.shared_xi = parse_bool(key, value);
    else if (key == "tiada_alpha") c.tiada_alpha = parse_double(key, value);
    else if (key == "tiada_beta") c.tiada_beta = parse_double(key, value);
    else if (key == "fixed_beta") c.fixed_beta = parse_double(key, value);
    else if (key == "x0") c.x0 = parse_double(key, value);
    else if (key == "y0") c.y0 = parse_double(key, value);
    else if (key == "output_path") c.output_path = value;
    else if (key == "sigma") {
        const double s = parse_double(key, value);
        if (!(s >= 0.0)) throw std::invalid_argument("config: sigma must be >= 0");
        c.noise_x = s == 0.0 ? NoiseModel::none() : NoiseModel::gaussian(s);
        c.noise_y = c.noise_x;
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                        " is not key=value: '" + line + "'");
        apply_set(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize(const RunConfig& c) {
    std::ostringstream out;
    out << "problem=" << c.problem << "\n";
    out << "dim_x=" << c.dim_x << "\n";
    out << "dim_y=" << c.dim_y << "\n";
    out << "mu=" << fmt(c.mu) << "\n";
    out << "L=" << fmt(c.L) << "\n";
    out << "mu_g=" << fmt(c.mu_g) << "\n";
    out << "l_g1=" << fmt(c.l_g1) << "\n";
    out << "problem_seed=" << c.problem_seed << "\n";
    out << "algorithm=" << c.algorithm << "\n";
    out << "T=" << c.T << "\n";
    out << "seed=" << c.seed << "\n";
    out << "alpha=" << fmt(c.alpha) << "\n";
    out << "eta_x=" << fmt(c.eta_x) << "\n";
    out << "eta_y=" << fmt(c.eta_y) << "\n";
    out << "gamma=" << fmt(c.gamma) << "\n";
    out << "noise_x=" << c.noise_x.to_string() << "\n";
    out << "noise_y=" << c.noise_y.to_string() << "\n";
    out << "noise_fy=" << c.noise_fy.to_string() << "\n";
    out << "sigma_hess=" << fmt(c.sigma_hess) << "\n";
    out << "neumann_N=" << c.neumann_N << "\n";
    out << "shared_xi=" << (c.shared_xi ? "true" : "false") << "\n";
    out << "tiada_alpha=" << fmt(c.tiada_alpha) << "\n";
    out << "tiada_beta=" << fmt(c.tiada_beta) << "\n";
    out << "fixed_beta=" << fmt(c.fixed_beta) << "\n";
    if (c.x0.has_value()) out << "x0=" << fmt(*c.x0) << "\n";
    if (c.y0.has_value()) out << "y0=" << fmt(*c.y0) << "\n";
    out << "output_path=" << c.output_path << "\n";
    return out.str();
}

namespace {

RealVector broadcast(double v, std::size_t dim) {
    RealVector out(dim);
    for (std::size_t i = 0; i < dim; ++i) out[i] = v;
    return out;
}

}  // namespace

BuiltRun build_run(const RunConfig& c) {
    if (c.T < 0) throw std::invalid_argument("config: T must be >= 0");
    const Algorithm algo = parse_algorithm(c.algorithm);

    RunSettings s;
    s.T = c.T;
    s.seed = c.seed;
    s.alpha = c.alpha;
    s.eta_x = c.eta_x;
    s.eta_y = c.eta_y;
    s.gamma = c.gamma;
    s.shared_xi = c.shared_xi;
    s.tiada_alpha = c.tiada_alpha;
    s.tiada_beta = c.tiada_beta;
    s.fixed_beta = c.fixed_beta;

    AnyProblem problem;
    double default_x0 = 1.0, default_y0 = 0.0;
    std::size_t dim_x = 0, dim_y = 0;

    if (c.problem == "onedim") {
        MinimaxProblem p = make_onedim_minimax(c.noise_x);
        p.noise_y = c.noise_y;
        dim_x = p.dim_x;
        dim_y = p.dim_y;
        default_x0 = 3.0;
        default_y0 = 1.0;
        problem = std::move(p);
    } else if (c.problem == "quad-minimax") {
        MinimaxProblem p = make_quadratic_minimax(static_cast<std::size_t>(c.dim_x),
                                                  static_cast<std::size_t>(c.dim_y), c.mu, c.L,
                                                  c.problem_seed);
        p.noise_x = c.noise_x;
        p.noise_y = c.noise_y;
        dim_x = p.dim_x;
        dim_y = p.dim_y;
        default_x0 = 0.3;
        problem = std::move(p);
    } else if (c.problem == "quad-bilevel") {
        BilevelProblem p = make_quadratic_bilevel(static_cast<std::size_t>(c.dim_x),
                                                  static_cast<std::size_t>(c.dim_y), c.mu_g,
                                                  c.l_g1, c.problem_seed, c.sigma_hess);
        p.noise_x_f = c.noise_x;
        p.noise_y_f = c.noise_fy;
        p.noise_y_g = c.noise_y;
        dim_x = p.dim_x;
        dim_y = p.dim_y;
        NeumannConfig ncfg;
        ncfg.l_g1 = p.l_g1;
        ncfg.mu_g = p.mu_g;
        if (c.neumann_N == "auto") {
            ncfg.N = recommended_N(std::max<std::int64_t>(2, c.T), ncfg);
        } else {
            ncfg.N = static_cast<int>(parse_int("neumann_N", c.neumann_N));
        }
        ncfg.validate();
        s.neumann = ncfg;
        problem = std::move(p);
    } else if (c.problem == "quad-single") {
        SingleLevelProblem p = make_quadratic_single(static_cast<std::size_t>(c.dim_x), c.mu,
                                                     c.L, c.problem_seed);
        p.noise = c.noise_x;
        dim_x = p.dim;
        dim_y = 0;
        default_x0 = 0.3;
        problem = std::move(p);
    } else if (c.problem == "auc") {
        MinimaxProblem p = make_auc_minimax(c.problem_seed);
        p.noise_x = c.noise_x;
        p.noise_y = c.noise_y;
        dim_x = p.dim_x;
        dim_y = p.dim_y;
        default_x0 = 0.1;
        problem = std::move(p);
    } else {
        throw std::invalid_argument("config: unknown problem '" + c.problem + "'");
    }

    s.x0 = broadcast(c.x0.value_or(default_x0), dim_x);
    if (dim_y > 0) s.y0 = broadcast(c.y0.value_or(default_y0), dim_y);
    return BuiltRun{std::move(problem), algo, std::move(s)};
}

}  // namespace hieropt
