#include "config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mlab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long x = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected an unsigned integer, got '" + v + "'");
    }
}

template <class T, class F>
std::vector<T> parse_list(const std::string& v, int line, F one) {
    std::vector<T> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(line, "empty list element");
        out.push_back(one(item, line));
    }
    if (out.empty()) throw ConfigError(line, "empty list");
    return out;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(line, "expected true/false, got '" + v + "'");
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "analysis" && section != "output")
                throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) throw ConfigError(line, "empty key or value");
        if (section.empty()) throw ConfigError(line, "key outside any [section]");

        if (section == "model") {
            if (key == "label") cfg.label = val;
            else if (key == "coupling") cfg.coupling_kind = val;
            else if (key == "J") cfg.J = parse_double(val, line);
            else if (key == "L") cfg.L = static_cast<int>(parse_int(val, line));
            else if (key == "beta") cfg.beta = parse_double(val, line);
            else if (key == "alpha") cfg.alpha = parse_double(val, line);
            else if (key == "c1") cfg.c1 = parse_double(val, line);
            else if (key == "c2") cfg.c2 = parse_double(val, line);
            else if (key == "strength") cfg.strength = parse_double(val, line);
            else if (key == "perturbation_seed") cfg.perturbation_seed = parse_u64(val, line);
            else if (key == "spin_space") cfg.spin_space = val;
            else if (key == "lambda") cfg.lambda = val;
            else if (key == "N") cfg.N = static_cast<int>(parse_int(val, line));
            else if (key == "boundary") cfg.boundary = val;
            else if (key == "burn_in") cfg.burn_in = static_cast<int>(parse_int(val, line));
            else if (key == "thin") cfg.thin = static_cast<int>(parse_int(val, line));
            else if (key == "R") cfg.R = static_cast<int>(parse_int(val, line));
            else if (key == "seed") cfg.seed = parse_u64(val, line);
            else if (key == "r_cut") cfg.r_cut = static_cast<int>(parse_int(val, line));
            else if (key == "edge_margin") cfg.edge_margin = static_cast<int>(parse_int(val, line));
            else throw ConfigError(line, "unknown [model] key '" + key + "'");
        } else if (section == "analysis") {
            if (key == "mode") cfg.mode = val;
            else if (key == "k_offsets")
                cfg.k_offsets = parse_list<int>(val, line, [](const std::string& v2, int l2) {
                    return static_cast<int>(parse_int(v2, l2));
                });
            else if (key == "n_schedule")
                cfg.n_schedule = parse_list<int>(val, line, [](const std::string& v2, int l2) {
                    return static_cast<int>(parse_int(v2, l2));
                });
            else if (key == "r_values")
                cfg.r_values = parse_list<double>(val, line, [](const std::string& v2, int l2) {
                    return parse_double(v2, l2);
                });
            else if (key == "delta") cfg.delta = parse_double(val, line);
            else if (key == "centering") cfg.centering = val;
            else if (key == "scaling") cfg.scaling = val;
            else if (key == "sigma") cfg.sigma = parse_double(val, line);
            else if (key == "lag_max") cfg.lag_max = static_cast<int>(parse_int(val, line));
            else if (key == "cg_n_max") cfg.cg_n_max = static_cast<int>(parse_int(val, line));
            else throw ConfigError(line, "unknown [analysis] key '" + key + "'");
        } else {
            if (key == "directory") cfg.out_dir = val;
            else if (key == "use_cache") cfg.use_cache = parse_bool(val, line);
            else throw ConfigError(line, "unknown [output] key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream o;
    o << "[model]\n";
    if (!cfg.label.empty()) o << "label = " << cfg.label << "\n";
    o << "coupling = " << cfg.coupling_kind << "\n";
    if (cfg.coupling_kind == "finite_range")
        o << "J = " << fmt(cfg.J) << "\nL = " << cfg.L << "\n";
    if (cfg.coupling_kind == "long_range")
        o << "beta = " << fmt(cfg.beta) << "\nalpha = " << fmt(cfg.alpha) << "\n";
    if (cfg.coupling_kind == "perturbed")
        o << "alpha = " << fmt(cfg.alpha) << "\nc1 = " << fmt(cfg.c1) << "\nc2 = "
          << fmt(cfg.c2) << "\nstrength = " << fmt(cfg.strength)
          << "\nperturbation_seed = " << cfg.perturbation_seed << "\n";
    o << "spin_space = " << cfg.spin_space << "\n";
    if (cfg.spin_space == "real_law") o << "lambda = " << cfg.lambda << "\n";
    o << "N = " << cfg.N << "\n";
    o << "boundary = " << cfg.boundary << "\n";
    o << "burn_in = " << cfg.burn_in << "\n";
    o << "thin = " << cfg.thin << "\n";
    o << "R = " << cfg.R << "\n";
    o << "seed = " << cfg.seed << "\n";
    o << "r_cut = " << cfg.r_cut << "\n";
    o << "edge_margin = " << cfg.edge_margin << "\n";
    o << "\n[analysis]\n";
    o << "mode = " << cfg.mode << "\n";
    o << "k_offsets = ";
    for (std::size_t i = 0; i < cfg.k_offsets.size(); ++i)
        o << (i ? "," : "") << cfg.k_offsets[i];
    o << "\nn_schedule = ";
    for (std::size_t i = 0; i < cfg.n_schedule.size(); ++i)
        o << (i ? "," : "") << cfg.n_schedule[i];
    o << "\nr_values = ";
    for (std::size_t i = 0; i < cfg.r_values.size(); ++i)
        o << (i ? "," : "") << fmt(cfg.r_values[i]);
    o << "\ndelta = " << fmt(cfg.delta) << "\n";
    o << "centering = " << cfg.centering << "\n";
    o << "scaling = " << cfg.scaling << "\n";
    o << "sigma = " << fmt(cfg.sigma) << "\n";
    o << "lag_max = " << cfg.lag_max << "\n";
    o << "cg_n_max = " << cfg.cg_n_max << "\n";
    o << "\n[output]\n";
    o << "directory = " << cfg.out_dir << "\n";
    o << "use_cache = " << (cfg.use_cache ? "true" : "false") << "\n";
    return o.str();
}

CouplingFamily ExperimentConfig::make_coupling() const {
    if (coupling_kind == "zero") return CouplingFamily::zero();
    if (coupling_kind == "finite_range") return CouplingFamily::finite_range(J, L);
    if (coupling_kind == "long_range") return CouplingFamily::long_range(beta, alpha);
    if (coupling_kind == "perturbed")
        return CouplingFamily::perturbed(alpha, c1, c2, perturbation_seed, strength);
    throw ConfigError(0, "unknown coupling '" + coupling_kind + "'");
}

SpinSpace ExperimentConfig::make_spin_space() const {
    if (spin_space == "plus_minus") return SpinSpace::plus_minus();
    if (spin_space == "interval") return SpinSpace::interval();
    if (spin_space == "real_law") {
        double a = 0.0, b = 0.0;
        if (std::sscanf(lambda.c_str(), "gauss(%lf,%lf)", &a, &b) == 2)
            return SpinSpace::real_gauss(a, b);
        if (std::sscanf(lambda.c_str(), "uniform(%lf,%lf)", &a, &b) == 2)
            return SpinSpace::real_uniform(a, b);
        if (std::sscanf(lambda.c_str(), "exponential(%lf)", &a) == 1)
            return SpinSpace::real_exponential(a);
        throw ConfigError(0, "unknown lambda '" + lambda + "'");
    }
    throw ConfigError(0, "unknown spin_space '" + spin_space + "'");
}

Boundary ExperimentConfig::make_boundary() const {
    if (boundary == "free") return Boundary::Free;
    if (boundary == "periodic") return Boundary::Periodic;
    if (boundary == "frozen_plus") return Boundary::FrozenPlus;
    throw ConfigError(0, "unknown boundary '" + boundary + "'");
}

SampleParams ExperimentConfig::make_sample_params(int threads) const {
    SampleParams p;
    p.coupling = make_coupling();
    p.space = make_spin_space();
    p.window = N;
    p.boundary = make_boundary();
    p.burn_in = burn_in;
    p.thin = thin;
    p.replicas = R;
    p.seed = seed;
    p.r_cut = r_cut;
    p.edge_margin = edge_margin;
    p.threads = threads;
    return p;
}

PartialSumSpec ExperimentConfig::make_partial_sum_spec(int k) const {
    PartialSumSpec spec;
    spec.offset = k;
    spec.lengths = n_schedule;
    spec.r_values = r_values;
    spec.mode = mode == "stationary" ? AnalysisMode::Stationary : AnalysisMode::NonStationary;
    spec.centering = centering == "known_mean" ? Centering::KnownMean : Centering::EmpiricalMean;
    spec.scaling =
        scaling == "theoretical_sigma" ? Scaling::TheoreticalSigma : Scaling::EmpiricalSigma;
    spec.known_mean = make_spin_space().lambda_mean();
    spec.theoretical_sigma = sigma;
    spec.cov_lag_max = lag_max;
    return spec;
}

std::string ExperimentConfig::effective_label() const {
    if (!label.empty()) return label;
    return coupling_kind;
}

void ExperimentConfig::validate() const {
    if (N < 1) throw ConfigError(0, "[model] N must be >= 1");
    if (R < 4) throw ConfigError(0, "[model] R must be >= 4");
    if (burn_in < 1 || thin < 1) throw ConfigError(0, "[model] burn_in and thin must be >= 1");
    if (n_schedule.empty()) throw ConfigError(0, "[analysis] n_schedule is required");
    if (r_values.empty()) throw ConfigError(0, "[analysis] r_values is required");
    if (!(delta > 0.0 && delta < 0.25)) throw ConfigError(0, "[analysis] delta must be in (0, 1/4)");
    if (mode != "stationary" && mode != "nonstationary")
        throw ConfigError(0, "[analysis] mode must be stationary|nonstationary");
    if (centering != "known_mean" && centering != "empirical_mean")
        throw ConfigError(0, "[analysis] centering must be known_mean|empirical_mean");
    if (scaling != "theoretical_sigma" && scaling != "empirical_sigma")
        throw ConfigError(0, "[analysis] scaling must be theoretical_sigma|empirical_sigma");
    make_coupling();
    make_spin_space();
    make_boundary();
    for (int k : k_offsets) {
        if (k < 0 || k + n_schedule.back() > N)
            throw ConfigError(0, "[analysis] k + max(n_schedule) must fit inside N");
    }
    int prev = 0;
    for (int n : n_schedule) {
        if (n <= prev) throw ConfigError(0, "[analysis] n_schedule must be strictly ascending");
        prev = n;
    }
}

} // namespace mlab
