#pragma once

#include "ensemble.hpp"
#include "limit_lab.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlab {

struct ConfigError : std::runtime_error {
    int line;
    ConfigError(int line_, const std::string& what_)
        : std::runtime_error(line_ > 0 ? "line " + std::to_string(line_) + ": " + what_ : what_),
          line(line_) {}
};

// Declarative experiment description; flat `key = value` lines under
// [model] / [analysis] / [output] sections.  Floats are serialized with 17
// significant digits so parse -> serialize -> parse is the identity.
struct ExperimentConfig {
    // model
    std::string label;
    std::string coupling_kind = "zero"; // zero|finite_range|long_range|perturbed
    double J = 0.0;
    int L = 1;
    double beta = 0.0;
    double alpha = 0.0;
    double c1 = 0.0, c2 = 0.0;
    double strength = 1.0;
    std::uint64_t perturbation_seed = 0;
    std::string spin_space = "plus_minus"; // plus_minus|interval|real_law
    std::string lambda = "gauss(0,1)";
    int N = 0;
    std::string boundary = "free"; // free|periodic|frozen_plus
    int burn_in = 1;
    int thin = 1;
    int R = 0;
    std::uint64_t seed = 0;
    int r_cut = 64;
    int edge_margin = -1;

    // analysis
    std::string mode = "stationary"; // stationary|nonstationary
    std::vector<int> k_offsets{0};
    std::vector<int> n_schedule;
    std::vector<double> r_values;
    double delta = 0.2;
    std::string centering = "known_mean";  // known_mean|empirical_mean
    std::string scaling = "empirical_sigma"; // theoretical_sigma|empirical_sigma
    double sigma = 1.0; // used by theoretical_sigma
    int lag_max = 64;
    int cg_n_max = 0; // Cox-Grimmett profile depth; 0 = skip

    // output
    std::string out_dir = "out";
    bool use_cache = true;

    CouplingFamily make_coupling() const;
    SpinSpace make_spin_space() const;
    Boundary make_boundary() const;
    SampleParams make_sample_params(int threads) const;
    PartialSumSpec make_partial_sum_spec(int k) const;
    std::string effective_label() const;
    void validate() const; // throws ConfigError(0, ...) on bad domains
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

} // namespace mlab
