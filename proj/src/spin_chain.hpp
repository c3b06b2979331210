#pragma once

#include "coupling.hpp"
#include "rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mlab {

// Single-spin state space E with its a-priori measure lambda.
struct SpinSpace {
    enum class Kind { PlusMinus, Interval, RealLaw };
    enum class Law { Gauss, Uniform, Exponential };

    Kind kind = Kind::PlusMinus;
    Law law = Law::Gauss; // RealLaw only
    double p1 = 0.0, p2 = 1.0;

    static SpinSpace plus_minus() { return {Kind::PlusMinus, Law::Gauss, 0, 1}; }
    static SpinSpace interval() { return {Kind::Interval, Law::Gauss, -1, 1}; }
    static SpinSpace real_gauss(double mean, double sd) {
        return {Kind::RealLaw, Law::Gauss, mean, sd};
    }
    static SpinSpace real_uniform(double a, double b) {
        return {Kind::RealLaw, Law::Uniform, a, b};
    }
    static SpinSpace real_exponential(double rate) {
        return {Kind::RealLaw, Law::Exponential, rate, 0};
    }

    bool known_symmetric_zero_mean() const;
    double lambda_mean() const;
    double lambda_sd() const;
    std::string describe() const;
};

enum class Boundary { Free, Periodic, FrozenPlus };

std::string boundary_name(Boundary b);

// Conditional law of one Interval spin given local field h: density on
// [-1,1] proportional to exp(h s) d(lambda).  Closed-form CDF inverse.
double interval_conditional_sample(double h, double u);
double interval_conditional_cdf(double h, double s);

// Finite-volume spin configuration with cached local fields
// h_i = 2 sum_{j != i} J(i,j) s_j  (+ frozen exterior term).
// The factor 2 comes from the ordered-pair Hamiltonian sum; heat-bath
// conditionals, the enumeration oracle and the transfer matrix all share it.
class SpinChain {
public:
    SpinChain(const CouplingFamily& coupling, SpinSpace space, int n, Boundary boundary,
              int interaction_radius);

    int size() const { return n_; }
    std::span<const double> spins() const { return spins_; }
    std::span<const double> local_fields() const { return fields_; }
    std::uint64_t sweeps_done() const { return sweeps_; }

    // initial configuration drawn from the a-priori measure lambda
    void randomize(CounterRng& rng);

    // one full left-to-right heat-bath sweep of exact single-site resampling
    void sweep(CounterRng& rng);

    // ordered-pair Hamiltonian of the current configuration (+frozen term)
    double hamiltonian() const;

    void recompute_fields();
    double max_field_cache_error() const;

private:
    double coupling_at(int i, int j) const;
    double lambda_draw(CounterRng& rng) const;

    const CouplingFamily* coupling_;
    SpinSpace space_;
    int n_;
    Boundary boundary_;
    int radius_;
    std::vector<double> spins_;
    std::vector<double> fields_;
    std::vector<double> frozen_offset_; // exterior contribution to h_i
    std::uint64_t sweeps_ = 0;
    std::uint64_t updates_since_refresh_ = 0;
};

// Integrated autocorrelation time of a scalar time series (Sokal windowing);
// used as the slow-mixing diagnostic for the power-law chains.
double integrated_autocorrelation_time(std::span<const double> series);

} // namespace mlab
