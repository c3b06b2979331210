#pragma once

#include "coupling.hpp"
#include "spin_chain.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlab {

// Model-guard violations (coupling tail mass, degenerate variance, ...)
// surface as this type so the front end can map them to a distinct exit code.
struct ModelGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SampleParams {
    CouplingFamily coupling = CouplingFamily::zero();
    SpinSpace space = SpinSpace::plus_minus();
    int window = 1;        // returned window length
    Boundary boundary = Boundary::Free;
    int burn_in = 1;
    int thin = 1;          // extra sweeps after burn-in before the window is taken
    int replicas = 1;
    std::uint64_t seed = 0;
    int r_cut = 64;        // power-law interaction truncation radius
    int edge_margin = -1;  // extra sites per side; -1 = auto
    int threads = 1;

    std::string cache_key_string() const; // canonical form, R excluded
};

struct SampleLayout {
    int volume = 0;       // simulated sites = margin + window + margin
    int offset = 0;       // window starts here
    int radius = 0;       // effective interaction radius
    double retained_mass = 0.0;
    double tail_mass = 0.0;
};

// Computes the simulation layout and enforces the truncation guard:
// discarded tail mass above 1e-3 of the retained mass rejects the model.
SampleLayout plan_layout(const SampleParams& p);

// R independent chains, one window per replica; replica r is deterministic
// given (seed, r) regardless of thread count.  The sink is invoked once per
// replica (ascending order within each worker's contiguous chunk) with the
// window spins and matching local fields.
using WindowSink =
    std::function<void(int replica, std::span<const double> spins, std::span<const double> fields)>;
void sample_windows(const SampleParams& p, const WindowSink& sink);

// R x N matrix of independent process realizations.
class ReplicaEnsemble {
public:
    ReplicaEnsemble(int replicas, int window);

    int replicas() const { return r_; }
    int window() const { return n_; }
    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    std::span<double> mutable_row(int i) {
        return {data_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
    }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

private:
    int r_, n_;
    std::vector<double> data_;
};

ReplicaEnsemble sample_ensemble(const SampleParams& p);

// --- sample cache -------------------------------------------------------
// Text format: one header line with the canonical parameter string, then R
// rows of N floats (17 significant digits, space separated).  Files are
// keyed by a content hash of the header; a cached file serves any run with
// the same parameters and fewer or equal replicas.

std::string ensemble_cache_filename(const SampleParams& p);
bool ensemble_cache_store(const std::string& dir, const SampleParams& p,
                          const ReplicaEnsemble& ens);
std::optional<ReplicaEnsemble> ensemble_cache_load(const std::string& dir,
                                                   const SampleParams& p);
int cache_clear(const std::string& dir); // returns number of files removed

// --- single-chain time averages ----------------------------------------
// Long-run pair-product averages from one chain with batch-means standard
// errors; used for the sampler-vs-oracle equivalence checks.
struct PairAverages {
    int n = 0;
    std::vector<double> mean, mean_se;
    std::vector<double> pair, pair_se; // row-major n x n
    double at(int i, int j) const { return pair[static_cast<std::size_t>(i) * n + j]; }
    double se(int i, int j) const { return pair_se[static_cast<std::size_t>(i) * n + j]; }
};

PairAverages chain_pair_averages(const SampleParams& p, int measure_sweeps, int batches = 64);

// Mixing diagnostic: integrated autocorrelation time of the volume
// magnetization measured over `probe_sweeps` after burn-in.
double chain_magnetization_iat(const SampleParams& p, int probe_sweeps);

} // namespace mlab
