#pragma once

#include "config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlab {

struct RunOverrides {
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

struct RunResult {
    std::string out_dir;
    int report_rows = 0;
    bool cache_hit = false;
    bool all_kolmogorov_bounds_ok = true;
    double chi_hat = 0.0;
    double mixing_iat = 0.0;
};

// Produces report.csv, covariance.csv, blocks.csv, plotdata_*.tsv and
// manifest.txt under the output directory.  Reruns with the same config and
// seed yield byte-identical CSV/TSV bodies.
RunResult run_experiment(const ExperimentConfig& cfg, const RunOverrides& ov = {});

std::string version_string();
std::string build_id();

struct VerifyOptions {
    bool flip_hamiltonian_sign = false; // test fixture: breaks ferromagnetic order
    bool skip_dk_bound = false;         // test fixture: drops one invariant check
    bool quiet = false;
    int threads = 1;
};

struct VerifyCheck {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    int failures = 0;
};

// Oracle-equivalence and invariant suite behind `mlab verify`.
VerifyReport verify_suite(const VerifyOptions& opts = {});

} // namespace mlab
