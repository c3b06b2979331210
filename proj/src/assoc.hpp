#pragma once

#include "ensemble.hpp"
#include "stats.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace mlab {

// Lag-covariance summary of a replica ensemble.  Stationary mode averages
// the estimator over all window positions at each lag and is symmetric in
// the lag by construction; non-stationary mode keeps a per-site matrix
// c(k, j) = cov(X_k, X_{k+j}) estimated across replicas only.
struct CovarianceSummary {
    bool stationary = true;
    int window = 0;
    int lag_max = 0;
    std::vector<double> lag_cov;      // stationary: c(j), j = 0..lag_max
    std::vector<double> lag_cov_se;
    std::vector<double> site_cov;     // non-stationary: row k, col j (lag), k+j < window
    std::vector<double> site_cov_se;
    std::vector<double> site_var;     // per-site variances (both modes)
    std::vector<double> site_var_se;
    double chi_hat = 0.0;             // c(0) + 2 sum_{j>=1} c(j), truncated
    double chi_se = 0.0;
    int chi_truncation_lag = 0;       // J_max picked by the SE stopping rule
    double chi_truncation_bias = 0.0; // sum |c(j)| beyond J_max, up to lag_max
    bool zero_variance_flag = false;  // some column was (near) constant
    bool negative_cov_flag = false;   // some estimate below -3 SE

    // stationary mode keeps the per-replica lag means so that derived tail
    // sums (susceptibility, Cox-Grimmett profiles) can be jackknifed
    int replica_count = 0;
    std::vector<double> replica_lag;  // row-major R x (lag_max+1)

    double site_at(int k, int j) const {
        return site_cov[static_cast<std::size_t>(k) * (lag_max + 1) + j];
    }
    double site_se_at(int k, int j) const {
        return site_cov_se[static_cast<std::size_t>(k) * (lag_max + 1) + j];
    }
};

// Unbiased replica-based covariances with jackknife-over-replicas errors.
// Needs at least two replicas; meaningful SEs from ~100 up.
CovarianceSummary estimate_covariances(const ReplicaEnsemble& ens, bool stationary,
                                       int lag_max);

// Tail sums u(n) = sum_{|j| >= n} c(j) (stationary) or per-site tail sums
// with the empirical envelope v(n) = max_k u_k(n) + 3 SE.
struct CoxGrimmettProfile {
    std::vector<double> u_hat;      // n = 0..n_max
    std::vector<double> u_se;
    std::vector<double> envelope;   // non-stationary: v(n); stationary: u + 3 SE
    int n_max = 0;
    int truncation_lag = 0;         // covariances available up to here
    bool truncation_bias_flag = false; // lag depth < n_max + decade headroom
    double fitted_slope = 0.0;      // log-log decay slope over the fit grid
    double fitted_slope_se = 0.0;
    std::vector<double> fit_ns;     // geometric grid actually used
};

// Slope fit: ordinary least squares of log u(n) on log n over the geometric
// grid {n_lo, 2 n_lo, 4 n_lo, ...} capped at n_max, using points with
// positive estimates; equal weights (each octave counts once, which keeps
// the estimate pinned to the decay exponent rather than the best-measured
// small-n transient).
CoxGrimmettProfile cox_grimmett_profile(const CovarianceSummary& cov, int n_max,
                                        int fit_n_lo = 2);

// Randomized check of positive association: covariances of random
// coordinatewise nondecreasing staircases/clipped-linear maps, plus the
// deterministic adjacent coordinate pairs, studentized by jackknife SE.
struct AssociationTrial {
    double cov = 0.0;
    double se = 0.0;
    double studentized = 0.0;
    bool deterministic_pair = false;
};

struct AssociationReport {
    std::vector<AssociationTrial> trials;
    double min_studentized = 0.0;
    bool pass = false; // min studentized >= -3
};

AssociationReport association_test(const ReplicaEnsemble& ens, int trials,
                                   std::uint64_t seed);

// Empirical check of the characteristic-function factorization gap
//   |phi(r_1..r_n) - prod phi_j(r_j)| <= (1/2) sum_{j!=k} |r_j r_k| cov(X_j, X_k)
// on the first freqs.size() coordinates of the window.
struct CfGapResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin_se = 0.0; // jackknife SE of rhs - lhs
    bool pass = false;      // lhs <= rhs + 3 SE
};

CfGapResult cf_gap_check(const ReplicaEnsemble& ens, std::span<const double> freqs);

// --- conditional-mean (Rao-Blackwell) covariance runs -----------------------
// For +-1 chains, cov(X_i, X_j) = E[X_i tanh(h_j)], which the sampler's
// cached local fields give for free; the products have variance ~E[tanh^2 h]
// instead of 1, so weak-coupling tails resolve at desk scale.  Several
// spaced windows per chain are averaged; replicas stay independent and
// errors are jackknifed at replica level.
struct RbRunParams {
    SampleParams sample;     // space must be PlusMinus
    int windows = 1;         // measured windows per replica
    int spacing = 1;         // sweeps between measured windows
    int lag_max = 64;
};

CovarianceSummary rb_lag_covariances(const RbRunParams& p);

} // namespace mlab
