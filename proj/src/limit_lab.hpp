#pragma once

#include "assoc.hpp"
#include "ensemble.hpp"
#include "normal.hpp"
#include "sorted_sample.hpp"
#include "stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlab {

enum class Centering { KnownMean, EmpiricalMean };
enum class Scaling { TheoreticalSigma, EmpiricalSigma };
enum class AnalysisMode { Stationary, NonStationary };

struct PartialSumSpec {
    int offset = 0;                      // window offset k
    std::vector<int> lengths;            // ascending n schedule, each >= 2
    std::vector<double> r_values;        // orders, each > 0
    Centering centering = Centering::KnownMean;
    Scaling scaling = Scaling::EmpiricalSigma;
    AnalysisMode mode = AnalysisMode::Stationary;
    double known_mean = 0.0;             // used by KnownMean
    double theoretical_sigma = 1.0;      // used by TheoreticalSigma (per-site sd)
    int cov_lag_max = 64;                // for the stationary chi plug-in

    void validate(int window) const;
};

// Stabilized partial sums V = (S_{[k,k+n)} - center) / scale, one value per
// evaluation replica per n.  When any scale or mean is estimated, the first
// half of the replicas estimates and the second half is evaluated (no reuse
// bias); otherwise all replicas are evaluated.
struct StabilizedSums {
    std::vector<int> lengths;
    std::vector<double> r_grid;           // copied from the spec for reporting
    int offset = 0;
    std::vector<SortedSample> samples;    // one per n, evaluation half only
    std::vector<std::vector<double>> raw; // same values in replica order (for jackknife)
    std::vector<double> sigma_used;       // the per-n scale actually applied (total sd)
    std::vector<double> center_used;      // the per-n centering applied
    std::vector<double> var_ratio;        // sample variance of V (target 1)
    double mu_hat = 0.0;
    double chi_hat = 0.0;                 // stationary plug-in (if computed)
    int estimation_replicas = 0;
    int evaluation_replicas = 0;
};

StabilizedSums stabilized_sums(const ReplicaEnsemble& ens, const PartialSumSpec& spec);

// (n, l_n, m_n, remainder) decomposition with l_n = max(1, floor(n^delta)).
struct BlockScheme {
    int n = 0;
    int block_len = 0;  // l_n
    int blocks = 0;     // m_n
    int remainder = 0;  // n - m_n l_n
    double delta = 0.0;

    static BlockScheme from_delta(int n, double delta);
    static BlockScheme from_block_len(int n, int block_len);
};

struct BlockDiagnostics {
    BlockScheme scheme;
    double sigma2_window = 0.0, sigma2_window_se = 0.0;
    double sigma2_mblocks = 0.0, sigma2_mblocks_se = 0.0;
    double s2_sum = 0.0, s2_sum_se = 0.0;               // sum of per-block variances
    double cross_cov_total = 0.0, cross_cov_se = 0.0;   // sum_{r!=s} cov(Y_r, Y_s)
    double ratio_window_mblocks = 0.0, ratio_window_mblocks_se = 0.0;
    double ratio_mblocks_s2 = 0.0, ratio_mblocks_s2_se = 0.0;
    double lower_bound = 0.0;  // n * min_k var(X_k)
    double upper_bound = 0.0;  // n * v_hat(0)
    double block_third_moment_sum = 0.0; // sum_j E|Y_j - EY_j|^3
    double berry_esseen = 0.0;           // 6 * third-moment sum / s2^{3/2}
};

// Per-replica reduced statistics for one (k, scheme): O(window) per replica,
// so it also serves as a streaming sampler sink (distinct replica indices
// may be added from different threads; results are order-independent).
class BlockAccumulator {
public:
    BlockAccumulator(BlockScheme scheme, int k, int expected_replicas, int groups = 64);

    // consume one replica window (spans the whole ensemble window)
    void add(int replica_index, std::span<const double> window);

    int consumed() const { return consumed_; }

    // min_site_var / v0_hat feed the Hypothesis variance bounds when known
    BlockDiagnostics finalize(double min_site_var = 0.0, double v0_hat = 0.0) const;

private:
    BlockScheme scheme_;
    int k_;
    int groups_;
    int replicas_ = 0;
    int consumed_ = 0;
    int trunc_radius_;
    std::vector<double> s_n_, s_ml_, t_, s_near_;
    std::vector<double> y_; // per-replica block sums, row-major R x m
};

BlockDiagnostics block_diagnostics(const ReplicaEnsemble& ens, const BlockScheme& scheme, int k);

// Berry-Esseen bound 6 sum E|xi_j|^3 / (sum var xi_j)^{3/2} for independent
// zero-mean summands, plus the coarse block form 6 m l^3 C / (m l c)^{3/2}.
double berry_esseen_bound(std::span<const double> block_third_moments, double s2_sum);
double berry_esseen_coarse_bound(int blocks, int block_len, double c_star, double c_lower);

// One row of the convergence table (CSV schema in the README).
struct ConvergenceRow {
    std::string model;
    int k = 0;
    int n = 0;
    double r = 0.0;
    double d_r = 0.0, d_r_se = 0.0;
    double d_k = 0.0;
    double d_1 = 0.0; // always computed; backs the Kolmogorov bound column check
    double mom_emp = 0.0, mom_emp_se = 0.0;
    double mom_target = 0.0;
    double var_ratio = 0.0;
    double be_bound = 0.0;
    int replicas = 0;
    std::uint64_t seed = 0;
    bool kolmogorov_bound_ok = true; // d_K <= 2 sqrt(d_1 / sqrt(2 pi))
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    // per r-value: schedule values and jackknife leave-out estimates for
    // paired trend tests (rows: schedule index)
    struct TrendTrack {
        double r = 0.0;
        std::vector<double> d_r;
        std::vector<std::vector<double>> d_r_leave_out;
        std::vector<double> mom_gap;
        std::vector<std::vector<double>> mom_gap_leave_out;
    };
    std::vector<TrendTrack> trends;
    bool all_kolmogorov_bounds_ok = true;
};

ConvergenceReport convergence_curve(const StabilizedSums& sums, const NormalLaw& law,
                                    const std::string& model_label, int k,
                                    std::uint64_t seed, double delta,
                                    const ReplicaEnsemble& ens);

// sup_k E|S_{[k,k+n)} - n mu|^r / n^{r/2} along the schedule; bounded per
// the Birkel moment inequality when the Cox-Grimmett tail decays fast
// enough.  theta_requirement reports r*(r-2)/(2(r*-r)) for the advisory
// decay-slope comparison.
struct BirkelRow {
    int n = 0;
    double ratio = 0.0; // max over tested k
    double se = 0.0;
};
struct BirkelTable {
    std::vector<BirkelRow> rows;
    double r = 0.0;
    double theta_requirement = 0.0; // needs r_star
    bool bounded = true; // no monotone growth beyond 3 SE overall
};

BirkelTable birkel_moment_check(const ReplicaEnsemble& ens, std::span<const int> lengths,
                                double r, double mu, double r_star = 0.0);

} // namespace mlab
