#pragma once

#include "coupling.hpp"
#include "spin_chain.hpp"

#include <vector>

namespace mlab {

// Exact finite-volume Gibbs expectations for {-1,+1} chains by direct
// summation over all 2^N configurations.  Ground-truth oracle for the
// samplers and covariance estimators; refuses N > 16.
struct EnumerationResult {
    int n = 0;
    std::vector<double> mean;       // E[s_i]
    std::vector<double> pair;       // E[s_i s_j], row-major n x n
    double at(int i, int j) const { return pair[static_cast<std::size_t>(i) * n + j]; }
    double cov(int i, int j) const { return at(i, j) - mean[i] * mean[j]; }
};

struct EnumerationOptions {
    Boundary boundary = Boundary::Free;
    int interaction_radius = 64; // frozen-boundary exterior reach
    bool flip_hamiltonian_sign = false; // test fixture
};

EnumerationResult exact_enumeration(const CouplingFamily& coupling, int n,
                                    const EnumerationOptions& opts = {});

// Moments E[(sum_{i in [a,b)} s_i)^p], p = 1..4, from the same exact sum.
std::vector<double> exact_block_moments(const CouplingFamily& coupling, int n, int a, int b,
                                        const EnumerationOptions& opts = {});

// Independent second oracle for nearest-neighbour +-1 chains via 2x2
// transfer-matrix products; effective bond coupling K = 2J (ordered-pair
// Hamiltonian convention).
struct TransferMatrixResult {
    int n = 0;
    std::vector<double> pair; // E[s_i s_j]
    double at(int i, int j) const { return pair[static_cast<std::size_t>(i) * n + j]; }
};

TransferMatrixResult transfer_matrix_two_point(double J, int n, Boundary boundary);

// Infinite-chain limit E[s_0 s_k] = tanh(2J)^{|k|}.
double transfer_matrix_infinite_two_point(double J, int distance);

} // namespace mlab
