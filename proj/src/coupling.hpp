#pragma once

#include <cstdint>
#include <string>

namespace mlab {

// Symmetric nonnegative pair couplings J(i,j) for the four chain models:
//   Zero                          J = 0 (product measure)
//   FiniteRange(J, L)             J(i,j) = J * 1{0 < |i-j| <= L}
//   LongRange(beta, alpha)        J(i,j) = beta |i-j|^{-alpha}, alpha > 1
//   Perturbed(alpha, C1, C2, s)   J(i,j) = strength*(|i-j|^{-alpha} + r_ij),
//                                 C1|i-j|^{-alpha} <= r_ij <= C2|i-j|^{-alpha},
//                                 r_ij drawn deterministically from the
//                                 perturbation seed (quenched bond disorder,
//                                 not translation invariant)
//
// The Hamiltonian convention is the ordered-pair sum, so each unordered bond
// contributes 2*J(i,j) and the local field is h_i = 2 sum_j J(i,j) s_j.
class CouplingFamily {
public:
    enum class Kind { Zero, FiniteRange, LongRange, Perturbed };

    static CouplingFamily zero();
    static CouplingFamily finite_range(double J, int L);
    static CouplingFamily long_range(double beta, double alpha);
    static CouplingFamily perturbed(double alpha, double c1, double c2,
                                    std::uint64_t perturbation_seed, double strength = 1.0);

    Kind kind() const { return kind_; }
    double at(long i, long j) const;

    // Largest interaction distance that matters: L for finite range,
    // the caller-chosen cutoff for power laws (LONG_RANGE_UNBOUNDED = none).
    bool has_finite_range() const { return kind_ == Kind::Zero || kind_ == Kind::FiniteRange; }
    int range() const { return L_; }

    // sup_i sum_{0<|i-j|<=radius} J(i,j), an upper bound independent of i
    double retained_row_mass(int radius) const;
    // upper bound on sup_i sum_{|i-j|>radius} J(i,j)
    double tail_row_mass(int radius) const;

    double param_J() const { return J_; }
    double param_beta() const { return beta_; }
    double param_alpha() const { return alpha_; }
    double param_c1() const { return c1_; }
    double param_c2() const { return c2_; }
    double param_strength() const { return strength_; }
    std::uint64_t perturbation_seed() const { return pseed_; }

    // canonical text form, used for labels and the sample-cache key
    std::string describe() const;

private:
    Kind kind_ = Kind::Zero;
    double J_ = 0.0;
    int L_ = 0;
    double beta_ = 0.0;
    double alpha_ = 0.0;
    double c1_ = 0.0, c2_ = 0.0;
    double strength_ = 1.0;
    std::uint64_t pseed_ = 0;
};

} // namespace mlab
