#include "coupling.hpp"

#include "rng.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mlab {

CouplingFamily CouplingFamily::zero() { return CouplingFamily{}; }

CouplingFamily CouplingFamily::finite_range(double J, int L) {
    if (!(J > 0.0) || L < 1)
        throw std::invalid_argument("finite_range coupling: need J > 0, L >= 1");
    CouplingFamily c;
    c.kind_ = Kind::FiniteRange;
    c.J_ = J;
    c.L_ = L;
    return c;
}

CouplingFamily CouplingFamily::long_range(double beta, double alpha) {
    if (!(beta > 0.0) || !(alpha > 1.0))
        throw std::invalid_argument("long_range coupling: need beta > 0, alpha > 1");
    CouplingFamily c;
    c.kind_ = Kind::LongRange;
    c.beta_ = beta;
    c.alpha_ = alpha;
    return c;
}

CouplingFamily CouplingFamily::perturbed(double alpha, double c1, double c2,
                                         std::uint64_t seed, double strength) {
    if (!(alpha > 2.0)) throw std::invalid_argument("perturbed coupling: need alpha > 2");
    if (!(c1 > 0.0 && c1 < 1.0) || !(c2 > 1.0))
        throw std::invalid_argument("perturbed coupling: need C1 in (0,1), C2 > 1");
    if (!(strength > 0.0)) throw std::invalid_argument("perturbed coupling: strength > 0");
    CouplingFamily c;
    c.kind_ = Kind::Perturbed;
    c.alpha_ = alpha;
    c.c1_ = c1;
    c.c2_ = c2;
    c.pseed_ = seed;
    c.strength_ = strength;
    return c;
}

double CouplingFamily::at(long i, long j) const {
    if (i == j) return 0.0;
    const double d = static_cast<double>(std::labs(i - j));
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::FiniteRange:
            return d <= static_cast<double>(L_) ? J_ : 0.0;
        case Kind::LongRange:
            return beta_ * std::pow(d, -alpha_);
        case Kind::Perturbed: {
            const double base = std::pow(d, -alpha_);
            const double u = pair_hash_open01(pseed_, i, j);
            return strength_ * (base + (c1_ + (c2_ - c1_) * u) * base);
        }
    }
    return 0.0;
}

double CouplingFamily::retained_row_mass(int radius) const {
    double s = 0.0;
    for (int d = 1; d <= radius; ++d) {
        double term = 0.0;
        switch (kind_) {
            case Kind::Zero: break;
            case Kind::FiniteRange: term = d <= L_ ? J_ : 0.0; break;
            case Kind::LongRange: term = beta_ * std::pow(d, -alpha_); break;
            case Kind::Perturbed:
                term = strength_ * (1.0 + c2_) * std::pow(d, -alpha_);
                break;
        }
        s += 2.0 * term; // both directions
    }
    return s;
}

double CouplingFamily::tail_row_mass(int radius) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::FiniteRange:
            return radius >= L_ ? 0.0 : 2.0 * J_ * static_cast<double>(L_ - radius);
        case Kind::LongRange:
        case Kind::Perturbed: {
            const double amp = kind_ == Kind::LongRange
                                   ? beta_
                                   : strength_ * (1.0 + c2_);
            // sum_{d>radius} d^{-alpha} <= integral bound radius^{1-alpha}/(alpha-1)
            return 2.0 * amp * std::pow(static_cast<double>(radius), 1.0 - alpha_) /
                   (alpha_ - 1.0);
        }
    }
    return 0.0;
}

std::string CouplingFamily::describe() const {
    char buf[160];
    switch (kind_) {
        case Kind::Zero:
            return "zero";
        case Kind::FiniteRange:
            std::snprintf(buf, sizeof buf, "finite_range(J=%.17g,L=%d)", J_, L_);
            return buf;
        case Kind::LongRange:
            std::snprintf(buf, sizeof buf, "long_range(beta=%.17g,alpha=%.17g)", beta_, alpha_);
            return buf;
        case Kind::Perturbed:
            std::snprintf(buf, sizeof buf,
                          "perturbed(alpha=%.17g,c1=%.17g,c2=%.17g,strength=%.17g,pseed=%llu)",
                          alpha_, c1_, c2_, strength_,
                          static_cast<unsigned long long>(pseed_));
            return buf;
    }
    return "?";
}

} // namespace mlab
