#include "spin_chain.hpp"

#include "normal.hpp"

#include <cmath>
#include <stdexcept>

namespace mlab {

bool SpinSpace::known_symmetric_zero_mean() const {
    switch (kind) {
        case Kind::PlusMinus:
        case Kind::Interval:
            return true;
        case Kind::RealLaw:
            return (law == Law::Gauss && p1 == 0.0) ||
                   (law == Law::Uniform && p1 == -p2);
    }
    return false;
}

double SpinSpace::lambda_mean() const {
    switch (kind) {
        case Kind::PlusMinus:
        case Kind::Interval:
            return 0.0;
        case Kind::RealLaw:
            switch (law) {
                case Law::Gauss: return p1;
                case Law::Uniform: return 0.5 * (p1 + p2);
                case Law::Exponential: return 1.0 / p1;
            }
    }
    return 0.0;
}

double SpinSpace::lambda_sd() const {
    switch (kind) {
        case Kind::PlusMinus:
            return 1.0;
        case Kind::Interval:
            return std::sqrt(1.0 / 3.0);
        case Kind::RealLaw:
            switch (law) {
                case Law::Gauss: return p2;
                case Law::Uniform: return (p2 - p1) / std::sqrt(12.0);
                case Law::Exponential: return 1.0 / p1;
            }
    }
    return 1.0;
}

std::string SpinSpace::describe() const {
    char buf[96];
    switch (kind) {
        case Kind::PlusMinus: return "plus_minus";
        case Kind::Interval: return "interval";
        case Kind::RealLaw:
            switch (law) {
                case Law::Gauss:
                    std::snprintf(buf, sizeof buf, "gauss(%.17g,%.17g)", p1, p2);
                    return buf;
                case Law::Uniform:
                    std::snprintf(buf, sizeof buf, "uniform(%.17g,%.17g)", p1, p2);
                    return buf;
                case Law::Exponential:
                    std::snprintf(buf, sizeof buf, "exponential(%.17g)", p1);
                    return buf;
            }
    }
    return "?";
}

std::string boundary_name(Boundary b) {
    switch (b) {
        case Boundary::Free: return "free";
        case Boundary::Periodic: return "periodic";
        case Boundary::FrozenPlus: return "frozen_plus";
    }
    return "?";
}

double interval_conditional_sample(double h, double u) {
    if (std::abs(h) < 1e-8) return 2.0 * u - 1.0;
    // s = -1 + log(1 + u (e^{2h} - 1)) / h, the closed-form CDF inverse
    return -1.0 + std::log1p(u * std::expm1(2.0 * h)) / h;
}

double interval_conditional_cdf(double h, double s) {
    if (std::abs(h) < 1e-8) return 0.5 * (s + 1.0);
    return std::expm1(h * (s + 1.0)) / std::expm1(2.0 * h);
}

SpinChain::SpinChain(const CouplingFamily& coupling, SpinSpace space, int n,
                     Boundary boundary, int interaction_radius)
    : coupling_(&coupling),
      space_(space),
      n_(n),
      boundary_(boundary),
      radius_(interaction_radius) {
    if (n < 1) throw std::invalid_argument("SpinChain: volume must be >= 1");
    if (boundary == Boundary::Periodic &&
        !(coupling.kind() == CouplingFamily::Kind::Zero ||
          (coupling.kind() == CouplingFamily::Kind::FiniteRange && 2 * coupling.range() < n)))
        throw std::invalid_argument("SpinChain: periodic boundary needs finite range < N/2");
    if (space.kind == SpinSpace::Kind::RealLaw &&
        coupling.kind() != CouplingFamily::Kind::Zero)
        throw std::invalid_argument("SpinChain: unbounded spins require zero coupling");
    if (coupling.has_finite_range()) radius_ = coupling.range();
    if (radius_ > n - 1) radius_ = n - 1;
    if (radius_ < 0) radius_ = 0;
    spins_.assign(static_cast<std::size_t>(n), 0.0);
    fields_.assign(static_cast<std::size_t>(n), 0.0);
    frozen_offset_.assign(static_cast<std::size_t>(n), 0.0);
    if (boundary_ == Boundary::FrozenPlus) {
        // exterior spins fixed at +1 within the interaction radius
        for (int i = 0; i < n_; ++i) {
            double f = 0.0;
            for (int d = 1; d <= radius_; ++d) {
                const int left = i - d, right = i + d;
                if (left < 0) f += coupling_->at(i, left);
                if (right >= n_) f += coupling_->at(i, right);
            }
            frozen_offset_[static_cast<std::size_t>(i)] = 2.0 * f;
        }
    }
}

double SpinChain::coupling_at(int i, int j) const {
    if (boundary_ == Boundary::Periodic) {
        int d = std::abs(i - j);
        d = std::min(d, n_ - d);
        return coupling_->at(0, d);
    }
    return coupling_->at(i, j);
}

double SpinChain::lambda_draw(CounterRng& rng) const {
    switch (space_.kind) {
        case SpinSpace::Kind::PlusMinus:
            return (rng.next_u64() & 1u) ? 1.0 : -1.0;
        case SpinSpace::Kind::Interval:
            return rng.next_uniform(-1.0, 1.0);
        case SpinSpace::Kind::RealLaw:
            switch (space_.law) {
                case SpinSpace::Law::Gauss:
                    return space_.p1 + space_.p2 * normal_quantile(rng.next_open01());
                case SpinSpace::Law::Uniform:
                    return rng.next_uniform(space_.p1, space_.p2);
                case SpinSpace::Law::Exponential:
                    return -std::log(rng.next_open01()) / space_.p1;
            }
    }
    return 0.0;
}

void SpinChain::randomize(CounterRng& rng) {
    for (auto& s : spins_) s = lambda_draw(rng);
    recompute_fields();
    sweeps_ = 0;
}

void SpinChain::recompute_fields() {
    for (int i = 0; i < n_; ++i) {
        double h = frozen_offset_[static_cast<std::size_t>(i)];
        const int lo = boundary_ == Boundary::Periodic ? i - radius_ : std::max(0, i - radius_);
        const int hi = boundary_ == Boundary::Periodic ? i + radius_ : std::min(n_ - 1, i + radius_);
        for (int j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const int jj = boundary_ == Boundary::Periodic ? ((j % n_) + n_) % n_ : j;
            h += 2.0 * coupling_at(i, jj) * spins_[static_cast<std::size_t>(jj)];
        }
        fields_[static_cast<std::size_t>(i)] = h;
    }
    updates_since_refresh_ = 0;
}

double SpinChain::max_field_cache_error() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
        double h = frozen_offset_[static_cast<std::size_t>(i)];
        const int lo = boundary_ == Boundary::Periodic ? i - radius_ : std::max(0, i - radius_);
        const int hi = boundary_ == Boundary::Periodic ? i + radius_ : std::min(n_ - 1, i + radius_);
        for (int j = lo; j <= hi; ++j) {
            if (j == i) continue;
            const int jj = boundary_ == Boundary::Periodic ? ((j % n_) + n_) % n_ : j;
            h += 2.0 * coupling_at(i, jj) * spins_[static_cast<std::size_t>(jj)];
        }
        worst = std::max(worst, std::abs(h - fields_[static_cast<std::size_t>(i)]));
    }
    return worst;
}

void SpinChain::sweep(CounterRng& rng) {
    const bool zero_coupling = coupling_->kind() == CouplingFamily::Kind::Zero;
    for (int i = 0; i < n_; ++i) {
        const double h = fields_[static_cast<std::size_t>(i)];
        if (!std::isfinite(h))
            throw std::runtime_error("SpinChain: non-finite local field (summability violated)");
        double news;
        switch (space_.kind) {
            case SpinSpace::Kind::PlusMinus: {
                // P(+1 | rest) = e^h / (e^h + e^{-h})
                const double p = 1.0 / (1.0 + std::exp(-2.0 * h));
                news = rng.next_open01() < p ? 1.0 : -1.0;
                break;
            }
            case SpinSpace::Kind::Interval:
                news = interval_conditional_sample(h, rng.next_open01());
                break;
            case SpinSpace::Kind::RealLaw:
                news = lambda_draw(rng);
                break;
        }
        const double old = spins_[static_cast<std::size_t>(i)];
        if (news != old && !zero_coupling) {
            const double delta = news - old;
            const int lo = boundary_ == Boundary::Periodic ? i - radius_ : std::max(0, i - radius_);
            const int hi = boundary_ == Boundary::Periodic ? i + radius_ : std::min(n_ - 1, i + radius_);
            for (int j = lo; j <= hi; ++j) {
                if (j == i) continue;
                const int jj = boundary_ == Boundary::Periodic ? ((j % n_) + n_) % n_ : j;
                fields_[static_cast<std::size_t>(jj)] += 2.0 * coupling_at(jj, i) * delta;
            }
            ++updates_since_refresh_;
        }
        spins_[static_cast<std::size_t>(i)] = news;
    }
    ++sweeps_;
    // keep the incremental cache within 1e-10 of a fresh recomputation
    if (updates_since_refresh_ >= (1u << 20)) recompute_fields();
}

double SpinChain::hamiltonian() const {
    double h = 0.0;
    for (int i = 0; i < n_; ++i) {
        const int hi = boundary_ == Boundary::Periodic ? i + radius_ : std::min(n_ - 1, i + radius_);
        for (int j = i + 1; j <= hi; ++j) {
            const int jj = boundary_ == Boundary::Periodic ? j % n_ : j;
            if (jj == i) continue;
            h += 2.0 * coupling_at(i, jj) * spins_[static_cast<std::size_t>(i)] *
                 spins_[static_cast<std::size_t>(jj)];
        }
        h += frozen_offset_[static_cast<std::size_t>(i)] * spins_[static_cast<std::size_t>(i)];
    }
    return h;
}

double integrated_autocorrelation_time(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n < 8) return 1.0;
    double mean = 0.0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(n);
    double c0 = 0.0;
    for (double x : series) c0 += (x - mean) * (x - mean);
    c0 /= static_cast<double>(n);
    if (c0 <= 0.0) return 1.0;
    double tau = 1.0;
    for (std::size_t t = 1; t < n / 2; ++t) {
        double ct = 0.0;
        for (std::size_t k = 0; k + t < n; ++k)
            ct += (series[k] - mean) * (series[k + t] - mean);
        ct /= static_cast<double>(n - t);
        tau += 2.0 * ct / c0;
        // Sokal window: stop once the window exceeds ~5 tau
        if (static_cast<double>(t) >= 5.0 * tau) break;
    }
    return std::max(tau, 1.0);
}

} // namespace mlab
