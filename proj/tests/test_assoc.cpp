#include "assoc.hpp"

#include "gibbs_oracle.hpp"
#include "normal.hpp"

#include "doctest.h"

#include <cmath>
#include <initializer_list>
#include <stdexcept>

using namespace mlab;

namespace {

// iid standard normal ensemble, built directly (independent of the samplers)
ReplicaEnsemble iid_gauss(int R, int N, std::uint64_t seed) {
    ReplicaEnsemble ens(R, N);
    for (int r = 0; r < R; ++r) {
        CounterRng rng(seed, static_cast<std::uint64_t>(r));
        auto row = ens.mutable_row(r);
        for (auto& x : row) x = normal_quantile(rng.next_open01());
    }
    return ens;
}

// moving sum X_j = Z_j + Z_{j+1}: c(0) = 2, c(1) = 1, c(j >= 2) = 0
ReplicaEnsemble moving_sum(int R, int N, std::uint64_t seed) {
    ReplicaEnsemble ens(R, N);
    for (int r = 0; r < R; ++r) {
        CounterRng rng(seed, static_cast<std::uint64_t>(r));
        auto row = ens.mutable_row(r);
        double prev = normal_quantile(rng.next_open01());
        for (auto& x : row) {
            const double z = normal_quantile(rng.next_open01());
            x = prev + z;
            prev = z;
        }
    }
    return ens;
}

} // namespace

TEST_CASE("covariances of iid replicas: unit variance, zero lags") {
    const auto ens = iid_gauss(600, 96, 11);
    const auto cov = estimate_covariances(ens, true, 10);
    CHECK(std::abs(cov.lag_cov[0] - 1.0) <= 3.0 * cov.lag_cov_se[0]);
    for (int j = 1; j <= 10; ++j)
        CHECK(std::abs(cov.lag_cov[static_cast<std::size_t>(j)]) <=
              3.5 * cov.lag_cov_se[static_cast<std::size_t>(j)]);
    CHECK(std::abs(cov.chi_hat - 1.0) <= 4.0 * cov.chi_se);
    CHECK_FALSE(cov.zero_variance_flag);
}

TEST_CASE("covariances of the moving sum match the closed form") {
    const auto ens = moving_sum(800, 128, 22);
    const auto cov = estimate_covariances(ens, true, 6);
    CHECK(std::abs(cov.lag_cov[0] - 2.0) <= 3.5 * cov.lag_cov_se[0]);
    CHECK(std::abs(cov.lag_cov[1] - 1.0) <= 3.5 * cov.lag_cov_se[1]);
    for (int j = 2; j <= 6; ++j)
        CHECK(std::abs(cov.lag_cov[static_cast<std::size_t>(j)]) <=
              3.5 * cov.lag_cov_se[static_cast<std::size_t>(j)]);
    // chi = c(0) + 2 c(1) = 4 (moving-sum marginals have variance 2)
    CHECK(std::abs(cov.chi_hat - 4.0) <= 4.0 * cov.chi_se);
}

TEST_CASE("gibbs chain covariances agree with exact enumeration") {
    SampleParams p;
    p.coupling = CouplingFamily::finite_range(0.25, 1);
    p.space = SpinSpace::plus_minus();
    p.window = 10;
    p.boundary = Boundary::Free;
    p.burn_in = 80;
    p.replicas = 3000;
    p.seed = 5601;
    p.edge_margin = 0;
    const auto ens = sample_ensemble(p);
    const auto cov = estimate_covariances(ens, true, 4);
    const auto ex = exact_enumeration(p.coupling, 10);
    // position-averaged exact covariance at each lag
    for (int j = 0; j <= 4; ++j) {
        double exact = 0.0;
        for (int k = 0; k + j < 10; ++k) exact += ex.cov(k, k + j);
        exact /= static_cast<double>(10 - j);
        CHECK(std::abs(cov.lag_cov[static_cast<std::size_t>(j)] - exact) <=
              3.5 * cov.lag_cov_se[static_cast<std::size_t>(j)]);
    }
}

TEST_CASE("non-stationary mode keeps a per-site matrix") {
    const auto ens = moving_sum(500, 40, 33);
    const auto cov = estimate_covariances(ens, false, 4);
    CHECK_FALSE(cov.stationary);
    for (int k = 5; k < 30; ++k) {
        CHECK(std::abs(cov.site_at(k, 0) - 2.0) <= 4.0 * cov.site_se_at(k, 0));
        CHECK(std::abs(cov.site_at(k, 1) - 1.0) <= 4.0 * cov.site_se_at(k, 1));
    }
    CHECK(cov.chi_hat > 0.0);
}

TEST_CASE("cox-grimmett profile: exact geometric covariances") {
    // c(j) = rho^j exactly; u(n) = 2 rho^n / (1 - rho) for n >= 1
    const double rho = 0.5;
    const int lag_max = 60;
    std::vector<double> lags(static_cast<std::size_t>(lag_max) + 1);
    for (int j = 0; j <= lag_max; ++j) lags[static_cast<std::size_t>(j)] = std::pow(rho, j);
    // two identical replicas: zero SEs, exact tail sums
    std::vector<double> replica_lag;
    replica_lag.insert(replica_lag.end(), lags.begin(), lags.end());
    replica_lag.insert(replica_lag.end(), lags.begin(), lags.end());
    CovarianceSummary cov;
    cov.stationary = true;
    cov.window = 256;
    cov.lag_max = lag_max;
    cov.replica_count = 2;
    cov.lag_cov = lags;
    cov.lag_cov_se.assign(lags.size(), 0.0);
    cov.replica_lag = replica_lag;

    const auto prof = cox_grimmett_profile(cov, 16);
    CHECK(prof.u_hat[0] == doctest::Approx(1.0 + 2.0 * rho / (1.0 - rho)).epsilon(1e-12));
    for (int n = 1; n <= 16; ++n)
        CHECK(prof.u_hat[static_cast<std::size_t>(n)] ==
              doctest::Approx(2.0 * std::pow(rho, n) / (1.0 - rho)).epsilon(1e-9));
    for (int n = 0; n < 16; ++n)
        CHECK(prof.u_hat[static_cast<std::size_t>(n + 1)] <=
              prof.u_hat[static_cast<std::size_t>(n)] + 1e-12);
}

TEST_CASE("cox-grimmett profile: iid case and truncation flag") {
    const auto ens = iid_gauss(500, 96, 44);
    const auto cov = estimate_covariances(ens, true, 20);
    const auto prof = cox_grimmett_profile(cov, 8);
    CHECK(std::abs(prof.u_hat[0] - 1.0) <= 4.0 * prof.u_se[0]);
    for (int n = 1; n <= 8; ++n)
        CHECK(std::abs(prof.u_hat[static_cast<std::size_t>(n)]) <=
              4.0 * prof.u_se[static_cast<std::size_t>(n)]);
    // nonincreasing within noise
    for (int n = 0; n < 8; ++n)
        CHECK(prof.u_hat[static_cast<std::size_t>(n + 1)] <=
              prof.u_hat[static_cast<std::size_t>(n)] +
                  3.0 * (prof.u_se[static_cast<std::size_t>(n)] +
                         prof.u_se[static_cast<std::size_t>(n + 1)]));
    // asking deeper than the lag table flags truncation
    const auto deep = cox_grimmett_profile(cov, 40);
    CHECK(deep.truncation_bias_flag);
    CHECK(deep.n_max == 20);
}

TEST_CASE("association test: iid passes, ferromagnet passes, fixture fails") {
    const auto iid = iid_gauss(1200, 12, 55);
    const auto rep = association_test(iid, 20, 101);
    CHECK(rep.pass);

    SampleParams p;
    p.coupling = CouplingFamily::finite_range(0.25, 1);
    p.space = SpinSpace::plus_minus();
    p.window = 10;
    p.burn_in = 60;
    p.replicas = 1200;
    p.seed = 5602;
    p.edge_margin = 2;
    const auto ferro = association_test(sample_ensemble(p), 20, 102);
    CHECK(ferro.pass);

    // constructed counterexample: X_2 = -X_1
    ReplicaEnsemble bad(1000, 2);
    for (int r = 0; r < 1000; ++r) {
        CounterRng rng(77, static_cast<std::uint64_t>(r));
        const double z = normal_quantile(rng.next_open01());
        bad.mutable_row(r)[0] = z;
        bad.mutable_row(r)[1] = -z;
    }
    const auto fixture = association_test(bad, 10, 103);
    CHECK_FALSE(fixture.pass);
    CHECK(fixture.min_studentized < -10.0);
}

TEST_CASE("FKG-positivity of monotone pair covariances on the exact oracle") {
    const auto ex = exact_enumeration(CouplingFamily::finite_range(0.3, 1), 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) CHECK(ex.cov(i, j) >= -1e-14);
}

TEST_CASE("cf gap check") {
    // all frequencies zero: lhs = rhs = 0
    const auto ens = iid_gauss(400, 4, 66);
    const double zero[3] = {0.0, 0.0, 0.0};
    const auto z = cf_gap_check(ens, std::span<const double>(zero, 3));
    CHECK(z.lhs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.rhs == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(z.pass);

    const double fr[4] = {0.8, -0.6, 1.2, 0.4};
    const auto gap = cf_gap_check(ens, std::span<const double>(fr, 4));
    CHECK(gap.pass);

    // exact 3-site +-1 chain, freqs (1,1,1): inequality with zero tolerance
    const auto coupling = CouplingFamily::finite_range(0.2, 1);
    const auto ex = exact_enumeration(coupling, 3);
    double z3 = 0.0, re = 0.0;
    {
        double emax = -1e300;
        double energies[8];
        for (unsigned c = 0; c < 8; ++c) {
            double h = 0.0;
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j)
                    h += 2.0 * coupling.at(i, j) * ((c >> i) & 1u ? 1.0 : -1.0) *
                         ((c >> j) & 1u ? 1.0 : -1.0);
            energies[c] = h;
            emax = std::max(emax, h);
        }
        for (unsigned c = 0; c < 8; ++c) {
            const double w = std::exp(energies[c] - emax);
            z3 += w;
            double t = 0.0;
            for (int i = 0; i < 3; ++i) t += (c >> i) & 1u ? 1.0 : -1.0;
            re += w * std::cos(t);
        }
        re /= z3;
    }
    const double lhs = std::abs(re - std::pow(std::cos(1.0), 3));
    double rhs = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) rhs += 0.5 * ex.cov(i, j);
    CHECK(lhs <= rhs + 1e-12);
}

TEST_CASE("rao-blackwell lag covariances agree with the exact oracle") {
    RbRunParams rb;
    rb.sample.coupling = CouplingFamily::long_range(0.2, 3.5);
    rb.sample.space = SpinSpace::plus_minus();
    rb.sample.window = 12;
    rb.sample.burn_in = 60;
    rb.sample.replicas = 400;
    rb.sample.seed = 8080;
    rb.sample.edge_margin = 0;
    rb.windows = 20;
    rb.spacing = 2;
    rb.lag_max = 5;
    const auto cov = rb_lag_covariances(rb);
    const auto ex = exact_enumeration(rb.sample.coupling, 12);
    for (int j = 1; j <= 5; ++j) {
        double exact = 0.0;
        for (int k = 0; k + j < 12; ++k) exact += ex.cov(k, k + j);
        exact /= static_cast<double>(12 - j);
        CHECK(std::abs(cov.lag_cov[static_cast<std::size_t>(j)] - exact) <=
              3.5 * cov.lag_cov_se[static_cast<std::size_t>(j)]);
    }
    CHECK(cov.lag_cov[0] == doctest::Approx(1.0).epsilon(1e-3)); // +-1 spins: 1 - mu_hat^2

    RbRunParams bad;
    bad.sample.space = SpinSpace::interval();
    CHECK_THROWS_AS((void)rb_lag_covariances(bad), std::invalid_argument);
}

TEST_CASE("estimator preconditions") {
    const auto ens = iid_gauss(10, 8, 99);
    CHECK_THROWS_AS((void)estimate_covariances(ens, true, 8), std::invalid_argument);
    CHECK_THROWS_AS((void)association_test(ens, 0, 1), std::invalid_argument);
    const double f[1] = {1.0};
    CHECK_NOTHROW((void)cf_gap_check(ens, std::span<const double>(f, 1)));
}
