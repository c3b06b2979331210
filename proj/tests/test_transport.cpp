#include "transport.hpp"

#include "rng.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <vector>

using namespace mlab;

namespace {

std::vector<double> random_values(CounterRng& rng, std::size_t m, double lo, double hi) {
    std::vector<double> v(m);
    for (auto& x : v) x = rng.next_uniform(lo, hi);
    return v;
}

// oracle: minimum over all pairings of equal-size samples
double brute_force_cost(std::vector<double> a, std::vector<double> b, double r) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double best = 1e300;
    do {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += std::pow(std::abs(a[i] - b[i]), r);
        best = std::min(best, acc / static_cast<double>(a.size()));
    } while (std::next_permutation(b.begin(), b.end()));
    return std::pow(best, 1.0 / r);
}

// oracle: plain midpoint quadrature of int |F^{-1}(u) - q(u)|^r du on a fine
// uniform u-grid; independent of the closed-form partial-moment route
double midpoint_quadrature_to_normal(const SortedSample& s, const NormalLaw& law, double r,
                                     int cells_per_interval = 4000) {
    const std::size_t m = s.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double ua = static_cast<double>(i) / static_cast<double>(m);
        const double ub = static_cast<double>(i + 1) / static_cast<double>(m);
        const int cells = cells_per_interval;
        for (int c = 0; c < cells; ++c) {
            const double u = ua + (ub - ua) * (c + 0.5) / cells;
            acc += std::pow(std::abs(s[i] - law.quantile(u)), r) * (ub - ua) / cells;
        }
    }
    return std::pow(acc, 1.0 / r);
}

} // namespace

TEST_CASE("empirical cdf and generalized inverse") {
    const auto s = SortedSample::from_sorted({1.0, 2.0, 3.0});
    CHECK(s.cdf(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(s.cdf(0.0) == 0.0);
    CHECK(s.cdf(3.0) == 1.0);
    CHECK(s.cdf(2.5) == doctest::Approx(2.0 / 3.0)); // right continuous step
    CHECK(s.quantile(0.5) == 2.0);
    CHECK(s.quantile(1.0 / 3.0) == 1.0); // left continuity at the jump
    CHECK(s.quantile(1.0 / 3.0 + 1e-12) == 2.0);
    const auto atom = SortedSample::from_sorted({5.0});
    CHECK(atom.quantile(0.99) == 5.0);
    CHECK_THROWS_AS((void)s.quantile(0.0), std::domain_error);
    CHECK_THROWS_AS((void)s.quantile(1.5), std::domain_error);
    CHECK_THROWS_AS(SortedSample::from_sorted({}), std::invalid_argument);
    CHECK_THROWS_AS(SortedSample::from_sorted({2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(SortedSample::from_unsorted({1.0, std::nan("")}), std::invalid_argument);
    // atoms are legal
    CHECK_NOTHROW(SortedSample::from_sorted({1.0, 1.0, 1.0}));
}

TEST_CASE("mallows distance basic examples") {
    const auto a = SortedSample::from_sorted({0.0});
    const auto b = SortedSample::from_sorted({1.0});
    CHECK(mallows_distance(a, b, 2.0) == doctest::Approx(1.0));
    const auto c = SortedSample::from_sorted({1.0, 2.0, 3.0});
    const auto d = SortedSample::from_sorted({2.0, 3.0, 4.0});
    CHECK(mallows_distance(c, d, 1.0) == doctest::Approx(1.0));
    CHECK(mallows_distance(c, c, 0.7) == 0.0);
    CHECK_THROWS_AS((void)mallows_distance(c, d, 0.0), std::domain_error);

    // same multiset, different construction order
    CounterRng rng(7, 7);
    auto u = random_values(rng, 500, 0.0, 1.0);
    auto v = u;
    std::reverse(v.begin(), v.end());
    CHECK(mallows_distance(SortedSample::from_unsorted(u), SortedSample::from_unsorted(v), 2.0) ==
          doctest::Approx(0.0));
}

TEST_CASE("two independent code paths agree on equal sizes") {
    CounterRng rng(42, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + rng.next_below(40);
        const auto a = SortedSample::from_unsorted(random_values(rng, m, -3, 3));
        const auto b = SortedSample::from_unsorted(random_values(rng, m, -3, 3));
        for (double r : {0.5, 1.0, 2.0, 3.3}) {
            const double direct = mallows_rpow_sorted_pairs(a, b, r);
            const double merged = mallows_rpow_merged_grid(a, b, r);
            CHECK(direct == doctest::Approx(merged).epsilon(1e-12));
        }
    }
}

TEST_CASE("merged grid handles unequal sizes exactly") {
    // F: mass 1/2 at 0 and 1; G: mass 1/3 at 0, 1/2, 1
    const auto a = SortedSample::from_sorted({0.0, 1.0});
    const auto b = SortedSample::from_sorted({0.0, 0.5, 1.0});
    // pieces (1/3,1/2]: |0-0.5| and (1/2,2/3]: |1-0.5|
    const double expected = (0.5 - 1.0 / 3.0) * 0.5 + (2.0 / 3.0 - 0.5) * 0.5;
    CHECK(mallows_rpow_merged_grid(a, b, 1.0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("comonotone pairing is minimal (oracle: all permutations)") {
    CounterRng rng(2024, 3);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 2 + rng.next_below(5); // sizes up to 6
        const auto av = random_values(rng, m, -2, 2);
        const auto bv = random_values(rng, m, -2, 2);
        const auto sa = SortedSample::from_unsorted(av);
        const auto sb = SortedSample::from_unsorted(bv);
        for (double r : {1.0, 2.0}) {
            const double sorted_cost = mallows_distance(sa, sb, r);
            const double oracle = brute_force_cost(av, bv, r);
            CHECK(sorted_cost <= oracle + 1e-10);
            CHECK(sorted_cost == doctest::Approx(oracle).epsilon(1e-10));
        }
    }
}

TEST_CASE("metric axioms for r >= 1") {
    CounterRng rng(5, 5);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t m = 1 + rng.next_below(20);
        const auto a = SortedSample::from_unsorted(random_values(rng, m, -1, 1));
        const auto b = SortedSample::from_unsorted(random_values(rng, m, -1, 1));
        const auto c = SortedSample::from_unsorted(random_values(rng, m, -1, 1));
        for (double r : {1.0, 2.0, 3.0}) {
            CHECK(mallows_distance(a, b, r) == doctest::Approx(mallows_distance(b, a, r)));
            CHECK(mallows_distance(a, c, r) <=
                  mallows_distance(a, b, r) + mallows_distance(b, c, r) + 1e-12);
        }
    }
}

TEST_CASE("affine equivariance d(aX+b, aY+b) = a d(X,Y)") {
    CounterRng rng(9, 2);
    const auto xv = random_values(rng, 31, -2, 5);
    const auto yv = random_values(rng, 31, -4, 1);
    const double aa = 2.75, bb = -1.25;
    auto xs = xv, ys = yv;
    for (auto& x : xs) x = aa * x + bb;
    for (auto& y : ys) y = aa * y + bb;
    for (double r : {1.0, 2.0, 2.5}) {
        const double base = mallows_distance(SortedSample::from_unsorted(xv),
                                             SortedSample::from_unsorted(yv), r);
        const double scaled = mallows_distance(SortedSample::from_unsorted(xs),
                                               SortedSample::from_unsorted(ys), r);
        CHECK(scaled == doctest::Approx(aa * base).epsilon(1e-12));
    }
}

TEST_CASE("power-mean (Liapounov) ordering on the comonotone coupling") {
    CounterRng rng(77, 1);
    const auto a = SortedSample::from_unsorted(random_values(rng, 64, -2, 2));
    const auto b = SortedSample::from_unsorted(random_values(rng, 64, -2, 2));
    double prev = 0.0;
    bool first = true;
    for (double r : {0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) {
        const double d = mallows_distance(a, b, r);
        if (!first) CHECK(d >= prev - 1e-12);
        prev = d;
        first = false;
    }
}

TEST_CASE("closed-form normal distance") {
    CHECK(mallows_normal_closed_form(NormalLaw(0, 1), NormalLaw(0, 1)) == 0.0);
    CHECK(mallows_normal_closed_form(NormalLaw(1, 1), NormalLaw(0, 1)) == doctest::Approx(1.0));
    CHECK(mallows_normal_closed_form(NormalLaw(1, 2), NormalLaw(0, 1)) ==
          doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("mallows distance to the normal law") {
    // single atom at 0: d_2^2 = E Z^2 = 1
    const auto atom = SortedSample::from_sorted({0.0});
    CHECK(mallows_to_normal(atom, NormalLaw(), 2.0) == doctest::Approx(1.0).epsilon(1e-9));
    // and d_1 = E|Z|
    CHECK(mallows_to_normal(atom, NormalLaw(), 1.0) ==
          doctest::Approx(0.7978845608028654).epsilon(1e-9));

    // closed-form r = 1, 2 agree with the independent midpoint quadrature
    CounterRng rng(12, 4);
    const auto s = SortedSample::from_unsorted(random_values(rng, 23, -2.5, 2.5));
    const NormalLaw law(0.3, 1.7);
    for (double r : {1.0, 2.0}) {
        const double closed = mallows_to_normal(s, law, r);
        const double quad = midpoint_quadrature_to_normal(s, law, r);
        CHECK(closed == doctest::Approx(quad).epsilon(5e-4));
    }
    // general-r adaptive route agrees with quadrature and nests r = 2
    const double d3 = mallows_to_normal(s, law, 3.0);
    CHECK(d3 == doctest::Approx(midpoint_quadrature_to_normal(s, law, 3.0)).epsilon(5e-4));
    CHECK(mallows_to_normal(s, law, 2.0 + 1e-12) ==
          doctest::Approx(mallows_to_normal(s, law, 2.0)).epsilon(1e-6));
}

TEST_CASE("midpoint quantile grid discretization error shrinks") {
    auto grid_sample = [](int m) {
        std::vector<double> g(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i)
            g[static_cast<std::size_t>(i)] = normal_quantile((i + 0.5) / static_cast<double>(m));
        return SortedSample::from_sorted(std::move(g));
    };
    const double d1_1e4 = mallows_to_normal(grid_sample(10000), NormalLaw(), 1.0);
    const double d1_1e5 = mallows_to_normal(grid_sample(100000), NormalLaw(), 1.0);
    CHECK(d1_1e4 < 0.01);
    CHECK(d1_1e5 < d1_1e4);
}

TEST_CASE("large iid normal sample sits near the m^{-1/2} floor") {
    CounterRng rng(31337, 0);
    std::vector<double> draws(1000000);
    for (auto& x : draws) x = normal_quantile(rng.next_open01());
    const auto s = SortedSample::from_unsorted(std::move(draws));
    CHECK(mallows_to_normal(s, NormalLaw(), 2.0) < 0.01);
}

TEST_CASE("kolmogorov distance to the normal law") {
    const auto atom = SortedSample::from_sorted({0.0});
    CHECK(kolmogorov_to_normal(atom, NormalLaw()) == doctest::Approx(0.5).epsilon(1e-12));
    const auto far = SortedSample::from_sorted({-10.0, 10.0});
    CHECK(kolmogorov_to_normal(far, NormalLaw()) ==
          doctest::Approx(0.5 - normal_cdf(-10.0)).epsilon(1e-12));

    // 1e5 standard normal draws: DKW-scale fluctuation, cross-checked with a
    // separately coded sup scan over an x grid
    CounterRng rng(999, 9);
    std::vector<double> draws(100000);
    for (auto& x : draws) x = normal_quantile(rng.next_open01());
    const auto s = SortedSample::from_unsorted(std::move(draws));
    const double dk = kolmogorov_to_normal(s, NormalLaw());
    CHECK(dk < 0.01);
    // independent route: binary-searched cdf at each atom and just below it
    double sup = 0.0;
    for (double x : s.values()) {
        sup = std::max(sup, std::abs(s.cdf(x) - normal_cdf(x)));
        const double left = std::nextafter(x, -1e300);
        sup = std::max(sup, std::abs(s.cdf(left) - normal_cdf(left)));
    }
    CHECK(dk == doctest::Approx(sup).epsilon(1e-9));
}

TEST_CASE("kolmogorov bound from d_1 holds on random samples") {
    CounterRng rng(404, 4);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t m = 5 + rng.next_below(200);
        std::vector<double> v(m);
        for (auto& x : v) x = rng.next_uniform(-2.0, 2.0);
        const auto s = SortedSample::from_unsorted(std::move(v));
        const double dk = kolmogorov_to_normal(s, NormalLaw());
        const double d1 = mallows_to_normal(s, NormalLaw(), 1.0);
        CHECK(dk <= kolmogorov_bound_from_d1(d1) + 1e-12);
    }
}
