#include "assoc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <thread>

namespace mlab {

namespace {

// chi truncation: J_max = last lag before 5 consecutive |c(j)| < SE(c(j))
int chi_truncation_lag(const std::vector<double>& c, const std::vector<double>& se) {
    const int lag_max = static_cast<int>(c.size()) - 1;
    int consecutive = 0;
    for (int j = 1; j <= lag_max; ++j) {
        if (std::abs(c[static_cast<std::size_t>(j)]) < se[static_cast<std::size_t>(j)]) {
            if (++consecutive == 5) return j - 4;
        } else {
            consecutive = 0;
        }
    }
    return lag_max;
}

// Shared assembly for stationary summaries given per-replica lag means.
CovarianceSummary build_stationary_summary(int window, int lag_max, int replicas,
                                           std::vector<double> replica_lag) {
    CovarianceSummary cov;
    cov.stationary = true;
    cov.window = window;
    cov.lag_max = lag_max;
    cov.replica_count = replicas;
    const std::size_t cols = static_cast<std::size_t>(lag_max) + 1;
    cov.lag_cov.assign(cols, 0.0);
    cov.lag_cov_se.assign(cols, 0.0);

    std::vector<double> col(static_cast<std::size_t>(replicas));
    for (std::size_t j = 0; j < cols; ++j) {
        for (int r = 0; r < replicas; ++r)
            col[static_cast<std::size_t>(r)] = replica_lag[static_cast<std::size_t>(r) * cols + j];
        const auto mv = mean_var(col);
        cov.lag_cov[j] = mv.mean;
        cov.lag_cov_se[j] = std::sqrt(mv.var / static_cast<double>(replicas));
        if (mv.mean < -3.0 * cov.lag_cov_se[j]) cov.negative_cov_flag = true;
    }

    cov.chi_truncation_lag = chi_truncation_lag(cov.lag_cov, cov.lag_cov_se);
    for (int r = 0; r < replicas; ++r) {
        double chi = replica_lag[static_cast<std::size_t>(r) * cols];
        for (int j = 1; j <= cov.chi_truncation_lag; ++j)
            chi += 2.0 * replica_lag[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(j)];
        col[static_cast<std::size_t>(r)] = chi;
    }
    const auto chi_mv = mean_var(col);
    cov.chi_hat = chi_mv.mean;
    cov.chi_se = std::sqrt(chi_mv.var / static_cast<double>(replicas));
    for (int j = cov.chi_truncation_lag + 1; j <= lag_max; ++j)
        cov.chi_truncation_bias += 2.0 * std::abs(cov.lag_cov[static_cast<std::size_t>(j)]);

    cov.replica_lag = std::move(replica_lag);
    return cov;
}

} // namespace

CovarianceSummary estimate_covariances(const ReplicaEnsemble& ens, bool stationary,
                                       int lag_max) {
    const int R = ens.replicas();
    const int N = ens.window();
    if (R < 2) throw std::invalid_argument("estimate_covariances: need >= 2 replicas");
    if (lag_max < 0 || lag_max >= N)
        throw std::invalid_argument("estimate_covariances: lag_max must be in [0, window)");

    // pooled mean and per-site variances across replicas
    double grand = 0.0;
    for (int r = 0; r < R; ++r)
        for (double x : ens.row(r)) grand += x;
    grand /= static_cast<double>(R) * static_cast<double>(N);

    std::vector<double> site_mean(static_cast<std::size_t>(N), 0.0);
    for (int r = 0; r < R; ++r) {
        const auto row = ens.row(r);
        for (int k = 0; k < N; ++k) site_mean[static_cast<std::size_t>(k)] += row[static_cast<std::size_t>(k)];
    }
    for (auto& m : site_mean) m /= static_cast<double>(R);

    std::vector<double> site_var(static_cast<std::size_t>(N), 0.0),
        site_var_se(static_cast<std::size_t>(N), 0.0);
    {
        std::vector<double> sq(static_cast<std::size_t>(R));
        for (int k = 0; k < N; ++k) {
            for (int r = 0; r < R; ++r) {
                const double d = ens.at(r, k) - site_mean[static_cast<std::size_t>(k)];
                sq[static_cast<std::size_t>(r)] = d * d;
            }
            const auto mv = mean_var(sq);
            site_var[static_cast<std::size_t>(k)] =
                mv.mean * static_cast<double>(R) / static_cast<double>(R - 1);
            site_var_se[static_cast<std::size_t>(k)] = std::sqrt(mv.var / static_cast<double>(R));
        }
    }

    CovarianceSummary cov;
    if (stationary) {
        const std::size_t cols = static_cast<std::size_t>(lag_max) + 1;
        std::vector<double> replica_lag(static_cast<std::size_t>(R) * cols, 0.0);
        for (int r = 0; r < R; ++r) {
            const auto row = ens.row(r);
            for (int j = 0; j <= lag_max; ++j) {
                double s = 0.0;
                for (int k = 0; k + j < N; ++k)
                    s += (row[static_cast<std::size_t>(k)] - grand) *
                         (row[static_cast<std::size_t>(k + j)] - grand);
                replica_lag[static_cast<std::size_t>(r) * cols + static_cast<std::size_t>(j)] =
                    s / static_cast<double>(N - j);
            }
        }
        cov = build_stationary_summary(N, lag_max, R, std::move(replica_lag));
    } else {
        cov.stationary = false;
        cov.window = N;
        cov.lag_max = lag_max;
        cov.replica_count = R;
        const std::size_t cols = static_cast<std::size_t>(lag_max) + 1;
        cov.site_cov.assign(static_cast<std::size_t>(N) * cols, 0.0);
        cov.site_cov_se.assign(static_cast<std::size_t>(N) * cols, 0.0);
        std::vector<double> prod(static_cast<std::size_t>(R));
        for (int k = 0; k < N; ++k) {
            for (int j = 0; j <= lag_max && k + j < N; ++j) {
                for (int r = 0; r < R; ++r)
                    prod[static_cast<std::size_t>(r)] =
                        (ens.at(r, k) - site_mean[static_cast<std::size_t>(k)]) *
                        (ens.at(r, k + j) - site_mean[static_cast<std::size_t>(k + j)]);
                const auto mv = mean_var(prod);
                const double c = mv.mean * static_cast<double>(R) / static_cast<double>(R - 1);
                const double se = std::sqrt(mv.var / static_cast<double>(R));
                cov.site_cov[static_cast<std::size_t>(k) * cols + static_cast<std::size_t>(j)] = c;
                cov.site_cov_se[static_cast<std::size_t>(k) * cols + static_cast<std::size_t>(j)] = se;
                if (c < -3.0 * se) cov.negative_cov_flag = true;
            }
        }
        // susceptibility: largest full-coverage row sum sum_{|j|<=lag_max} c(k, k+j)
        double best = 0.0, best_se = 0.0;
        bool first = true;
        for (int k = lag_max; k + lag_max < N; ++k) {
            double s = cov.site_cov[static_cast<std::size_t>(k) * cols];
            double v = cov.site_cov_se[static_cast<std::size_t>(k) * cols] *
                       cov.site_cov_se[static_cast<std::size_t>(k) * cols];
            for (int j = 1; j <= lag_max; ++j) {
                s += cov.site_at(k, j);
                v += cov.site_se_at(k, j) * cov.site_se_at(k, j);
                // left side: cov(X_{k-j}, X_k) stored at row k-j, lag j
                s += cov.site_at(k - j, j);
                v += cov.site_se_at(k - j, j) * cov.site_se_at(k - j, j);
            }
            if (first || s > best) {
                best = s;
                best_se = std::sqrt(v);
                first = false;
            }
        }
        cov.chi_hat = best;
        cov.chi_se = best_se;
        cov.chi_truncation_lag = lag_max;
    }

    cov.site_var = std::move(site_var);
    cov.site_var_se = std::move(site_var_se);
    const double top_var = *std::max_element(cov.site_var.begin(), cov.site_var.end());
    for (double v : cov.site_var)
        if (v <= 1e-12 * std::max(top_var, 1.0)) cov.zero_variance_flag = true;
    return cov;
}

CoxGrimmettProfile cox_grimmett_profile(const CovarianceSummary& cov, int n_max, int fit_n_lo) {
    CoxGrimmettProfile prof;
    prof.truncation_lag = cov.lag_max;
    if (n_max > cov.lag_max) {
        n_max = cov.lag_max;
        prof.truncation_bias_flag = true;
    }
    if (cov.lag_max < 2 * n_max) prof.truncation_bias_flag = true;
    prof.n_max = n_max;
    const std::size_t cols = static_cast<std::size_t>(cov.lag_max) + 1;

    if (cov.stationary) {
        // jackknife the tail sums over replicas
        const int R = cov.replica_count;
        std::vector<double> col(static_cast<std::size_t>(R));
        for (int n = 0; n <= n_max; ++n) {
            for (int r = 0; r < R; ++r) {
                const double* lag = cov.replica_lag.data() + static_cast<std::size_t>(r) * cols;
                double u = 0.0;
                if (n == 0) u = lag[0];
                for (int j = std::max(n, 1); j <= cov.lag_max; ++j) u += 2.0 * lag[j];
                col[static_cast<std::size_t>(r)] = u;
            }
            const auto mv = mean_var(col);
            prof.u_hat.push_back(mv.mean);
            prof.u_se.push_back(std::sqrt(mv.var / static_cast<double>(R)));
            prof.envelope.push_back(mv.mean + 3.0 * prof.u_se.back());
        }
    } else {
        // per-site tail sums; envelope is the worst site plus 3 SE
        const int N = cov.window;
        for (int n = 0; n <= n_max; ++n) {
            double worst = 0.0, worst_se = 0.0, mean_u = 0.0, mean_var_acc = 0.0;
            int counted = 0;
            for (int k = cov.lag_max; k + cov.lag_max < N; ++k) {
                double u = 0.0, v = 0.0;
                if (n == 0) {
                    u += cov.site_at(k, 0);
                    v += cov.site_se_at(k, 0) * cov.site_se_at(k, 0);
                }
                for (int j = std::max(n, 1); j <= cov.lag_max; ++j) {
                    u += cov.site_at(k, j);
                    v += cov.site_se_at(k, j) * cov.site_se_at(k, j);
                    u += cov.site_at(k - j, j);
                    v += cov.site_se_at(k - j, j) * cov.site_se_at(k - j, j);
                }
                if (counted == 0 || u > worst) {
                    worst = u;
                    worst_se = std::sqrt(v);
                }
                mean_u += u;
                mean_var_acc += v;
                ++counted;
            }
            mean_u /= std::max(counted, 1);
            prof.u_hat.push_back(mean_u);
            prof.u_se.push_back(std::sqrt(mean_var_acc) / std::max(counted, 1));
            prof.envelope.push_back(worst + 3.0 * worst_se);
        }
    }

    // log-log decay slope over the geometric grid
    std::vector<double> xs, ys, yv;
    for (int n = std::max(fit_n_lo, 1); n <= n_max; n *= 2) {
        const double u = prof.u_hat[static_cast<std::size_t>(n)];
        const double se = prof.u_se[static_cast<std::size_t>(n)];
        if (u > 0.0) {
            xs.push_back(std::log(static_cast<double>(n)));
            ys.push_back(std::log(u));
            yv.push_back(u > 0 ? (se / u) * (se / u) : 0.0);
            prof.fit_ns.push_back(static_cast<double>(n));
        }
    }
    if (xs.size() >= 2) {
        const auto fit = ols_fit(xs, ys, yv);
        prof.fitted_slope = fit.slope;
        prof.fitted_slope_se = fit.slope_se;
    }
    return prof;
}

// --- association test -------------------------------------------------------

namespace {

// coordinatewise nondecreasing test function: sum of staircases plus an
// optional clipped nonnegative-weight linear part
struct MonotoneFn {
    struct Stair {
        int coord;
        std::vector<double> thresholds;
        std::vector<double> weights; // nonnegative
    };
    std::vector<Stair> stairs;
    std::vector<int> linear_coords;
    std::vector<double> linear_weights;
    double clip_lo = 0.0, clip_hi = 0.0;
    bool has_linear = false;

    double eval(std::span<const double> x) const {
        double v = 0.0;
        for (const auto& st : stairs)
            for (std::size_t s = 0; s < st.thresholds.size(); ++s)
                if (x[static_cast<std::size_t>(st.coord)] > st.thresholds[s]) v += st.weights[s];
        if (has_linear) {
            double t = 0.0;
            for (std::size_t i = 0; i < linear_coords.size(); ++i)
                t += linear_weights[i] * x[static_cast<std::size_t>(linear_coords[i])];
            v += std::clamp(t, clip_lo, clip_hi);
        }
        return v;
    }
};

double column_quantile(const ReplicaEnsemble& ens, int coord, double u) {
    std::vector<double> col(static_cast<std::size_t>(ens.replicas()));
    for (int r = 0; r < ens.replicas(); ++r) col[static_cast<std::size_t>(r)] = ens.at(r, coord);
    std::sort(col.begin(), col.end());
    const auto idx = static_cast<std::size_t>(u * static_cast<double>(col.size() - 1));
    return col[idx];
}

MonotoneFn random_monotone(const ReplicaEnsemble& ens, CounterRng& rng,
                           const std::vector<int>& coords) {
    MonotoneFn f;
    for (int c : coords) {
        MonotoneFn::Stair st;
        st.coord = c;
        const int steps = 1 + static_cast<int>(rng.next_below(4));
        for (int s = 0; s < steps; ++s) {
            st.thresholds.push_back(column_quantile(ens, c, rng.next_uniform(0.1, 0.9)));
            st.weights.push_back(rng.next_uniform(0.2, 1.0));
        }
        f.stairs.push_back(std::move(st));
    }
    if (rng.next_u64() & 1u) {
        f.has_linear = true;
        f.linear_coords = coords;
        for (std::size_t i = 0; i < coords.size(); ++i)
            f.linear_weights.push_back(rng.next_uniform(0.1, 1.0));
        f.clip_lo = -rng.next_uniform(0.5, 2.0);
        f.clip_hi = rng.next_uniform(0.5, 2.0);
    }
    return f;
}

AssociationTrial studentized_cov(std::span<const double> fs, std::span<const double> gs) {
    const std::size_t R = fs.size();
    double mf = 0.0, mg = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
        mf += fs[r];
        mg += gs[r];
    }
    mf /= static_cast<double>(R);
    mg /= static_cast<double>(R);
    std::vector<double> prod(R);
    for (std::size_t r = 0; r < R; ++r) prod[r] = (fs[r] - mf) * (gs[r] - mg);
    const auto mv = mean_var(prod);
    AssociationTrial t;
    t.cov = mv.mean * static_cast<double>(R) / static_cast<double>(R - 1);
    t.se = std::sqrt(mv.var / static_cast<double>(R));
    t.studentized = t.se > 0.0 ? t.cov / t.se : 0.0;
    return t;
}

} // namespace

AssociationReport association_test(const ReplicaEnsemble& ens, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("association_test: trials must be >= 1");
    const int R = ens.replicas();
    const int N = ens.window();
    CounterRng rng(seed, 0xa550c1a7e5ULL);
    AssociationReport report;

    std::vector<double> fs(static_cast<std::size_t>(R)), gs(static_cast<std::size_t>(R));

    // deterministic adjacent coordinate pairs (identity maps are monotone);
    // these give the test its power against sign flips at zero cost
    std::vector<int> anchors;
    for (int a : {0, N / 4, N / 2, (3 * N) / 4})
        if (a + 1 < N && (anchors.empty() || a > anchors.back())) anchors.push_back(a);
    for (int a : anchors) {
        for (int r = 0; r < R; ++r) {
            fs[static_cast<std::size_t>(r)] = ens.at(r, a);
            gs[static_cast<std::size_t>(r)] = ens.at(r, a + 1);
        }
        auto t = studentized_cov(fs, gs);
        t.deterministic_pair = true;
        report.trials.push_back(t);
    }

    for (int trial = 0; trial < trials; ++trial) {
        // shared coordinates guarantee overlap; extras are free
        const int shared = 1 + static_cast<int>(rng.next_below(2));
        const int extra_f = static_cast<int>(rng.next_below(3));
        const int extra_g = static_cast<int>(rng.next_below(3));
        std::vector<int> coords_f, coords_g;
        for (int s = 0; s < shared; ++s) {
            const int c = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(N)));
            coords_f.push_back(c);
            coords_g.push_back(c);
        }
        for (int s = 0; s < extra_f; ++s)
            coords_f.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(N))));
        for (int s = 0; s < extra_g; ++s)
            coords_g.push_back(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(N))));

        const MonotoneFn f = random_monotone(ens, rng, coords_f);
        const MonotoneFn g = random_monotone(ens, rng, coords_g);
        for (int r = 0; r < R; ++r) {
            fs[static_cast<std::size_t>(r)] = f.eval(ens.row(r));
            gs[static_cast<std::size_t>(r)] = g.eval(ens.row(r));
        }
        report.trials.push_back(studentized_cov(fs, gs));
    }

    report.min_studentized = report.trials.front().studentized;
    for (const auto& t : report.trials)
        report.min_studentized = std::min(report.min_studentized, t.studentized);
    report.pass = report.min_studentized >= -3.0;
    return report;
}

CfGapResult cf_gap_check(const ReplicaEnsemble& ens, std::span<const double> freqs) {
    const int R = ens.replicas();
    const int n = static_cast<int>(freqs.size());
    if (n < 1 || n > ens.window())
        throw std::invalid_argument("cf_gap_check: need 1 <= #freqs <= window");

    auto margin_on = [&](std::size_t skip_lo, std::size_t skip_hi) {
        std::complex<double> joint(0.0, 0.0);
        std::vector<std::complex<double>> marg(static_cast<std::size_t>(n), {0.0, 0.0});
        std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
        double count = 0.0;
        for (int r = 0; r < R; ++r) {
            if (static_cast<std::size_t>(r) >= skip_lo && static_cast<std::size_t>(r) < skip_hi)
                continue;
            count += 1.0;
            double t = 0.0;
            for (int j = 0; j < n; ++j) {
                const double x = ens.at(r, j);
                t += freqs[static_cast<std::size_t>(j)] * x;
                marg[static_cast<std::size_t>(j)] +=
                    std::complex<double>(std::cos(freqs[static_cast<std::size_t>(j)] * x),
                                         std::sin(freqs[static_cast<std::size_t>(j)] * x));
                mean[static_cast<std::size_t>(j)] += x;
            }
            joint += std::complex<double>(std::cos(t), std::sin(t));
        }
        joint /= count;
        std::complex<double> prod(1.0, 0.0);
        for (auto& m : marg) {
            m /= count;
            prod *= m;
        }
        for (auto& m : mean) m /= count;
        // covariance part
        double rhs = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                double c = 0.0;
                for (int r = 0; r < R; ++r) {
                    if (static_cast<std::size_t>(r) >= skip_lo && static_cast<std::size_t>(r) < skip_hi)
                        continue;
                    c += (ens.at(r, j) - mean[static_cast<std::size_t>(j)]) *
                         (ens.at(r, k) - mean[static_cast<std::size_t>(k)]);
                }
                c /= (count - 1.0);
                rhs += std::abs(freqs[static_cast<std::size_t>(j)] *
                                freqs[static_cast<std::size_t>(k)]) *
                       c;
            }
        const double lhs = std::abs(joint - prod);
        return rhs - lhs;
    };

    CfGapResult out;
    const auto jk = jackknife_stat(static_cast<std::size_t>(R), 32, margin_on);
    const double margin = jk.value;
    out.margin_se = jk.se;

    // recover lhs and rhs individually for the report
    {
        std::complex<double> joint(0.0, 0.0);
        std::vector<std::complex<double>> marg(static_cast<std::size_t>(n), {0.0, 0.0});
        for (int r = 0; r < R; ++r) {
            double t = 0.0;
            for (int j = 0; j < n; ++j) {
                const double x = ens.at(r, j);
                t += freqs[static_cast<std::size_t>(j)] * x;
                marg[static_cast<std::size_t>(j)] +=
                    std::complex<double>(std::cos(freqs[static_cast<std::size_t>(j)] * x),
                                         std::sin(freqs[static_cast<std::size_t>(j)] * x));
            }
            joint += std::complex<double>(std::cos(t), std::sin(t));
        }
        joint /= static_cast<double>(R);
        std::complex<double> prod(1.0, 0.0);
        for (auto& m : marg) prod *= m / static_cast<double>(R);
        out.lhs = std::abs(joint - prod);
        out.rhs = margin + out.lhs;
    }
    out.pass = out.lhs <= out.rhs + 3.0 * out.margin_se;
    return out;
}

// --- Rao-Blackwell covariance runs ------------------------------------------

CovarianceSummary rb_lag_covariances(const RbRunParams& p) {
    if (p.sample.space.kind != SpinSpace::Kind::PlusMinus)
        throw std::invalid_argument("rb_lag_covariances: +-1 spins only");
    if (p.windows < 1 || p.spacing < 1)
        throw std::invalid_argument("rb_lag_covariances: windows and spacing must be >= 1");
    const SampleLayout lay = plan_layout(p.sample);
    const int N = p.sample.window;
    const int lag_max = std::min(p.lag_max, N - 1);
    const int R = p.sample.replicas;
    const std::size_t cols = static_cast<std::size_t>(lag_max) + 1;

    std::vector<double> replica_lag(static_cast<std::size_t>(R) * cols, 0.0);
    std::vector<double> replica_mean(static_cast<std::size_t>(R), 0.0);

    auto run_range = [&](int lo, int hi) {
        std::vector<double> tanh_h(static_cast<std::size_t>(N));
        for (int rep = lo; rep < hi; ++rep) {
            CounterRng rng(p.sample.seed, static_cast<std::uint64_t>(rep));
            SpinChain chain(p.sample.coupling, p.sample.space, lay.volume, p.sample.boundary,
                            lay.radius);
            chain.randomize(rng);
            for (int s = 0; s < p.sample.burn_in; ++s) chain.sweep(rng);
            double* acc = replica_lag.data() + static_cast<std::size_t>(rep) * cols;
            double mean_acc = 0.0;
            for (int w = 0; w < p.windows; ++w) {
                for (int s = 0; s < p.spacing; ++s) chain.sweep(rng);
                const auto x = chain.spins().subspan(static_cast<std::size_t>(lay.offset),
                                                     static_cast<std::size_t>(N));
                const auto h = chain.local_fields().subspan(static_cast<std::size_t>(lay.offset),
                                                            static_cast<std::size_t>(N));
                for (int k = 0; k < N; ++k) {
                    tanh_h[static_cast<std::size_t>(k)] = std::tanh(h[static_cast<std::size_t>(k)]);
                    mean_acc += x[static_cast<std::size_t>(k)];
                }
                acc[0] += static_cast<double>(N); // +-1 spins: sum of squares
                for (int j = 1; j <= lag_max; ++j) {
                    double s = 0.0;
                    for (int k = 0; k + j < N; ++k)
                        s += x[static_cast<std::size_t>(k)] * tanh_h[static_cast<std::size_t>(k + j)];
                    acc[static_cast<std::size_t>(j)] += s;
                }
            }
            const double M = static_cast<double>(p.windows);
            acc[0] /= M * static_cast<double>(N);
            for (int j = 1; j <= lag_max; ++j)
                acc[static_cast<std::size_t>(j)] /= M * static_cast<double>(N - j);
            replica_mean[static_cast<std::size_t>(rep)] =
                mean_acc / (M * static_cast<double>(N));
        }
    };

    int workers = std::max(1, p.sample.threads);
    workers = std::min(workers, R);
    if (workers == 1) {
        run_range(0, R);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            const int lo = static_cast<int>(static_cast<long long>(w) * R / workers);
            const int hi = static_cast<int>(static_cast<long long>(w + 1) * R / workers);
            pool.emplace_back(run_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }

    // center with the pooled mean: c(j) = E[X_0 X_j] - mu^2
    double mu = 0.0;
    for (double m : replica_mean) mu += m;
    mu /= static_cast<double>(R);
    for (int r = 0; r < R; ++r)
        for (std::size_t j = 0; j < cols; ++j)
            replica_lag[static_cast<std::size_t>(r) * cols + j] -= mu * mu;

    auto cov = build_stationary_summary(N, lag_max, R, std::move(replica_lag));
    cov.site_var.assign(1, cov.lag_cov.empty() ? 0.0 : cov.lag_cov[0]);
    cov.site_var_se.assign(1, cov.lag_cov_se.empty() ? 0.0 : cov.lag_cov_se[0]);
    return cov;
}

} // namespace mlab
