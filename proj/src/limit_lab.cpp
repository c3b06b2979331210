#include "limit_lab.hpp"

#include "transport.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

void PartialSumSpec::validate(int window) const {
    if (lengths.empty()) throw std::invalid_argument("PartialSumSpec: empty length schedule");
    if (r_values.empty()) throw std::invalid_argument("PartialSumSpec: empty r_values");
    for (double r : r_values)
        if (!(r > 0.0)) throw std::invalid_argument("PartialSumSpec: r values must be > 0");
    int prev = 0;
    for (int n : lengths) {
        if (n < 1 || n <= prev)
            throw std::invalid_argument("PartialSumSpec: lengths must be ascending and >= 1");
        prev = n;
    }
    if (offset < 0 || offset + lengths.back() > window)
        throw std::invalid_argument("PartialSumSpec: window does not cover offset + max n");
}

StabilizedSums stabilized_sums(const ReplicaEnsemble& ens, const PartialSumSpec& spec) {
    spec.validate(ens.window());
    const int R = ens.replicas();
    if (R < 4) throw std::invalid_argument("stabilized_sums: need >= 4 replicas");

    const bool needs_estimation = spec.centering == Centering::EmpiricalMean ||
                                  spec.scaling == Scaling::EmpiricalSigma;
    const int est_count = needs_estimation ? R / 2 : 0;
    const int eval_begin = est_count;

    StabilizedSums out;
    out.lengths = spec.lengths;
    out.estimation_replicas = est_count;
    out.evaluation_replicas = R - eval_begin;

    // per-site means over the estimation half (or the known mean)
    const int max_n = spec.lengths.back();
    std::vector<double> site_mean(static_cast<std::size_t>(max_n), spec.known_mean);
    if (spec.centering == Centering::EmpiricalMean) {
        std::fill(site_mean.begin(), site_mean.end(), 0.0);
        for (int r = 0; r < est_count; ++r) {
            const auto row = ens.row(r);
            for (int j = 0; j < max_n; ++j)
                site_mean[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(spec.offset + j)];
        }
        for (auto& m : site_mean) m /= std::max(est_count, 1);
        double g = 0.0;
        for (double m : site_mean) g += m;
        out.mu_hat = g / static_cast<double>(max_n);
    } else {
        out.mu_hat = spec.known_mean;
    }

    // stationary chi plug-in from the estimation half
    double sigma2_per_site = spec.theoretical_sigma * spec.theoretical_sigma;
    if (spec.scaling == Scaling::EmpiricalSigma && spec.mode == AnalysisMode::Stationary) {
        ReplicaEnsemble est(est_count, ens.window());
        for (int r = 0; r < est_count; ++r) {
            auto dst = est.mutable_row(r);
            const auto src = ens.row(r);
            std::copy(src.begin(), src.end(), dst.begin());
        }
        const auto cov = estimate_covariances(est, true,
                                              std::min(spec.cov_lag_max, ens.window() - 1));
        if (cov.zero_variance_flag || !(cov.chi_hat > 0.0))
            throw ModelGuardError("stabilized_sums: susceptibility estimate not positive");
        out.chi_hat = cov.chi_hat;
        sigma2_per_site = cov.chi_hat;
    }

    for (std::size_t idx = 0; idx < spec.lengths.size(); ++idx) {
        const int n = spec.lengths[idx];
        double center = 0.0;
        for (int j = 0; j < n; ++j) center += site_mean[static_cast<std::size_t>(j)];

        double scale;
        if (spec.scaling == Scaling::EmpiricalSigma && spec.mode == AnalysisMode::NonStationary) {
            // replica sd of S_{[k,k+n)} over the estimation half
            std::vector<double> s(static_cast<std::size_t>(est_count));
            for (int r = 0; r < est_count; ++r) {
                const auto row = ens.row(r);
                double acc = 0.0;
                for (int j = 0; j < n; ++j) acc += row[static_cast<std::size_t>(spec.offset + j)];
                s[static_cast<std::size_t>(r)] = acc;
            }
            const auto mv = mean_var(s);
            if (!(mv.var > 0.0))
                throw ModelGuardError("stabilized_sums: zero window-sum variance");
            scale = std::sqrt(mv.var);
        } else {
            if (!(sigma2_per_site > 0.0))
                throw ModelGuardError("stabilized_sums: zero variance scale");
            scale = std::sqrt(static_cast<double>(n) * sigma2_per_site);
        }

        std::vector<double> v(static_cast<std::size_t>(R - eval_begin));
        for (int r = eval_begin; r < R; ++r) {
            const auto row = ens.row(r);
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += row[static_cast<std::size_t>(spec.offset + j)];
            v[static_cast<std::size_t>(r - eval_begin)] = (acc - center) / scale;
        }
        const auto mv = mean_var(v);
        out.var_ratio.push_back(mv.var);
        out.center_used.push_back(center);
        out.sigma_used.push_back(scale);
        out.raw.push_back(v);
        out.samples.push_back(SortedSample::from_unsorted(std::move(v)));
    }
    out.r_grid = spec.r_values;
    out.offset = spec.offset;
    return out;
}

// --- block scheme ------------------------------------------------------------

BlockScheme BlockScheme::from_delta(int n, double delta) {
    if (n < 1) throw std::invalid_argument("BlockScheme: n must be >= 1");
    if (!(delta > 0.0 && delta < 0.25))
        throw std::invalid_argument("BlockScheme: delta must lie in (0, 1/4)");
    // snap-to-integer tolerance so exact powers like 1024^0.2 = 4 hold
    const int l = std::max(1, static_cast<int>(std::floor(std::pow(n, delta) + 1e-9)));
    BlockScheme s = from_block_len(n, l);
    s.delta = delta;
    return s;
}

BlockScheme BlockScheme::from_block_len(int n, int block_len) {
    if (n < 1 || block_len < 1 || block_len > n)
        throw std::invalid_argument("BlockScheme: need 1 <= block_len <= n");
    BlockScheme s;
    s.n = n;
    s.block_len = block_len;
    s.blocks = n / block_len;
    s.remainder = n - s.blocks * block_len;
    return s;
}

// --- block accumulator --------------------------------------------------------

BlockAccumulator::BlockAccumulator(BlockScheme scheme, int k, int expected_replicas, int groups)
    : scheme_(scheme), k_(k), groups_(std::max(2, groups)),
      trunc_radius_(std::min(64, scheme.blocks * scheme.block_len)) {
    if (expected_replicas < 2)
        throw std::invalid_argument("BlockAccumulator: need >= 2 replicas");
    replicas_ = expected_replicas;
    if (groups_ > expected_replicas) groups_ = expected_replicas;
    s_n_.assign(static_cast<std::size_t>(replicas_), 0.0);
    s_ml_.assign(static_cast<std::size_t>(replicas_), 0.0);
    t_.assign(static_cast<std::size_t>(replicas_), 0.0);
    s_near_.assign(static_cast<std::size_t>(replicas_), 0.0);
    y_.assign(static_cast<std::size_t>(replicas_) * static_cast<std::size_t>(scheme.blocks), 0.0);
}

void BlockAccumulator::add(int rep, std::span<const double> window) {
    const int n = scheme_.n, l = scheme_.block_len, m = scheme_.blocks;
    if (k_ + n > static_cast<int>(window.size()))
        throw std::invalid_argument("BlockAccumulator: window does not cover [k, k+n)");
    double* yrow = y_.data() + static_cast<std::size_t>(rep) * m;
    double s_ml = 0.0;
    for (int b = 0; b < m; ++b) {
        double acc = 0.0;
        const int base = k_ + b * l;
        for (int j = 0; j < l; ++j) acc += window[static_cast<std::size_t>(base + j)];
        yrow[b] = acc;
        s_ml += acc;
    }
    double t = 0.0;
    for (int j = k_ + m * l; j < k_ + n; ++j) t += window[static_cast<std::size_t>(j)];
    double near = 0.0;
    for (int j = std::max(k_, k_ + m * l - trunc_radius_); j < k_ + m * l; ++j)
        near += window[static_cast<std::size_t>(j)];
    s_n_[static_cast<std::size_t>(rep)] = s_ml + t;
    s_ml_[static_cast<std::size_t>(rep)] = s_ml;
    t_[static_cast<std::size_t>(rep)] = t;
    s_near_[static_cast<std::size_t>(rep)] = near;
    ++consumed_;
}

namespace {

struct VarAcc {
    double n = 0, sx = 0, sxx = 0;
    void add(double x) {
        n += 1;
        sx += x;
        sxx += x * x;
    }
    double var() const { return n > 1 ? (sxx - sx * sx / n) / (n - 1) : 0.0; }
    double mean() const { return n > 0 ? sx / n : 0.0; }
};

struct CovAcc {
    double n = 0, sx = 0, sy = 0, sxy = 0;
    void add(double x, double y) {
        n += 1;
        sx += x;
        sy += y;
        sxy += x * y;
    }
    double cov() const { return n > 1 ? (sxy - sx * sy / n) / (n - 1) : 0.0; }
};

} // namespace

BlockDiagnostics BlockAccumulator::finalize(double min_site_var, double v0_hat) const {
    const int R = consumed_;
    if (R < 2) throw std::invalid_argument("BlockAccumulator: too few replicas consumed");
    const int m = scheme_.blocks;
    const int G = std::min(groups_, R);

    // block means (for exact centered third moments)
    std::vector<double> block_mean(static_cast<std::size_t>(m), 0.0);
    for (int r = 0; r < R; ++r) {
        const double* yrow = y_.data() + static_cast<std::size_t>(r) * m;
        for (int b = 0; b < m; ++b) block_mean[static_cast<std::size_t>(b)] += yrow[b];
    }
    for (auto& bm : block_mean) bm /= static_cast<double>(R);

    struct Stats {
        double var_n, var_ml, var_t, s2, cross, cov_near_t, ratio1, ratio2, third;
    };
    auto eval = [&](std::size_t skip_lo, std::size_t skip_hi) -> Stats {
        VarAcc an, aml, at;
        CovAcc near_t;
        std::vector<VarAcc> ab(static_cast<std::size_t>(m));
        double third = 0.0;
        double third_count = 0.0;
        for (int r = 0; r < R; ++r) {
            if (static_cast<std::size_t>(r) >= skip_lo && static_cast<std::size_t>(r) < skip_hi)
                continue;
            an.add(s_n_[static_cast<std::size_t>(r)]);
            aml.add(s_ml_[static_cast<std::size_t>(r)]);
            at.add(t_[static_cast<std::size_t>(r)]);
            near_t.add(s_near_[static_cast<std::size_t>(r)], t_[static_cast<std::size_t>(r)]);
            const double* yrow = y_.data() + static_cast<std::size_t>(r) * m;
            for (int b = 0; b < m; ++b) {
                ab[static_cast<std::size_t>(b)].add(yrow[b]);
                const double d = std::abs(yrow[b] - block_mean[static_cast<std::size_t>(b)]);
                third += d * d * d;
            }
            third_count += 1.0;
        }
        Stats st{};
        st.var_n = an.var();
        st.var_ml = aml.var();
        st.var_t = at.var();
        st.s2 = 0.0;
        for (const auto& a : ab) st.s2 += a.var();
        st.cross = st.var_ml - st.s2;
        st.cov_near_t = near_t.cov();
        // remainder coupling via the lag-truncated covariance estimator: the
        // plain var(S_n)/var(S_ml) ratio drowns the O(1) remainder signal in
        // window-scale noise
        st.ratio1 = scheme_.remainder == 0
                        ? 1.0
                        : 1.0 + (2.0 * st.cov_near_t + st.var_t) / st.var_ml;
        st.ratio2 = st.var_ml / st.s2;
        st.third = third / std::max(third_count, 1.0) * static_cast<double>(1);
        return st;
    };

    const Stats full = eval(0, 0);

    // grouped jackknife over contiguous replica blocks
    std::vector<Stats> lo(static_cast<std::size_t>(G));
    for (int g = 0; g < G; ++g) {
        const std::size_t a = static_cast<std::size_t>(g) * R / G;
        const std::size_t b = static_cast<std::size_t>(g + 1) * R / G;
        lo[static_cast<std::size_t>(g)] = eval(a, b);
    }
    auto jack_se = [&](auto member) {
        double mean = 0.0;
        for (const auto& s : lo) mean += s.*member;
        mean /= static_cast<double>(G);
        double q = 0.0;
        for (const auto& s : lo) {
            const double d = s.*member - mean;
            q += d * d;
        }
        return std::sqrt((static_cast<double>(G) - 1.0) / static_cast<double>(G) * q);
    };

    BlockDiagnostics d;
    d.scheme = scheme_;
    d.sigma2_window = full.var_n;
    d.sigma2_window_se = jack_se(&Stats::var_n);
    d.sigma2_mblocks = full.var_ml;
    d.sigma2_mblocks_se = jack_se(&Stats::var_ml);
    d.s2_sum = full.s2;
    d.s2_sum_se = jack_se(&Stats::s2);
    d.cross_cov_total = full.cross;
    d.cross_cov_se = jack_se(&Stats::cross);
    d.ratio_window_mblocks = full.ratio1;
    d.ratio_window_mblocks_se = jack_se(&Stats::ratio1);
    d.ratio_mblocks_s2 = full.ratio2;
    d.ratio_mblocks_s2_se = jack_se(&Stats::ratio2);
    d.lower_bound = static_cast<double>(scheme_.n) * min_site_var;
    d.upper_bound = static_cast<double>(scheme_.n) * v0_hat;
    d.block_third_moment_sum = full.third * static_cast<double>(m);
    d.berry_esseen = full.s2 > 0.0
                         ? 6.0 * d.block_third_moment_sum / std::pow(full.s2, 1.5)
                         : 0.0;
    return d;
}

BlockDiagnostics block_diagnostics(const ReplicaEnsemble& ens, const BlockScheme& scheme, int k) {
    if (k < 0 || k + scheme.n > ens.window())
        throw std::invalid_argument("block_diagnostics: window does not cover [k, k+n)");
    BlockAccumulator acc(scheme, k, ens.replicas());
    for (int r = 0; r < ens.replicas(); ++r) acc.add(r, ens.row(r));

    // Hypothesis bounds: n * min site variance <= var(S_n) <= n * v(0)
    const int lag = std::min(64, scheme.n - 1);
    double min_var = 0.0, v0 = 0.0;
    {
        const int R = ens.replicas();
        std::vector<double> mean(static_cast<std::size_t>(scheme.n), 0.0);
        for (int r = 0; r < R; ++r) {
            const auto row = ens.row(r);
            for (int j = 0; j < scheme.n; ++j)
                mean[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(k + j)];
        }
        for (auto& mu : mean) mu /= static_cast<double>(R);
        bool first = true;
        for (int i = 0; i < scheme.n; ++i) {
            double rowsum = 0.0;
            for (int j = std::max(0, i - lag); j < std::min(scheme.n, i + lag + 1); ++j) {
                double c = 0.0;
                for (int r = 0; r < R; ++r)
                    c += (ens.at(r, k + i) - mean[static_cast<std::size_t>(i)]) *
                         (ens.at(r, k + j) - mean[static_cast<std::size_t>(j)]);
                c /= static_cast<double>(R - 1);
                rowsum += c;
                if (i == j) {
                    if (first || c < min_var) min_var = c;
                }
            }
            first = false;
            v0 = std::max(v0, rowsum);
        }
    }
    auto d = acc.finalize(min_var, v0);
    return d;
}

double berry_esseen_bound(std::span<const double> block_third_moments, double s2_sum) {
    if (!(s2_sum > 0.0)) throw std::invalid_argument("berry_esseen_bound: s2 must be > 0");
    double third = 0.0;
    for (double t : block_third_moments) {
        if (t < 0.0) throw std::invalid_argument("berry_esseen_bound: negative third moment");
        third += t;
    }
    return 6.0 * third / std::pow(s2_sum, 1.5);
}

double berry_esseen_coarse_bound(int blocks, int block_len, double c_star, double c_lower) {
    const double m = blocks, l = block_len;
    return 6.0 * m * l * l * l * c_star / std::pow(m * l * c_lower, 1.5);
}

// --- convergence curve ---------------------------------------------------------

ConvergenceReport convergence_curve(const StabilizedSums& sums, const NormalLaw& law,
                                    const std::string& model_label, int k,
                                    std::uint64_t seed, double delta,
                                    const ReplicaEnsemble& ens) {
    ConvergenceReport report;
    const int eval_begin = ens.replicas() - sums.evaluation_replicas;

    const int G = 32;
    for (double rv : sums.r_grid) {
        ConvergenceReport::TrendTrack track;
        track.r = rv;
        report.trends.push_back(track);
    }

    for (std::size_t idx = 0; idx < sums.lengths.size(); ++idx) {
        const int n = sums.lengths[idx];
        const auto& raw = sums.raw[idx];
        const auto& sample = sums.samples[idx];
        const std::size_t m = raw.size();

        const double dk = kolmogorov_to_normal(sample, law);
        const double d1 = mallows_to_normal(sample, law, 1.0);

        // optional block Berry-Esseen bound at this n
        double be = 0.0;
        if (delta > 0.0 && delta < 0.25 && n >= 2) {
            const auto scheme = BlockScheme::from_delta(n, delta);
            BlockAccumulator acc(scheme, sums.offset, sums.evaluation_replicas);
            for (int r = eval_begin; r < ens.replicas(); ++r)
                acc.add(r - eval_begin, ens.row(r));
            be = acc.finalize().berry_esseen;
        }

        for (std::size_t ri = 0; ri < sums.r_grid.size(); ++ri) {
            const double r = sums.r_grid[ri];
            ConvergenceRow row;
            row.model = model_label;
            row.k = k;
            row.n = n;
            row.r = r;
            row.d_k = dk;
            row.d_1 = d1;
            row.replicas = static_cast<int>(m);
            row.seed = seed;
            row.var_ratio = sums.var_ratio[idx];
            row.be_bound = be;
            row.mom_target = normal_abs_moment(r);

            row.d_r = r == 1.0 ? d1 : mallows_to_normal(sample, law, r);
            // moment of |V|^r
            {
                std::vector<double> p(m);
                for (std::size_t i = 0; i < m; ++i) p[i] = std::pow(std::abs(raw[i]), r);
                const auto mv = mean_var(p);
                row.mom_emp = mv.mean;
                row.mom_emp_se = std::sqrt(mv.var / static_cast<double>(m));
            }
            // grouped jackknife for d_r (and the moment gap trend track)
            std::vector<double> d_lo, gap_lo;
            {
                const int groups = std::min<std::size_t>(G, m);
                for (int g = 0; g < groups; ++g) {
                    const std::size_t a = static_cast<std::size_t>(g) * m / groups;
                    const std::size_t b = static_cast<std::size_t>(g + 1) * m / groups;
                    std::vector<double> kept;
                    kept.reserve(m);
                    double mom = 0.0;
                    for (std::size_t i = 0; i < m; ++i) {
                        if (i >= a && i < b) continue;
                        kept.push_back(raw[i]);
                        mom += std::pow(std::abs(raw[i]), r);
                    }
                    mom /= static_cast<double>(kept.size());
                    const auto sub = SortedSample::from_unsorted(std::move(kept));
                    d_lo.push_back(mallows_to_normal(sub, law, r));
                    gap_lo.push_back(std::abs(mom - row.mom_target));
                }
                double mean = 0.0;
                for (double v : d_lo) mean += v;
                mean /= static_cast<double>(d_lo.size());
                double q = 0.0;
                for (double v : d_lo) q += (v - mean) * (v - mean);
                const double Gd = static_cast<double>(d_lo.size());
                row.d_r_se = std::sqrt((Gd - 1.0) / Gd * q);
            }
            row.kolmogorov_bound_ok = row.d_k <= kolmogorov_bound_from_d1(row.d_1);
            if (!row.kolmogorov_bound_ok) report.all_kolmogorov_bounds_ok = false;

            auto& track = report.trends[ri];
            track.d_r.push_back(row.d_r);
            track.d_r_leave_out.push_back(std::move(d_lo));
            track.mom_gap.push_back(std::abs(row.mom_emp - row.mom_target));
            track.mom_gap_leave_out.push_back(std::move(gap_lo));

            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

BirkelTable birkel_moment_check(const ReplicaEnsemble& ens, std::span<const int> lengths,
                                double r, double mu, double r_star) {
    if (!(r > 2.0)) throw std::invalid_argument("birkel_moment_check: needs r > 2");
    BirkelTable table;
    table.r = r;
    if (r_star > r)
        table.theta_requirement = r_star * (r - 2.0) / (2.0 * (r_star - r));

    const int R = ens.replicas();
    const int N = ens.window();
    for (int n : lengths) {
        if (n > N) throw std::invalid_argument("birkel_moment_check: n exceeds window");
        const int kspan = N - n;
        const int step = std::max(1, kspan / 8);
        BirkelRow best;
        best.n = n;
        for (int k = 0; k <= kspan; k += step) {
            std::vector<double> p(static_cast<std::size_t>(R));
            for (int rep = 0; rep < R; ++rep) {
                const auto row = ens.row(rep);
                double s = 0.0;
                for (int j = 0; j < n; ++j) s += row[static_cast<std::size_t>(k + j)];
                p[static_cast<std::size_t>(rep)] =
                    std::pow(std::abs(s - mu * static_cast<double>(n)), r);
            }
            const auto mv = mean_var(p);
            const double ratio = mv.mean / std::pow(static_cast<double>(n), 0.5 * r);
            if (ratio > best.ratio) {
                best.ratio = ratio;
                best.se = std::sqrt(mv.var / static_cast<double>(R)) /
                          std::pow(static_cast<double>(n), 0.5 * r);
            }
        }
        table.rows.push_back(best);
    }
    // bounded: not monotonically increasing beyond joint noise
    if (table.rows.size() >= 2) {
        bool all_up = true;
        for (std::size_t i = 0; i + 1 < table.rows.size(); ++i)
            if (table.rows[i + 1].ratio <= table.rows[i].ratio) all_up = false;
        const auto& a = table.rows.front();
        const auto& b = table.rows.back();
        const double joint = std::sqrt(a.se * a.se + b.se * b.se);
        if (all_up && b.ratio - a.ratio > 3.0 * joint) table.bounded = false;
    }
    return table;
}

} // namespace mlab
