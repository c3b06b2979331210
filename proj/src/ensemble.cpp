#include "ensemble.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace mlab {

std::string SampleParams::cache_key_string() const {
    char buf[384];
    std::snprintf(buf, sizeof buf,
                  "coupling=%s space=%s window=%d boundary=%s burn_in=%d thin=%d seed=%" PRIu64
                  " r_cut=%d margin=%d",
                  coupling.describe().c_str(), space.describe().c_str(), window,
                  boundary_name(boundary).c_str(), burn_in, thin, seed, r_cut, edge_margin);
    return buf;
}

SampleLayout plan_layout(const SampleParams& p) {
    if (p.window < 1) throw std::invalid_argument("sample: window must be >= 1");
    if (p.burn_in < 1 || p.thin < 1)
        throw std::invalid_argument("sample: burn_in and thin must be >= 1");
    if (p.replicas < 1) throw std::invalid_argument("sample: replicas must be >= 1");

    SampleLayout lay;
    lay.radius = p.coupling.has_finite_range() ? p.coupling.range()
                                               : std::min(p.r_cut, p.window);
    int margin = p.edge_margin;
    if (margin < 0) margin = (p.boundary == Boundary::Free) ? lay.radius : 0;
    if (p.boundary == Boundary::Periodic) margin = 0;
    lay.offset = margin;
    lay.volume = p.window + 2 * margin;
    lay.retained_mass = p.coupling.retained_row_mass(lay.radius);
    lay.tail_mass = p.coupling.tail_row_mass(lay.radius);
    if (lay.retained_mass > 0.0 && lay.tail_mass > 1e-3 * lay.retained_mass) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "coupling truncation at radius %d discards %.3g of retained mass %.3g "
                      "(limit 1e-3); increase r_cut",
                      lay.radius, lay.tail_mass, lay.retained_mass);
        throw ModelGuardError(msg);
    }
    return lay;
}

void sample_windows(const SampleParams& p, const WindowSink& sink) {
    const SampleLayout lay = plan_layout(p);
    const int total_sweeps = p.burn_in + p.thin;

    auto run_range = [&](int lo, int hi) {
        for (int rep = lo; rep < hi; ++rep) {
            CounterRng rng(p.seed, static_cast<std::uint64_t>(rep));
            SpinChain chain(p.coupling, p.space, lay.volume, p.boundary, lay.radius);
            chain.randomize(rng);
            for (int s = 0; s < total_sweeps; ++s) chain.sweep(rng);
            const auto spins = chain.spins().subspan(static_cast<std::size_t>(lay.offset),
                                                     static_cast<std::size_t>(p.window));
            const auto fields = chain.local_fields().subspan(
                static_cast<std::size_t>(lay.offset), static_cast<std::size_t>(p.window));
            sink(rep, spins, fields);
        }
    };

    int workers = std::max(1, p.threads);
    workers = std::min<int>(workers, p.replicas);
    if (workers == 1) {
        run_range(0, p.replicas);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int lo = static_cast<int>(static_cast<long long>(w) * p.replicas / workers);
        const int hi = static_cast<int>(static_cast<long long>(w + 1) * p.replicas / workers);
        pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
}

ReplicaEnsemble::ReplicaEnsemble(int replicas, int window)
    : r_(replicas), n_(window),
      data_(static_cast<std::size_t>(replicas) * static_cast<std::size_t>(window), 0.0) {
    if (replicas < 1 || window < 1)
        throw std::invalid_argument("ReplicaEnsemble: need replicas >= 1 and window >= 1");
}

ReplicaEnsemble sample_ensemble(const SampleParams& p) {
    ReplicaEnsemble ens(p.replicas, p.window);
    sample_windows(p, [&](int rep, std::span<const double> spins, std::span<const double>) {
        auto row = ens.mutable_row(rep);
        std::copy(spins.begin(), spins.end(), row.begin());
    });
    return ens;
}

// --- cache ----------------------------------------------------------------

namespace {
std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}
} // namespace

std::string ensemble_cache_filename(const SampleParams& p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "cache_%016" PRIx64 ".dat", fnv1a64(p.cache_key_string()));
    return buf;
}

bool ensemble_cache_store(const std::string& dir, const SampleParams& p,
                          const ReplicaEnsemble& ens) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = std::filesystem::path(dir) / ensemble_cache_filename(p);
    std::ofstream out(path);
    if (!out) return false;
    out << "# mallowslab-cache v1 | " << p.cache_key_string() << " | R=" << ens.replicas()
        << " N=" << ens.window() << "\n";
    char num[40];
    for (int r = 0; r < ens.replicas(); ++r) {
        const auto row = ens.row(r);
        for (int j = 0; j < ens.window(); ++j) {
            std::snprintf(num, sizeof num, "%.17g", row[static_cast<std::size_t>(j)]);
            out << num << (j + 1 == ens.window() ? '\n' : ' ');
        }
    }
    return static_cast<bool>(out);
}

std::optional<ReplicaEnsemble> ensemble_cache_load(const std::string& dir,
                                                   const SampleParams& p) {
    const auto path = std::filesystem::path(dir) / ensemble_cache_filename(p);
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string header;
    if (!std::getline(in, header)) return std::nullopt;
    std::ostringstream want;
    want << "# mallowslab-cache v1 | " << p.cache_key_string() << " | R=";
    if (header.rfind(want.str(), 0) != 0) return std::nullopt; // hash collision guard
    int cached_r = 0, cached_n = 0;
    if (std::sscanf(header.c_str() + want.str().size(), "%d N=%d", &cached_r, &cached_n) != 2)
        return std::nullopt;
    if (cached_n != p.window || cached_r < p.replicas) return std::nullopt;
    ReplicaEnsemble ens(p.replicas, p.window);
    for (int r = 0; r < p.replicas; ++r) {
        auto row = ens.mutable_row(r);
        for (int j = 0; j < p.window; ++j)
            if (!(in >> row[static_cast<std::size_t>(j)])) return std::nullopt;
    }
    return ens;
}

int cache_clear(const std::string& dir) {
    int removed = 0;
    std::error_code ec;
    for (auto& entry : std::filesystem::directory_iterator(dir, ec)) {
        const auto name = entry.path().filename().string();
        if (name.rfind("cache_", 0) == 0 && entry.path().extension() == ".dat") {
            std::filesystem::remove(entry.path(), ec);
            if (!ec) ++removed;
        }
    }
    return removed;
}

// --- single-chain time averages --------------------------------------------

PairAverages chain_pair_averages(const SampleParams& p, int measure_sweeps, int batches) {
    const SampleLayout lay = plan_layout(p);
    if (measure_sweeps < batches * 2)
        throw std::invalid_argument("chain_pair_averages: too few sweeps for batching");
    CounterRng rng(p.seed, 0);
    SpinChain chain(p.coupling, p.space, lay.volume, p.boundary, lay.radius);
    chain.randomize(rng);
    for (int s = 0; s < p.burn_in; ++s) chain.sweep(rng);

    const int n = p.window;
    const std::size_t cells = static_cast<std::size_t>(n) * n;
    std::vector<double> batch_mean(static_cast<std::size_t>(batches) * n, 0.0);
    std::vector<double> batch_pair(static_cast<std::size_t>(batches) * cells, 0.0);
    const int per_batch = measure_sweeps / batches;

    for (int b = 0; b < batches; ++b) {
        double* bm = batch_mean.data() + static_cast<std::size_t>(b) * n;
        double* bp = batch_pair.data() + static_cast<std::size_t>(b) * cells;
        for (int s = 0; s < per_batch; ++s) {
            chain.sweep(rng);
            const auto spins = chain.spins().subspan(static_cast<std::size_t>(lay.offset),
                                                     static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                bm[i] += spins[static_cast<std::size_t>(i)];
                for (int j = i; j < n; ++j)
                    bp[static_cast<std::size_t>(i) * n + j] +=
                        spins[static_cast<std::size_t>(i)] * spins[static_cast<std::size_t>(j)];
            }
        }
        for (int i = 0; i < n; ++i) {
            bm[i] /= per_batch;
            for (int j = i; j < n; ++j) bp[static_cast<std::size_t>(i) * n + j] /= per_batch;
        }
    }

    PairAverages out;
    out.n = n;
    out.mean.assign(static_cast<std::size_t>(n), 0.0);
    out.mean_se.assign(static_cast<std::size_t>(n), 0.0);
    out.pair.assign(cells, 0.0);
    out.pair_se.assign(cells, 0.0);
    const double B = batches;
    for (int i = 0; i < n; ++i) {
        double m = 0.0;
        for (int b = 0; b < batches; ++b) m += batch_mean[static_cast<std::size_t>(b) * n + i];
        m /= B;
        double q = 0.0;
        for (int b = 0; b < batches; ++b) {
            const double d = batch_mean[static_cast<std::size_t>(b) * n + i] - m;
            q += d * d;
        }
        out.mean[static_cast<std::size_t>(i)] = m;
        out.mean_se[static_cast<std::size_t>(i)] = std::sqrt(q / (B * (B - 1.0)));
    }
    for (std::size_t c = 0; c < cells; ++c) {
        double m = 0.0;
        for (int b = 0; b < batches; ++b) m += batch_pair[static_cast<std::size_t>(b) * cells + c];
        m /= B;
        double q = 0.0;
        for (int b = 0; b < batches; ++b) {
            const double d = batch_pair[static_cast<std::size_t>(b) * cells + c] - m;
            q += d * d;
        }
        out.pair[c] = m;
        out.pair_se[c] = std::sqrt(q / (B * (B - 1.0)));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) {
            out.pair[static_cast<std::size_t>(i) * n + j] = out.pair[static_cast<std::size_t>(j) * n + i];
            out.pair_se[static_cast<std::size_t>(i) * n + j] =
                out.pair_se[static_cast<std::size_t>(j) * n + i];
        }
    return out;
}

double chain_magnetization_iat(const SampleParams& p, int probe_sweeps) {
    const SampleLayout lay = plan_layout(p);
    CounterRng rng(p.seed, 0x6d69786572ULL);
    SpinChain chain(p.coupling, p.space, lay.volume, p.boundary, lay.radius);
    chain.randomize(rng);
    for (int s = 0; s < p.burn_in; ++s) chain.sweep(rng);
    std::vector<double> mag;
    mag.reserve(static_cast<std::size_t>(probe_sweeps));
    for (int s = 0; s < probe_sweeps; ++s) {
        chain.sweep(rng);
        double m = 0.0;
        for (double x : chain.spins()) m += x;
        mag.push_back(m / chain.size());
    }
    return integrated_autocorrelation_time(mag);
}

} // namespace mlab
