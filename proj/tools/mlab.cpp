// Batch experiment front end for the mallowslab shared library.
//
//   mlab run <config> [--seed S] [--out-dir DIR] [--threads T]
//   mlab verify [--threads T] [--quiet]
//   mlab cache --clear [--out-dir DIR]
//
// Exit codes: 0 success, 2 malformed config, 3 model guard rejection,
// 1 anything else (including verify failures).

#include <mallowslab/mallows_lab.h>

#include "CLI11.hpp"

#include <cstdio>
#include <string>

namespace {

int status_to_exit(mlab_status st) {
    switch (st) {
        case MLAB_OK: return 0;
        case MLAB_ERR_CONFIG: return 2;
        case MLAB_ERR_MODEL_GUARD: return 3;
        default: return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("mallows-distance laboratory (") + mlab_version() + ")"};
    app.require_subcommand(1);

    std::string config_path, out_dir, cache_dir = "out/cache";
    std::uint64_t seed = 0;
    bool has_seed = false, quiet = false, clear = false;
    int threads = 1;

    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--seed", seed, "override the master seed")->each([&](const std::string&) {
        has_seed = true;
    });
    run->add_option("--out-dir", out_dir, "override the output directory");
    run->add_option("--threads", threads, "worker threads for replica sampling");

    auto* verify = app.add_subcommand("verify", "run the oracle/invariant suite");
    verify->add_option("--threads", threads, "worker threads");
    verify->add_flag("--quiet", quiet, "suppress per-check lines");

    auto* cache = app.add_subcommand("cache", "manage the sample cache");
    cache->add_flag("--clear", clear, "remove cached ensembles");
    cache->add_option("--out-dir", out_dir, "experiment output directory (cache lives under it)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        mlab_run_options opts{};
        opts.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
        opts.seed = seed;
        opts.has_seed = has_seed ? 1 : 0;
        opts.threads = threads;
        const mlab_status st = mlab_run_experiment(config_path.c_str(), &opts);
        if (st != MLAB_OK)
            std::fprintf(stderr, "mlab run: %s: %s\n", mlab_status_name(st), mlab_last_error());
        return status_to_exit(st);
    }

    if (verify->parsed()) {
        int failures = 0;
        unsigned flags = quiet ? MLAB_VERIFY_QUIET : 0u;
        const mlab_status st = mlab_verify_suite(flags, threads, &failures);
        if (st != MLAB_OK) {
            std::fprintf(stderr, "mlab verify: %s: %s\n", mlab_status_name(st),
                         mlab_last_error());
            return status_to_exit(st);
        }
        std::printf("%d check(s) failed\n", failures);
        return failures == 0 ? 0 : 1;
    }

    if (cache->parsed()) {
        if (!clear) {
            std::fprintf(stderr, "mlab cache: nothing to do (did you mean --clear?)\n");
            return 1;
        }
        const std::string dir = out_dir.empty() ? "out" : out_dir;
        int removed = 0;
        const mlab_status st = mlab_cache_clear((dir + "/cache").c_str(), &removed);
        if (st != MLAB_OK) {
            std::fprintf(stderr, "mlab cache: %s: %s\n", mlab_status_name(st), mlab_last_error());
            return status_to_exit(st);
        }
        std::printf("removed %d cached ensemble(s)\n", removed);
        return 0;
    }
    return 1;
}
