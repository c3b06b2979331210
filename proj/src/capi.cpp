#include "mallowslab/mallows_lab.h"

#include "config.hpp"
#include "ensemble.hpp"
#include "experiment.hpp"
#include "normal.hpp"
#include "sorted_sample.hpp"
#include "transport.hpp"

#include <cstring>
#include <string>

using namespace mlab;

struct mlab_sample {
    SortedSample sample;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what ? what : ""; }

template <class F>
mlab_status guarded(F&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MLAB_OK;
    } catch (const ConfigError& e) {
        set_error(e.what());
        return MLAB_ERR_CONFIG;
    } catch (const ModelGuardError& e) {
        set_error(e.what());
        return MLAB_ERR_MODEL_GUARD;
    } catch (const std::domain_error& e) {
        set_error(e.what());
        return MLAB_ERR_DOMAIN;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return MLAB_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        set_error(e.what());
        return MLAB_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char* mlab_version(void) {
    static const std::string v = version_string();
    return v.c_str();
}

const char* mlab_status_name(mlab_status status) {
    switch (status) {
        case MLAB_OK: return "ok";
        case MLAB_ERR_INVALID_ARGUMENT: return "invalid argument";
        case MLAB_ERR_DOMAIN: return "domain error";
        case MLAB_ERR_CONFIG: return "config error";
        case MLAB_ERR_MODEL_GUARD: return "model guard";
        case MLAB_ERR_IO: return "io error";
        case MLAB_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* mlab_last_error(void) { return g_last_error.c_str(); }

mlab_status mlab_sample_create(const double* values, size_t count, mlab_sample** out_sample) {
    if (!values || !out_sample) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        std::vector<double> v(values, values + count);
        *out_sample = new mlab_sample{SortedSample::from_unsorted(std::move(v))};
    });
}

void mlab_sample_free(mlab_sample* sample) { delete sample; }

size_t mlab_sample_size(const mlab_sample* sample) {
    return sample ? sample->sample.size() : 0;
}

mlab_status mlab_sample_cdf(const mlab_sample* sample, double x, double* out) {
    if (!sample || !out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = sample->sample.cdf(x); });
}

mlab_status mlab_sample_quantile(const mlab_sample* sample, double u, double* out) {
    if (!sample || !out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = sample->sample.quantile(u); });
}

mlab_status mlab_mallows_between(const mlab_sample* a, const mlab_sample* b, double r,
                                 double* out) {
    if (!a || !b || !out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = mallows_distance(a->sample, b->sample, r); });
}

mlab_status mlab_mallows_to_normal(const mlab_sample* sample, double mean, double sd,
                                   double r, double* out) {
    if (!sample || !out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = mallows_to_normal(sample->sample, NormalLaw(mean, sd), r); });
}

mlab_status mlab_kolmogorov_to_normal(const mlab_sample* sample, double mean, double sd,
                                      double* out) {
    if (!sample || !out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = kolmogorov_to_normal(sample->sample, NormalLaw(mean, sd)); });
}

mlab_status mlab_normal_mallows2(double m1, double s1, double m2, double s2, double* out) {
    if (!out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = mallows_normal_closed_form(NormalLaw(m1, s1), NormalLaw(m2, s2)); });
}

mlab_status mlab_normal_cdf(double x, double* out) {
    if (!out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = normal_cdf(x); });
}

mlab_status mlab_normal_quantile(double u, double* out) {
    if (!out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = normal_quantile(u); });
}

mlab_status mlab_normal_abs_moment(double r, double* out) {
    if (!out) {
        set_error("null pointer");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { *out = normal_abs_moment(r); });
}

mlab_status mlab_run_experiment(const char* config_path, const mlab_run_options* options) {
    if (!config_path) {
        set_error("null config path");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto cfg = parse_config_file(config_path);
        RunOverrides ov;
        if (options) {
            if (options->out_dir) ov.out_dir = std::string(options->out_dir);
            if (options->has_seed) ov.seed = options->seed;
            ov.threads = options->threads > 0 ? options->threads : 1;
        }
        run_experiment(cfg, ov);
    });
}

mlab_status mlab_verify_suite(unsigned flags, int threads, int* out_failures) {
    return guarded([&] {
        VerifyOptions opts;
        opts.flip_hamiltonian_sign = (flags & MLAB_VERIFY_FLIP_HAMILTONIAN) != 0;
        opts.skip_dk_bound = (flags & MLAB_VERIFY_SKIP_DK_BOUND) != 0;
        opts.quiet = (flags & MLAB_VERIFY_QUIET) != 0;
        opts.threads = threads > 0 ? threads : 1;
        const auto report = verify_suite(opts);
        if (out_failures) *out_failures = report.failures;
    });
}

mlab_status mlab_cache_clear(const char* dir, int* out_removed) {
    if (!dir) {
        set_error("null cache dir");
        return MLAB_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const int removed = cache_clear(dir);
        if (out_removed) *out_removed = removed;
    });
}

} // extern "C"
