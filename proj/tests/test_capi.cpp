// Exercises the shared-library surface the way an external C consumer would:
// opaque handles, status codes, thread-local error strings.

#include <mallowslab/mallows_lab.h>

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

TEST_CASE("version and status names") {
    CHECK(std::string(mlab_version()).find("mallowslab") != std::string::npos);
    CHECK(std::string(mlab_status_name(MLAB_OK)) == "ok");
    CHECK(std::string(mlab_status_name(MLAB_ERR_CONFIG)) == "config error");
}

TEST_CASE("sample handles and distances") {
    const double xs[3] = {3.0, 1.0, 2.0}; // unsorted on purpose
    mlab_sample* a = nullptr;
    REQUIRE(mlab_sample_create(xs, 3, &a) == MLAB_OK);
    CHECK(mlab_sample_size(a) == 3);

    double v = 0.0;
    CHECK(mlab_sample_cdf(a, 2.0, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(2.0 / 3.0));
    CHECK(mlab_sample_quantile(a, 0.5, &v) == MLAB_OK);
    CHECK(v == 2.0);
    CHECK(mlab_sample_quantile(a, 1.5, &v) == MLAB_ERR_DOMAIN);
    CHECK(std::string(mlab_last_error()).size() > 0);

    const double ys[3] = {2.0, 3.0, 4.0};
    mlab_sample* b = nullptr;
    REQUIRE(mlab_sample_create(ys, 3, &b) == MLAB_OK);
    CHECK(mlab_mallows_between(a, b, 1.0, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(1.0));
    CHECK(mlab_mallows_between(a, b, -1.0, &v) == MLAB_ERR_DOMAIN);

    CHECK(mlab_kolmogorov_to_normal(a, 0.0, 1.0, &v) == MLAB_OK);
    CHECK(v > 0.5); // all mass above 1

    CHECK(mlab_normal_mallows2(1.0, 2.0, 0.0, 1.0, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(std::sqrt(2.0)));

    mlab_sample_free(a);
    mlab_sample_free(b);

    // invalid construction
    const double bad[2] = {1.0, NAN};
    mlab_sample* c = nullptr;
    CHECK(mlab_sample_create(bad, 2, &c) == MLAB_ERR_INVALID_ARGUMENT);
    CHECK(mlab_sample_create(nullptr, 2, &c) == MLAB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("normal toolkit through the C surface") {
    double v = 0.0;
    CHECK(mlab_normal_cdf(0.0, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(0.5));
    CHECK(mlab_normal_quantile(0.975, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(mlab_normal_quantile(0.0, &v) == MLAB_ERR_DOMAIN);
    CHECK(mlab_normal_abs_moment(3.0, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(1.5957691216057308));
    CHECK(mlab_normal_abs_moment(-2.0, &v) == MLAB_ERR_DOMAIN);

    // single point at 0 vs standard normal: d_2 = 1
    const double zero = 0.0;
    mlab_sample* s = nullptr;
    REQUIRE(mlab_sample_create(&zero, 1, &s) == MLAB_OK);
    CHECK(mlab_mallows_to_normal(s, 0.0, 1.0, 2.0, &v) == MLAB_OK);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    mlab_sample_free(s);
}

TEST_CASE("experiment run and error codes through the C surface") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mlab_capi_run";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto cfg_path = dir / "exp.cfg";
    {
        std::ofstream out(cfg_path);
        out << "[model]\ncoupling = zero\nspin_space = real_law\nlambda = gauss(0,1)\n"
               "N = 64\nburn_in = 1\nthin = 1\nR = 200\nseed = 31\n"
               "[analysis]\nn_schedule = 16,64\nr_values = 1,2\n"
               "centering = known_mean\nscaling = theoretical_sigma\nsigma = 1\n"
               "[output]\ndirectory = " << (dir / "out").string() << "\n";
    }
    mlab_run_options opts{};
    opts.threads = 2;
    CHECK(mlab_run_experiment(cfg_path.string().c_str(), &opts) == MLAB_OK);
    CHECK(fs::exists(dir / "out" / "report.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.txt"));

    // malformed config: MLAB_ERR_CONFIG with a line-numbered message
    const auto bad_path = dir / "bad.cfg";
    {
        std::ofstream out(bad_path);
        out << "[model]\nN = twelve\n";
    }
    CHECK(mlab_run_experiment(bad_path.string().c_str(), &opts) == MLAB_ERR_CONFIG);
    CHECK(std::string(mlab_last_error()).find("line 2") != std::string::npos);

    // cache management
    int removed = -1;
    CHECK(mlab_cache_clear((dir / "out" / "cache").string().c_str(), &removed) == MLAB_OK);
    CHECK(removed == 1);
    fs::remove_all(dir);
}

TEST_CASE("verify fixtures through the C surface") {
    // flipped Hamiltonian sign must fail the ferromagnetic monotonicity check
    int failures = -1;
    CHECK(mlab_verify_suite(MLAB_VERIFY_FLIP_HAMILTONIAN | MLAB_VERIFY_QUIET, 1, &failures) ==
          MLAB_OK);
    CHECK(failures >= 1);
}
