#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "plb/kernels.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace plb;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v)
        x = dist(rng);
    return v;
}

struct BackendGuard {
    kern::Backend saved;
    BackendGuard() : saved(kern::active()) {}
    ~BackendGuard() { kern::set_backend(saved); }
};

bool have_avx2() { return kern::best_supported() == kern::Backend::avx2; }

template <class Fn>
void compare_backends_exact(Fn&& run, size_t n_out) {
    BackendGuard guard;
    std::vector<double> a(n_out, 0.0), b(n_out, 0.0);
    REQUIRE(kern::set_backend(kern::Backend::scalar));
    run(a);
    REQUIRE(kern::set_backend(kern::Backend::avx2));
    run(b);
    for (size_t i = 0; i < n_out; ++i) {
        INFO("element ", i);
        CHECK(a[i] == b[i]);
    }
}

} // namespace

TEST_CASE("avx2 backend is available on this machine") {
    // The equivalence suite is the point of the split; fail loudly if the
    // vector backend went missing.
    CHECK(have_avx2());
}

TEST_CASE("reductions agree across backends") {
    if (!have_avx2())
        return;
    BackendGuard guard;
    std::mt19937_64 rng(91);
    for (size_t n : {1u, 3u, 4u, 5u, 64u, 257u, 400u}) {
        auto x = random_vec(rng, n, -3.0, 3.0);
        auto y = random_vec(rng, n, -2.0, 2.0);
        auto w = random_vec(rng, n, 0.1, 1.0);

        REQUIRE(kern::set_backend(kern::Backend::scalar));
        const double maxv_s = kern::max_val(x);
        const double minv_s = kern::min_val(x);
        const double maxa_s = kern::max_abs(x);
        const double dot_s = kern::dot_w(x, y, w);
        const double pw_s = kern::sum_abs_pow_w(x, w, 1.5);

        REQUIRE(kern::set_backend(kern::Backend::avx2));
        CHECK(kern::max_val(x) == maxv_s);
        CHECK(kern::min_val(x) == minv_s);
        CHECK(kern::max_abs(x) == maxa_s);
        CHECK(kern::dot_w(x, y, w) == doctest::Approx(dot_s).epsilon(1e-13));
        CHECK(kern::sum_abs_pow_w(x, w, 1.5) == doctest::Approx(pw_s).epsilon(1e-13));
    }
}

TEST_CASE("elementwise kernels are bit-identical across backends") {
    if (!have_avx2())
        return;
    std::mt19937_64 rng(17);
    for (size_t n : {1u, 5u, 8u, 133u, 401u}) {
        auto u = random_vec(rng, n, 0.05, 2.5);
        auto x = random_vec(rng, n, -1.0, 1.0);
        auto u_ext = random_vec(rng, n + 1, -1.0, 1.0);
        auto inv_h = random_vec(rng, n, 1.0, 5.0);
        auto f_ext = random_vec(rng, n + 1, -2.0, 2.0);

        for (double e : {-1.5, -0.75, -0.5, 0.0, 0.5, 1.0, 2.0, 2.5, 3.0, 0.37}) {
            compare_backends_exact(
                [&](std::vector<double>& out) {
                    kern::shifted_pow_acc(u, 0.25, e, 1.3, false, out);
                },
                n);
        }
        for (double cap : {1.2, std::numeric_limits<double>::infinity()}) {
            compare_backends_exact(
                [&](std::vector<double>& out) {
                    kern::trunc_pow_acc(u, cap, 2.5, 1.0, 0.7, out);
                },
                n);
            compare_backends_exact(
                [&](std::vector<double>& out) {
                    kern::trunc_pow_deriv_acc(u, cap, 3.0, 1.5, 0.9, out);
                },
                n);
        }
        for (double p : {1.5, 2.0, 3.0}) {
            compare_backends_exact(
                [&](std::vector<double>& out) { kern::flux(x, p, 1e-8, out); }, n);
            compare_backends_exact(
                [&](std::vector<double>& out) { kern::flux_deriv(x, p, 1e-8, out); },
                n);
        }
        compare_backends_exact(
            [&](std::vector<double>& out) { kern::axpy(0.37, x, out); }, n);
        compare_backends_exact(
            [&](std::vector<double>& out) { kern::slopes(u_ext, inv_h, out); }, n);
        compare_backends_exact(
            [&](std::vector<double>& out) {
                kern::flux_divergence(f_ext, inv_h, out);
            },
            n);
    }
}

TEST_CASE("quarter-exponent chains match std::pow closely") {
    std::mt19937_64 rng(3);
    auto u = random_vec(rng, 64, 0.02, 8.0);
    for (double e : {-2.5, -1.5, -1.0, -0.5, -0.25, 0.25, 0.5, 1.5, 2.0, 3.0, 4.75}) {
        std::vector<double> out(u.size(), 0.0);
        kern::shifted_pow_acc(u, 0.0, e, 1.0, false, out);
        for (size_t i = 0; i < u.size(); ++i) {
            const double ref = std::pow(u[i], e);
            CHECK(out[i] == doctest::Approx(ref).epsilon(1e-12));
        }
    }
}

TEST_CASE("pow edge cases") {
    std::vector<double> u = {0.0, 1.0, 4.0};
    std::vector<double> out(3, 0.0);
    kern::shifted_pow_acc(u, 0.0, 0.5, 1.0, false, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 1.0);
    CHECK(out[2] == 2.0);
    kern::shifted_pow_acc(u, 0.0, -1.0, 1.0, false, out);
    CHECK(std::isinf(out[0]));
    CHECK(out[1] == 1.0);
    CHECK(out[2] == 0.25);
}

TEST_CASE("accumulation flag and truncation blend") {
    std::vector<double> u = {0.5, 1.0, 2.0, 3.0};
    std::vector<double> out(4, 7.0);
    kern::shifted_pow_acc(u, 0.0, 1.0, 2.0, true, out);
    CHECK(out[0] == 8.0);
    CHECK(out[3] == 13.0);

    // min(u, 2)^2 * u: below the cap u^3, above it 4u.
    std::fill(out.begin(), out.end(), 0.0);
    kern::trunc_pow_acc(u, 2.0, 2.0, 1.0, 1.0, out);
    CHECK(out[0] == doctest::Approx(0.125));
    CHECK(out[1] == doctest::Approx(1.0));
    CHECK(out[2] == doctest::Approx(8.0));
    CHECK(out[3] == doctest::Approx(12.0));
}
