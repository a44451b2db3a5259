#include "plb/kernels.hpp"

#include "kernels_impl.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace plb::kern {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const detail::KernelTable* table_for(Backend b) noexcept {
    if (b == Backend::avx2)
        return detail::avx2_table();
    return &detail::scalar_table();
}

struct Dispatch {
    std::atomic<const detail::KernelTable*> table;
    std::atomic<Backend> backend;

    Dispatch() noexcept {
        Backend b = cpu_has_avx2() && detail::avx2_table() ? Backend::avx2
                                                           : Backend::scalar;
        if (const char* env = std::getenv("PLB_KERNELS")) {
            if (std::strcmp(env, "scalar") == 0)
                b = Backend::scalar;
            else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2() &&
                     detail::avx2_table())
                b = Backend::avx2;
        }
        backend.store(b);
        table.store(table_for(b));
    }
};

Dispatch& dispatch() noexcept {
    static Dispatch d;
    return d;
}

const detail::KernelTable& tab() noexcept { return *dispatch().table.load(); }

} // namespace

Backend active() noexcept { return dispatch().backend.load(); }

Backend best_supported() noexcept {
    return cpu_has_avx2() && detail::avx2_table() ? Backend::avx2 : Backend::scalar;
}

bool set_backend(Backend b) noexcept {
    if (b == Backend::avx2 && !(cpu_has_avx2() && detail::avx2_table()))
        return false;
    dispatch().backend.store(b);
    dispatch().table.store(table_for(b));
    return true;
}

std::string_view backend_name(Backend b) noexcept {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double max_val(std::span<const double> x) noexcept { return tab().max_val(x); }
double min_val(std::span<const double> x) noexcept { return tab().min_val(x); }
double max_abs(std::span<const double> x) noexcept { return tab().max_abs(x); }

double dot_w(std::span<const double> x, std::span<const double> y,
             std::span<const double> w) noexcept {
    return tab().dot_w(x, y, w);
}

double sum_abs_pow_w(std::span<const double> x, std::span<const double> w,
                     double e) noexcept {
    return tab().sum_abs_pow_w(x, w, e);
}

void axpy(double a, std::span<const double> x, std::span<double> y) noexcept {
    tab().axpy(a, x, y);
}

void shifted_pow_acc(std::span<const double> u, double shift, double e, double c,
                     bool acc, std::span<double> out) noexcept {
    tab().shifted_pow_acc(u, shift, e, c, acc, out);
}

void trunc_pow_acc(std::span<const double> u, double cap, double e1, double e2,
                   double c, std::span<double> out) noexcept {
    tab().trunc_pow_acc(u, cap, e1, e2, c, out);
}

void trunc_pow_deriv_acc(std::span<const double> u, double cap, double q, double p,
                         double c, std::span<double> out) noexcept {
    tab().trunc_pow_deriv_acc(u, cap, q, p, c, out);
}

void slopes(std::span<const double> u_ext, std::span<const double> inv_h,
            std::span<double> s) noexcept {
    tab().slopes(u_ext, inv_h, s);
}

void flux(std::span<const double> s, double p, double eta,
          std::span<double> f) noexcept {
    tab().flux(s, p, eta, f);
}

void flux_deriv(std::span<const double> s, double p, double eta,
                std::span<double> df) noexcept {
    tab().flux_deriv(s, p, eta, df);
}

void flux_divergence(std::span<const double> f, std::span<const double> inv_hc,
                     std::span<double> out) noexcept {
    tab().flux_divergence(f, inv_hc, out);
}

} // namespace plb::kern
