#pragma once

// Kernel bodies, templated over a lane type. Instantiated once for the
// scalar lane (kernels_scalar.cpp) and once for the AVX2 lane
// (kernels_avx2.cpp, compiled with -mavx2). Vector loops handle full lanes;
// the remainder always runs through ScalarLane, so both backends agree on
// every element.

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <limits>
#include <span>

namespace plb::kern::detail {

struct ScalarLane {
    using reg = double;
    static constexpr std::size_t width = 1;
    static reg load(const double* p) noexcept { return *p; }
    static void store(double* p, reg v) noexcept { *p = v; }
    static reg set1(double v) noexcept { return v; }
    static reg add(reg a, reg b) noexcept { return a + b; }
    static reg sub(reg a, reg b) noexcept { return a - b; }
    static reg mul(reg a, reg b) noexcept { return a * b; }
    static reg div(reg a, reg b) noexcept { return a / b; }
    static reg sqrt(reg a) noexcept { return std::sqrt(a); }
    static reg min(reg a, reg b) noexcept { return a < b ? a : b; }
    static reg max(reg a, reg b) noexcept { return a > b ? a : b; }
    static reg abs(reg a) noexcept { return std::fabs(a); }
    // a < b ? x : y, per element
    static reg select_lt(reg a, reg b, reg x, reg y) noexcept { return a < b ? x : y; }
    static reg pow_lane(reg x, double e) noexcept { return std::pow(x, e); }
};

// Exponent classification: quarter-integer exponents (4e integral, |4e| <= 64)
// use a deterministic multiply/sqrt chain, everything else std::pow per lane.
struct PowPlan {
    bool chain;
    int k4; // exponent * 4 when chain
    double e;
};

inline PowPlan plan_pow(double e) noexcept {
    const double k = 4.0 * e;
    const double r = std::nearbyint(k);
    if (std::fabs(k - r) == 0.0 && std::fabs(r) <= 64.0)
        return {true, static_cast<int>(r), e};
    return {false, 0, e};
}

template <class L>
inline typename L::reg pow_apply(const PowPlan& pl, typename L::reg x) noexcept {
    if (!pl.chain)
        return L::pow_lane(x, pl.e);
    int m = pl.k4 < 0 ? -pl.k4 : pl.k4;
    auto r = L::set1(1.0);
    auto base = x;
    int ip = m >> 2;
    while (ip) {
        if (ip & 1)
            r = L::mul(r, base);
        ip >>= 1;
        if (ip)
            base = L::mul(base, base);
    }
    if (m & 2)
        r = L::mul(r, L::sqrt(x));
    if (m & 1)
        r = L::mul(r, L::sqrt(L::sqrt(x)));
    if (pl.k4 < 0)
        r = L::div(L::set1(1.0), r);
    return r;
}

// ---- reduction bodies ------------------------------------------------------

template <class L>
double max_val_impl(std::span<const double> x) noexcept {
    const std::size_t n = x.size();
    double out = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        if (n >= L::width) {
            auto acc = L::load(x.data());
            for (i = L::width; i + L::width <= n; i += L::width)
                acc = L::max(acc, L::load(x.data() + i));
            alignas(32) double tmp[L::width];
            L::store(tmp, acc);
            for (std::size_t k = 0; k < L::width; ++k)
                out = out > tmp[k] ? out : tmp[k];
        }
    }
    for (; i < n; ++i)
        out = out > x[i] ? out : x[i];
    return out;
}

template <class L>
double min_val_impl(std::span<const double> x) noexcept {
    const std::size_t n = x.size();
    double out = std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        if (n >= L::width) {
            auto acc = L::load(x.data());
            for (i = L::width; i + L::width <= n; i += L::width)
                acc = L::min(acc, L::load(x.data() + i));
            alignas(32) double tmp[L::width];
            L::store(tmp, acc);
            for (std::size_t k = 0; k < L::width; ++k)
                out = out < tmp[k] ? out : tmp[k];
        }
    }
    for (; i < n; ++i)
        out = out < x[i] ? out : x[i];
    return out;
}

template <class L>
double max_abs_impl(std::span<const double> x) noexcept {
    const std::size_t n = x.size();
    double out = 0.0;
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        if (n >= L::width) {
            auto acc = L::abs(L::load(x.data()));
            for (i = L::width; i + L::width <= n; i += L::width)
                acc = L::max(acc, L::abs(L::load(x.data() + i)));
            alignas(32) double tmp[L::width];
            L::store(tmp, acc);
            for (std::size_t k = 0; k < L::width; ++k)
                out = out > tmp[k] ? out : tmp[k];
        }
    }
    for (; i < n; ++i) {
        const double a = std::fabs(x[i]);
        out = out > a ? out : a;
    }
    return out;
}

template <class L>
double dot_w_impl(std::span<const double> x, std::span<const double> y,
                  std::span<const double> w) noexcept {
    const std::size_t n = x.size();
    double out = 0.0;
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        auto acc = L::set1(0.0);
        for (; i + L::width <= n; i += L::width) {
            auto t = L::mul(L::load(x.data() + i), L::load(y.data() + i));
            acc = L::add(acc, L::mul(t, L::load(w.data() + i)));
        }
        alignas(32) double tmp[L::width];
        L::store(tmp, acc);
        for (std::size_t k = 0; k < L::width; ++k)
            out += tmp[k];
    }
    for (; i < n; ++i)
        out += x[i] * y[i] * w[i];
    return out;
}

template <class L>
double sum_abs_pow_w_impl(std::span<const double> x, std::span<const double> w,
                          double e) noexcept {
    const PowPlan pl = plan_pow(e);
    const std::size_t n = x.size();
    double out = 0.0;
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        auto acc = L::set1(0.0);
        for (; i + L::width <= n; i += L::width) {
            auto a = L::abs(L::load(x.data() + i));
            acc = L::add(acc, L::mul(pow_apply<L>(pl, a), L::load(w.data() + i)));
        }
        alignas(32) double tmp[L::width];
        L::store(tmp, acc);
        for (std::size_t k = 0; k < L::width; ++k)
            out += tmp[k];
    }
    for (; i < n; ++i)
        out += pow_apply<ScalarLane>(pl, std::fabs(x[i])) * w[i];
    return out;
}

// ---- elementwise bodies ----------------------------------------------------

template <class L>
void axpy_impl(double a, std::span<const double> x, std::span<double> y) noexcept {
    const std::size_t n = x.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        const auto va = L::set1(a);
        for (; i + L::width <= n; i += L::width)
            L::store(y.data() + i,
                     L::add(L::load(y.data() + i), L::mul(va, L::load(x.data() + i))));
    }
    for (; i < n; ++i)
        y[i] += a * x[i];
}

template <class L>
inline typename L::reg shifted_pow_one(const PowPlan& pl, typename L::reg u,
                                       typename L::reg shift, typename L::reg c,
                                       typename L::reg prev, bool acc) noexcept {
    auto v = L::mul(c, pow_apply<L>(pl, L::add(u, shift)));
    return acc ? L::add(prev, v) : v;
}

template <class L>
void shifted_pow_acc_impl(std::span<const double> u, double shift, double e,
                          double c, bool acc, std::span<double> out) noexcept {
    const PowPlan pl = plan_pow(e);
    const std::size_t n = u.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        const auto vs = L::set1(shift), vc = L::set1(c);
        for (; i + L::width <= n; i += L::width)
            L::store(out.data() + i,
                     shifted_pow_one<L>(pl, L::load(u.data() + i), vs, vc,
                                        L::load(out.data() + i), acc));
    }
    for (; i < n; ++i)
        out[i] = shifted_pow_one<ScalarLane>(pl, u[i], shift, c, out[i], acc);
}

template <class L>
inline typename L::reg trunc_pow_one(const PowPlan& p1, const PowPlan& p2,
                                     typename L::reg u, typename L::reg cap,
                                     typename L::reg c) noexcept {
    auto m = L::min(u, cap);
    return L::mul(c, L::mul(pow_apply<L>(p1, m), pow_apply<L>(p2, u)));
}

template <class L>
void trunc_pow_acc_impl(std::span<const double> u, double cap, double e1,
                        double e2, double c, std::span<double> out) noexcept {
    const PowPlan p1 = plan_pow(e1), p2 = plan_pow(e2);
    const std::size_t n = u.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        const auto vcap = L::set1(cap), vc = L::set1(c);
        for (; i + L::width <= n; i += L::width)
            L::store(out.data() + i,
                     L::add(L::load(out.data() + i),
                            trunc_pow_one<L>(p1, p2, L::load(u.data() + i), vcap, vc)));
    }
    for (; i < n; ++i)
        out[i] += trunc_pow_one<ScalarLane>(p1, p2, u[i], cap, c);
}

template <class L>
inline typename L::reg trunc_pow_deriv_one(const PowPlan& plo, const PowPlan& phi,
                                           typename L::reg u, typename L::reg cap,
                                           typename L::reg clo, typename L::reg chi,
                                           bool finite_cap) noexcept {
    auto lo = L::mul(clo, pow_apply<L>(plo, u));
    if (!finite_cap)
        return lo;
    auto hi = L::mul(chi, pow_apply<L>(phi, u));
    return L::select_lt(u, cap, lo, hi);
}

template <class L>
void trunc_pow_deriv_acc_impl(std::span<const double> u, double cap, double q,
                              double p, double c, std::span<double> out) noexcept {
    const bool finite_cap = std::isfinite(cap);
    const PowPlan plo = plan_pow(q - 1.0), phi = plan_pow(p - 2.0);
    const double clo = c * q;
    const double chi = finite_cap ? c * (p - 1.0) * std::pow(cap, q - p + 1.0) : 0.0;
    const std::size_t n = u.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        const auto vcap = L::set1(cap), vclo = L::set1(clo), vchi = L::set1(chi);
        for (; i + L::width <= n; i += L::width)
            L::store(out.data() + i,
                     L::add(L::load(out.data() + i),
                            trunc_pow_deriv_one<L>(plo, phi, L::load(u.data() + i),
                                                   vcap, vclo, vchi, finite_cap)));
    }
    for (; i < n; ++i)
        out[i] += trunc_pow_deriv_one<ScalarLane>(plo, phi, u[i], cap, clo, chi,
                                                  finite_cap);
}

template <class L>
void slopes_impl(std::span<const double> u_ext, std::span<const double> inv_h,
                 std::span<double> s) noexcept {
    const std::size_t n = inv_h.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        for (; i + L::width <= n; i += L::width)
            L::store(s.data() + i,
                     L::mul(L::sub(L::load(u_ext.data() + i + 1), L::load(u_ext.data() + i)),
                            L::load(inv_h.data() + i)));
    }
    for (; i < n; ++i)
        s[i] = (u_ext[i + 1] - u_ext[i]) * inv_h[i];
}

template <class L>
inline typename L::reg flux_one(const PowPlan& pl, typename L::reg s,
                                typename L::reg eta2) noexcept {
    auto b = L::add(L::mul(s, s), eta2);
    return L::mul(pow_apply<L>(pl, b), s);
}

template <class L>
void flux_impl(std::span<const double> s, double p, double eta,
               std::span<double> f) noexcept {
    const PowPlan pl = plan_pow((p - 2.0) / 2.0);
    const double eta2 = eta * eta;
    const std::size_t n = s.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        const auto ve = L::set1(eta2);
        for (; i + L::width <= n; i += L::width)
            L::store(f.data() + i, flux_one<L>(pl, L::load(s.data() + i), ve));
    }
    for (; i < n; ++i)
        f[i] = flux_one<ScalarLane>(pl, s[i], eta2);
}

template <class L>
inline typename L::reg flux_deriv_one(const PowPlan& pl, typename L::reg s,
                                      typename L::reg eta2, typename L::reg pm1) noexcept {
    auto s2 = L::mul(s, s);
    auto b = L::add(s2, eta2);
    return L::mul(pow_apply<L>(pl, b), L::add(L::mul(pm1, s2), eta2));
}

template <class L>
void flux_deriv_impl(std::span<const double> s, double p, double eta,
                     std::span<double> df) noexcept {
    if (p == 2.0) {
        for (std::size_t k = 0; k < s.size(); ++k)
            df[k] = 1.0;
        return;
    }
    const PowPlan pl = plan_pow((p - 4.0) / 2.0);
    const double eta2 = eta * eta;
    const std::size_t n = s.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        const auto ve = L::set1(eta2), vp = L::set1(p - 1.0);
        for (; i + L::width <= n; i += L::width)
            L::store(df.data() + i, flux_deriv_one<L>(pl, L::load(s.data() + i), ve, vp));
    }
    for (; i < n; ++i)
        df[i] = flux_deriv_one<ScalarLane>(pl, s[i], eta2, p - 1.0);
}

template <class L>
void flux_divergence_impl(std::span<const double> f, std::span<const double> inv_hc,
                          std::span<double> out) noexcept {
    const std::size_t n = inv_hc.size();
    std::size_t i = 0;
    if constexpr (L::width > 1) {
        for (; i + L::width <= n; i += L::width)
            L::store(out.data() + i,
                     L::mul(L::sub(L::load(f.data() + i), L::load(f.data() + i + 1)),
                            L::load(inv_hc.data() + i)));
    }
    for (; i < n; ++i)
        out[i] = (f[i] - f[i + 1]) * inv_hc[i];
}

// Table of kernel entry points for one backend.
struct KernelTable {
    double (*max_val)(std::span<const double>) noexcept;
    double (*min_val)(std::span<const double>) noexcept;
    double (*max_abs)(std::span<const double>) noexcept;
    double (*dot_w)(std::span<const double>, std::span<const double>,
                    std::span<const double>) noexcept;
    double (*sum_abs_pow_w)(std::span<const double>, std::span<const double>,
                            double) noexcept;
    void (*axpy)(double, std::span<const double>, std::span<double>) noexcept;
    void (*shifted_pow_acc)(std::span<const double>, double, double, double, bool,
                            std::span<double>) noexcept;
    void (*trunc_pow_acc)(std::span<const double>, double, double, double, double,
                          std::span<double>) noexcept;
    void (*trunc_pow_deriv_acc)(std::span<const double>, double, double, double,
                                double, std::span<double>) noexcept;
    void (*slopes)(std::span<const double>, std::span<const double>,
                   std::span<double>) noexcept;
    void (*flux)(std::span<const double>, double, double, std::span<double>) noexcept;
    void (*flux_deriv)(std::span<const double>, double, double,
                       std::span<double>) noexcept;
    void (*flux_divergence)(std::span<const double>, std::span<const double>,
                            std::span<double>) noexcept;
};

template <class L>
constexpr KernelTable make_table() noexcept {
    return KernelTable{
        &max_val_impl<L>,
        &min_val_impl<L>,
        &max_abs_impl<L>,
        &dot_w_impl<L>,
        &sum_abs_pow_w_impl<L>,
        &axpy_impl<L>,
        &shifted_pow_acc_impl<L>,
        &trunc_pow_acc_impl<L>,
        &trunc_pow_deriv_acc_impl<L>,
        &slopes_impl<L>,
        &flux_impl<L>,
        &flux_deriv_impl<L>,
        &flux_divergence_impl<L>,
    };
}

const KernelTable& scalar_table() noexcept;
const KernelTable* avx2_table() noexcept; // nullptr when not compiled in

} // namespace plb::kern::detail
