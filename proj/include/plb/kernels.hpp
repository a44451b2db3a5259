#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel arithmetic kernels. Every kernel has a scalar reference
// implementation and an AVX2 variant; the active backend is selected at
// runtime (cpuid, PLB_KERNELS env var, or set_backend). Elementwise kernels
// produce bit-identical results on both backends: the two are instantiations
// of one template over a lane abstraction, and fractional powers with
// quarter-integer exponents go through identical mul/sqrt chains. Reduction
// kernels differ only in summation order.

namespace plb::kern {

enum class Backend { scalar, avx2 };

Backend active() noexcept;
Backend best_supported() noexcept;
bool set_backend(Backend b) noexcept; // false if unsupported on this CPU
std::string_view backend_name(Backend b) noexcept;

// ---- reductions -----------------------------------------------------------

double max_val(std::span<const double> x) noexcept;
double min_val(std::span<const double> x) noexcept;
double max_abs(std::span<const double> x) noexcept;

/// sum_i w_i * x_i * y_i
double dot_w(std::span<const double> x, std::span<const double> y,
             std::span<const double> w) noexcept;

/// sum_i w_i * |x_i|^e
double sum_abs_pow_w(std::span<const double> x, std::span<const double> w,
                     double e) noexcept;

// ---- elementwise ----------------------------------------------------------

/// y_i += a * x_i
void axpy(double a, std::span<const double> x, std::span<double> y) noexcept;

/// out_i = (acc ? out_i : 0) + c * (u_i + shift)^e.
/// For non-integer e the base u_i + shift must be nonnegative.
void shifted_pow_acc(std::span<const double> u, double shift, double e,
                     double c, bool acc, std::span<double> out) noexcept;

/// out_i += c * min(u_i, cap)^e1 * u_i^e2   (cap may be +infinity)
void trunc_pow_acc(std::span<const double> u, double cap, double e1, double e2,
                   double c, std::span<double> out) noexcept;

/// out_i += c * d/du [ min(u, cap)^{q-p+1} u^{p-1} ] evaluated at u_i:
/// q u^{q-1} below the cap, cap^{q-p+1} (p-1) u^{p-2} above.
void trunc_pow_deriv_acc(std::span<const double> u, double cap, double q,
                         double p, double c, std::span<double> out) noexcept;

/// s_j = (u_ext[j+1] - u_ext[j]) * inv_h[j], j = 0..inv_h.size()-1
void slopes(std::span<const double> u_ext, std::span<const double> inv_h,
            std::span<double> s) noexcept;

/// F_j = (s_j^2 + eta^2)^{(p-2)/2} * s_j
void flux(std::span<const double> s, double p, double eta,
          std::span<double> f) noexcept;

/// dF_j = (s_j^2 + eta^2)^{(p-4)/2} * ((p-1) s_j^2 + eta^2)
void flux_deriv(std::span<const double> s, double p, double eta,
                std::span<double> df) noexcept;

/// out_i = -(f[i+1] - f[i]) * inv_hc[i], i = 0..inv_hc.size()-1
void flux_divergence(std::span<const double> f, std::span<const double> inv_hc,
                     std::span<double> out) noexcept;

} // namespace plb::kern
