// Compiled with -mavx2 (see src/CMakeLists.txt); entered only after the
// runtime cpuid check in kernels.cpp.

#include "kernels_impl.hpp"

#ifdef PLB_HAVE_AVX2
#include <immintrin.h>

namespace plb::kern::detail {

struct Avx2Lane {
    using reg = __m256d;
    static constexpr std::size_t width = 4;
    static reg load(const double* p) noexcept { return _mm256_loadu_pd(p); }
    static void store(double* p, reg v) noexcept { _mm256_storeu_pd(p, v); }
    static reg set1(double v) noexcept { return _mm256_set1_pd(v); }
    static reg add(reg a, reg b) noexcept { return _mm256_add_pd(a, b); }
    static reg sub(reg a, reg b) noexcept { return _mm256_sub_pd(a, b); }
    static reg mul(reg a, reg b) noexcept { return _mm256_mul_pd(a, b); }
    static reg div(reg a, reg b) noexcept { return _mm256_div_pd(a, b); }
    static reg sqrt(reg a) noexcept { return _mm256_sqrt_pd(a); }
    static reg min(reg a, reg b) noexcept { return _mm256_min_pd(a, b); }
    static reg max(reg a, reg b) noexcept { return _mm256_max_pd(a, b); }
    static reg abs(reg a) noexcept {
        const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
        return _mm256_and_pd(a, mask);
    }
    static reg select_lt(reg a, reg b, reg x, reg y) noexcept {
        return _mm256_blendv_pd(y, x, _mm256_cmp_pd(a, b, _CMP_LT_OQ));
    }
    static reg pow_lane(reg x, double e) noexcept {
        alignas(32) double tmp[4];
        _mm256_store_pd(tmp, x);
        for (int k = 0; k < 4; ++k)
            tmp[k] = std::pow(tmp[k], e);
        return _mm256_load_pd(tmp);
    }
};

const KernelTable* avx2_table() noexcept {
    static const KernelTable t = make_table<Avx2Lane>();
    return &t;
}

} // namespace plb::kern::detail

#else

namespace plb::kern::detail {
const KernelTable* avx2_table() noexcept { return nullptr; }
} // namespace plb::kern::detail

#endif
