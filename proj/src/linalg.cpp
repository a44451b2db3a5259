#include "plb/linalg.hpp"

#include <cmath>
#include <cstring>

namespace plb {

bool thomas_solve(const Tridiag& a, std::span<double> rhs,
                  std::vector<double>& work, double pivot_rel) {
    const int n = a.n();
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::fabs(a.diag[static_cast<size_t>(i)]));
    for (int i = 0; i + 1 < n; ++i) {
        scale = std::max(scale, std::fabs(a.sub[static_cast<size_t>(i)]));
        scale = std::max(scale, std::fabs(a.sup[static_cast<size_t>(i)]));
    }
    if (scale == 0.0)
        return false;
    const double floor = pivot_rel * scale;

    work.resize(2 * static_cast<size_t>(n));
    double* c = work.data();     // modified superdiagonal
    double* d = work.data() + n; // modified rhs

    double piv = a.diag[0];
    if (std::fabs(piv) < floor)
        return false;
    c[0] = n > 1 ? a.sup[0] / piv : 0.0;
    d[0] = rhs[0] / piv;
    for (int i = 1; i < n; ++i) {
        piv = a.diag[static_cast<size_t>(i)] -
              a.sub[static_cast<size_t>(i - 1)] * c[i - 1];
        if (std::fabs(piv) < floor || !std::isfinite(piv))
            return false;
        c[i] = i + 1 < n ? a.sup[static_cast<size_t>(i)] / piv : 0.0;
        d[i] = (rhs[static_cast<size_t>(i)] -
                a.sub[static_cast<size_t>(i - 1)] * d[i - 1]) /
               piv;
    }
    rhs[static_cast<size_t>(n - 1)] = d[n - 1];
    for (int i = n - 2; i >= 0; --i)
        rhs[static_cast<size_t>(i)] = d[i] - c[i] * rhs[static_cast<size_t>(i) + 1];
    return true;
}

namespace {

// Dense LU with partial pivoting on the (n+1) x (n+1) bordered matrix.
// Rare fallback for correction steps taken essentially at the fold.
bool dense_bordered_solve(const Tridiag& jac, std::span<const double> col,
                          std::span<const double> row, double d,
                          std::span<const double> rhs_u, double rhs_c,
                          std::span<double> du, double& dlambda) {
    const int n = jac.n();
    const int m = n + 1;
    std::vector<double> a(static_cast<size_t>(m) * m, 0.0);
    std::vector<double> b(static_cast<size_t>(m), 0.0);
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<size_t>(i) * m + static_cast<size_t>(j)];
    };
    for (int i = 0; i < n; ++i) {
        at(i, i) = jac.diag[static_cast<size_t>(i)];
        if (i > 0)
            at(i, i - 1) = jac.sub[static_cast<size_t>(i - 1)];
        if (i + 1 < n)
            at(i, i + 1) = jac.sup[static_cast<size_t>(i)];
        at(i, n) = col[static_cast<size_t>(i)];
        at(n, i) = row[static_cast<size_t>(i)];
        b[static_cast<size_t>(i)] = rhs_u[static_cast<size_t>(i)];
    }
    at(n, n) = d;
    b[static_cast<size_t>(n)] = rhs_c;

    for (int k = 0; k < m; ++k) {
        int piv = k;
        double best = std::fabs(at(k, k));
        for (int i = k + 1; i < m; ++i) {
            const double v = std::fabs(at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best))
            return false;
        if (piv != k) {
            for (int j = k; j < m; ++j)
                std::swap(at(k, j), at(piv, j));
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
        }
        const double inv = 1.0 / at(k, k);
        for (int i = k + 1; i < m; ++i) {
            const double f = at(i, k) * inv;
            if (f == 0.0)
                continue;
            for (int j = k + 1; j < m; ++j)
                at(i, j) -= f * at(k, j);
            b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(k)];
        }
    }
    for (int i = m - 1; i >= 0; --i) {
        double s = b[static_cast<size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            s -= at(i, j) * b[static_cast<size_t>(j)];
        b[static_cast<size_t>(i)] = s / at(i, i);
        if (!std::isfinite(b[static_cast<size_t>(i)]))
            return false;
    }
    for (int i = 0; i < n; ++i)
        du[static_cast<size_t>(i)] = b[static_cast<size_t>(i)];
    dlambda = b[static_cast<size_t>(n)];
    return true;
}

} // namespace

bool bordered_solve(const Tridiag& jac, std::span<const double> col,
                    std::span<const double> row, double d,
                    std::span<const double> rhs_u, double rhs_c,
                    std::span<double> du, double& dlambda) {
    const int n = jac.n();
    std::vector<double> z1(rhs_u.begin(), rhs_u.end());
    std::vector<double> z2(col.begin(), col.end());
    std::vector<double> work;
    bool ok = thomas_solve(jac, z1, work) && thomas_solve(jac, z2, work);
    if (ok) {
        double rz1 = 0.0, rz2 = 0.0;
        for (int i = 0; i < n; ++i) {
            rz1 += row[static_cast<size_t>(i)] * z1[static_cast<size_t>(i)];
            rz2 += row[static_cast<size_t>(i)] * z2[static_cast<size_t>(i)];
        }
        const double denom = d - rz2;
        const double denom_scale = std::fabs(d) + std::fabs(rz2);
        if (std::isfinite(denom) && std::fabs(denom) > 1e-13 * std::max(1.0, denom_scale)) {
            dlambda = (rhs_c - rz1) / denom;
            for (int i = 0; i < n; ++i)
                du[static_cast<size_t>(i)] =
                    z1[static_cast<size_t>(i)] - dlambda * z2[static_cast<size_t>(i)];
            return true;
        }
    }
    return dense_bordered_solve(jac, col, row, d, rhs_u, rhs_c, du, dlambda);
}

} // namespace plb
