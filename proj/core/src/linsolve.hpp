#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gcoup::detail {

// Gaussian elimination with partial pivoting on a dense square system.
// Returns false when a pivot falls below eps, which callers treat as
// "singular, skip this candidate" rather than an error.
inline bool solve_linear(std::vector<std::vector<double>> a, std::vector<double> rhs,
                         std::vector<double>& out, double eps = 1e-12) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) <= eps) return false;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * out[c];
        out[i] = s / a[i][i];
    }
    return true;
}

}  // namespace gcoup::detail
