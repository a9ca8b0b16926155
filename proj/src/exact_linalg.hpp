#pragma once

#include "hem/rational.hpp"

#include <optional>
#include <vector>

namespace hem::detail {

using QMatrix = std::vector<std::vector<Rational>>;
using ZMatrix = std::vector<std::vector<Integer>>;

/// Row echelon in place; returns the rank.
inline int row_reduce(QMatrix& m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && sgn(m[piv][c]) == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

inline int rank(QMatrix m) { return row_reduce(m); }

/// Solves the square system M x = rhs; nullopt when singular.
inline std::optional<std::vector<Rational>> solve(QMatrix m, std::vector<Rational> rhs) {
    const std::size_t n = m.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(m[piv][c]) == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(m[piv], m[c]);
        std::swap(rhs[piv], rhs[c]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || sgn(m[i][c]) == 0) continue;
            Rational f = m[i][c] / m[c][c];
            for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
            rhs[i] -= f * rhs[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
    return rhs;
}

/// Fraction-free Bareiss determinant.
inline Integer det(ZMatrix m) {
    const std::size_t n = m.size();
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(m[k][k]) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && sgn(m[piv][k]) == 0) ++piv;
            if (piv == n) return 0;
            std::swap(m[piv], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

inline Integer det_small(const std::vector<std::vector<long>>& a) {
    ZMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (long v : a[i]) m[i].emplace_back(v);
    return det(std::move(m));
}

/// Exact determinant of a small integer matrix with int64 entries, by Bareiss in __int128
/// when entries are small enough, otherwise through GMP.
inline Integer det_int(const std::vector<std::vector<long>>& a) {
    const std::size_t n = a.size();
    long maxabs = 0;
    for (const auto& row : a)
        for (long v : row) maxabs = std::max(maxabs, v < 0 ? -v : v);
    if (n <= 8 && maxabs <= 64) {
        std::vector<std::vector<__int128>> m(n, std::vector<__int128>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        __int128 prev = 1;
        int sign = 1;
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (m[k][k] == 0) {
                std::size_t piv = k + 1;
                while (piv < n && m[piv][k] == 0) ++piv;
                if (piv == n) return 0;
                std::swap(m[piv], m[k]);
                sign = -sign;
            }
            for (std::size_t i = k + 1; i < n; ++i)
                for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            prev = m[k][k];
        }
        __int128 d = sign * (n ? m[n - 1][n - 1] : 1);
        return Integer(std::to_string(static_cast<long long>(d)));
    }
    return det_small(a);
}

} // namespace hem::detail
