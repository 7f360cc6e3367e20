#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "tmfkit/algebra/integer.hpp"

namespace tmfkit {

using IntVector = std::vector<Integer>;
using IntMatrix = std::vector<IntVector>; // list of rows

namespace detail {

// Row operation on a pair of rows so that row a ends with gcd at column c and row b with 0.
inline void gcd_rows(IntVector& a, IntVector& b, std::size_t c)
{
    while (b[c] != 0) {
        const Integer q = a[c] / b[c];
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] -= q * b[k];
        }
        std::swap(a, b);
    }
}

} // namespace detail

// Row-style Hermite normal form of the lattice spanned by the rows; zero rows dropped.
// Pivots are positive and entries above each pivot are reduced into [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix rows)
{
    if (rows.empty()) {
        return rows;
    }
    const std::size_t ncols = rows.front().size();
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] != 0) {
                detail::gcd_rows(rows[r], rows[i], c);
            }
        }
        if (rows[r][c] == 0) {
            // find a later row with a nonzero entry (possible after swaps)
            std::size_t k = r + 1;
            while (k < rows.size() && rows[k][c] == 0) {
                ++k;
            }
            if (k == rows.size()) {
                continue;
            }
            std::swap(rows[r], rows[k]);
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] != 0) {
                    detail::gcd_rows(rows[r], rows[i], c);
                }
            }
        }
        if (rows[r][c] < 0) {
            for (auto& x : rows[r]) {
                x = -x;
            }
        }
        for (std::size_t i = 0; i < r; ++i) {
            Integer q = rows[i][c] / rows[r][c];
            if (mod_floor(rows[i][c], rows[r][c]) != rows[i][c] - q * rows[r][c]) {
                q -= 1;
            }
            if (q != 0) {
                for (std::size_t k = 0; k < ncols; ++k) {
                    rows[i][k] -= q * rows[r][k];
                }
            }
        }
        pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    return rows;
}

inline std::size_t rank_over_q(const IntMatrix& rows) { return hermite_normal_form(rows).size(); }

inline std::size_t rank_mod_p(IntMatrix rows, std::uint64_t p)
{
    if (rows.empty()) {
        return 0;
    }
    std::vector<std::vector<std::uint64_t>> m;
    for (const auto& row : rows) {
        std::vector<std::uint64_t> r;
        for (const auto& x : row) {
            r.push_back(static_cast<std::uint64_t>(mod_floor(x, Integer(p))));
        }
        m.push_back(std::move(r));
    }
    const std::size_t ncols = m.front().size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < ncols && rank < m.size(); ++c) {
        std::size_t piv = rank;
        while (piv < m.size() && m[piv][c] == 0) {
            ++piv;
        }
        if (piv == m.size()) {
            continue;
        }
        std::swap(m[rank], m[piv]);
        const std::uint64_t inv = invmod(m[rank][c], p);
        for (auto& x : m[rank]) {
            x = mulmod(x, inv, p);
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i != rank && m[i][c] != 0) {
                const std::uint64_t f = m[i][c];
                for (std::size_t k = 0; k < ncols; ++k) {
                    m[i][k] = (m[i][k] + p - mulmod(f, m[rank][k], p)) % p;
                }
            }
        }
        ++rank;
    }
    return rank;
}

// Basis of {x in Z^n : A x = 0} for A with n columns.
inline IntMatrix integer_kernel(const IntMatrix& a, std::size_t ncols)
{
    // Row-reduce [A^T | I]; rows whose A^T part vanishes carry kernel vectors.
    const std::size_t m = a.size();
    IntMatrix aug(ncols, IntVector(m + ncols, Integer(0)));
    for (std::size_t j = 0; j < ncols; ++j) {
        for (std::size_t i = 0; i < m; ++i) {
            aug[j][i] = a[i][j];
        }
        aug[j][m + j] = 1;
    }
    std::size_t r = 0;
    for (std::size_t c = 0; c < m && r < ncols; ++c) {
        std::size_t k = r;
        while (k < ncols && aug[k][c] == 0) {
            ++k;
        }
        if (k == ncols) {
            continue;
        }
        std::swap(aug[r], aug[k]);
        for (std::size_t i = r + 1; i < ncols; ++i) {
            if (aug[i][c] != 0) {
                detail::gcd_rows(aug[r], aug[i], c);
            }
        }
        ++r;
    }
    IntMatrix kernel;
    for (std::size_t i = r; i < ncols; ++i) {
        kernel.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(m), aug[i].end());
    }
    return hermite_normal_form(kernel);
}

// Does v lie in the Z-span of the rows?
inline bool in_lattice(const IntVector& v, const IntMatrix& rows)
{
    IntVector rem = v;
    const IntMatrix h = hermite_normal_form(rows);
    for (const auto& row : h) {
        std::size_t c = 0;
        while (row[c] == 0) {
            ++c;
        }
        if (rem[c] % row[c] != 0) {
            return false;
        }
        const Integer q = rem[c] / row[c];
        for (std::size_t k = 0; k < rem.size(); ++k) {
            rem[k] -= q * row[k];
        }
    }
    for (const auto& x : rem) {
        if (x != 0) {
            return false;
        }
    }
    return true;
}

inline bool same_lattice(const IntMatrix& a, const IntMatrix& b)
{
    return hermite_normal_form(a) == hermite_normal_form(b);
}

} // namespace tmfkit
