#pragma once

#include <cstddef>
#include <vector>

#include "relans/rational.hpp"

namespace relans::gf {

// Small dense linear algebra over a prime field F_p, p a small prime. Entries
// are ints in [0, p). Used only for dual polar geometry, where p is 2 or 3.

using Vec = std::vector<int>;
using Mat = std::vector<Vec>;

inline int norm(int a, int p) {
    a %= p;
    return a < 0 ? a + p : a;
}

inline int inv(int a, int p) {
    a = norm(a, p);
    for (int x = 1; x < p; ++x)
        if (a * x % p == 1) return x;
    throw std::runtime_error("gf::inv: not invertible");
}

// In-place reduced row echelon form; returns rank. Zero rows are dropped.
inline std::size_t rref(Mat& m, int p) {
    if (m.empty()) return 0;
    const std::size_t nc = m.front().size();
    std::size_t pr = 0;
    for (std::size_t c = 0; c < nc && pr < m.size(); ++c) {
        std::size_t r = pr;
        while (r < m.size() && m[r][c] == 0) ++r;
        if (r == m.size()) continue;
        std::swap(m[pr], m[r]);
        const int pi = inv(m[pr][c], p);
        for (auto& x : m[pr]) x = x * pi % p;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == pr || m[i][c] == 0) continue;
            const int f = m[i][c];
            for (std::size_t j = 0; j < nc; ++j) m[i][j] = norm(m[i][j] - f * m[pr][j], p);
        }
        ++pr;
    }
    m.resize(pr);
    return pr;
}

inline Mat canonical_basis(Mat rows, int p) {
    rref(rows, p);
    return rows;
}

inline std::size_t dim(const Mat& canonical) { return canonical.size(); }

inline Mat sum(const Mat& a, const Mat& b, int p) {
    Mat stacked = a;
    stacked.insert(stacked.end(), b.begin(), b.end());
    return canonical_basis(std::move(stacked), p);
}

inline Mat nullspace(Mat m, int p, std::size_t nc) {
    rref(m, p);
    std::vector<std::size_t> pivot_col;
    std::vector<bool> is_pivot(nc, false);
    for (const auto& row : m) {
        std::size_t c = 0;
        while (c < nc && row[c] == 0) ++c;
        pivot_col.push_back(c);
        is_pivot[c] = true;
    }
    Mat basis;
    for (std::size_t f = 0; f < nc; ++f) {
        if (is_pivot[f]) continue;
        Vec v(nc, 0);
        v[f] = 1;
        for (std::size_t k = 0; k < m.size(); ++k) v[pivot_col[k]] = norm(-m[k][f], p);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Intersection of two row spaces: solve a^T u = b^T w by taking the nullspace
// of [a^T | -b^T] and reading off the a-part combinations.
inline Mat intersect(const Mat& a, const Mat& b, int p) {
    if (a.empty() || b.empty()) return {};
    const std::size_t nc = a.front().size();
    const std::size_t na = a.size(), nb = b.size();
    Mat sys(nc, Vec(na + nb, 0));
    for (std::size_t j = 0; j < nc; ++j) {
        for (std::size_t i = 0; i < na; ++i) sys[j][i] = a[i][j];
        for (std::size_t i = 0; i < nb; ++i) sys[j][na + i] = norm(-b[i][j], p);
    }
    Mat combos = nullspace(std::move(sys), p, na + nb);
    Mat rows;
    for (const auto& combo : combos) {
        Vec v(nc, 0);
        for (std::size_t i = 0; i < na; ++i) {
            if (combo[i] == 0) continue;
            for (std::size_t j = 0; j < nc; ++j) v[j] = norm(v[j] + combo[i] * a[i][j], p);
        }
        rows.push_back(std::move(v));
    }
    return canonical_basis(std::move(rows), p);
}

inline bool contains(const Mat& canonical, const Mat& sub, int p) {
    Mat joined = sum(canonical, sub, p);
    return joined.size() == canonical.size();
}

}  // namespace relans::gf
