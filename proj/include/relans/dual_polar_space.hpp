#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "relans/gf.hpp"

namespace relans::dual_polar {

// Geometry of the symplectic dual polar space C_d(q): maximal totally
// isotropic subspaces of F_q^{2d} under the standard alternating form
// <x,y> = sum_i (x_i y_{d+i} - x_{d+i} y_i).

struct Space {
    int d = 0;
    int q = 0;
    std::vector<gf::Mat> vertices;        // canonical RREF bases, lex sorted
    std::map<std::vector<int>, int> index;  // flattened basis -> vertex id
};

inline int form_value(const gf::Vec& x, const gf::Vec& y, int d, int p) {
    int acc = 0;
    for (int i = 0; i < d; ++i)
        acc = gf::norm(acc + x[i] * y[d + i] - x[d + i] * y[i], p);
    return acc;
}

inline bool is_totally_isotropic(const gf::Mat& rows, int d, int p) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = i + 1; j < rows.size(); ++j)
            if (form_value(rows[i], rows[j], d, p) != 0) return false;
    return true;
}

inline std::vector<int> flatten(const gf::Mat& rows) {
    std::vector<int> flat;
    for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
    return flat;
}

// Enumerates all d-dimensional totally isotropic subspaces by generating
// every rank-d RREF matrix (pivot-column set plus free entries) and keeping
// the isotropic ones. Vertices are sorted by flattened basis, which fixes the
// canonical vertex numbering.
inline Space enumerate_space(int d, int q) {
    require(d >= 1, "dual polar: d >= 1 required");
    require(q == 2 || q == 3, "dual polar: only prime q in {2,3} supported");
    Space sp;
    sp.d = d;
    sp.q = q;
    const int nc = 2 * d;

    std::vector<int> pivots(static_cast<std::size_t>(d));
    // iterate pivot-column combinations in lex order
    for (int mask = 0; mask < (1 << nc); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != d) continue;
        int t = 0;
        for (int c = 0; c < nc; ++c)
            if (mask & (1 << c)) pivots[static_cast<std::size_t>(t++)] = c;

        // free positions: (row r, col c) with c > pivots[r] and c not a pivot
        std::vector<std::pair<int, int>> free_pos;
        for (int r = 0; r < d; ++r)
            for (int c = pivots[static_cast<std::size_t>(r)] + 1; c < nc; ++c)
                if (!(mask & (1 << c))) free_pos.emplace_back(r, c);

        std::vector<int> assign(free_pos.size(), 0);
        while (true) {
            gf::Mat rows(static_cast<std::size_t>(d), gf::Vec(static_cast<std::size_t>(nc), 0));
            for (int r = 0; r < d; ++r)
                rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(pivots[static_cast<std::size_t>(r)])] = 1;
            for (std::size_t i = 0; i < free_pos.size(); ++i)
                rows[static_cast<std::size_t>(free_pos[i].first)][static_cast<std::size_t>(free_pos[i].second)] =
                    assign[i];
            if (is_totally_isotropic(rows, d, q)) sp.vertices.push_back(std::move(rows));
            // next mixed-radix assignment
            std::size_t pos = 0;
            while (pos < assign.size() && assign[pos] == q - 1) assign[pos++] = 0;
            if (pos == assign.size()) break;
            ++assign[pos];
        }
    }

    std::sort(sp.vertices.begin(), sp.vertices.end(),
              [](const gf::Mat& a, const gf::Mat& b) { return flatten(a) < flatten(b); });
    for (std::size_t i = 0; i < sp.vertices.size(); ++i)
        sp.index[flatten(sp.vertices[i])] = static_cast<int>(i);
    return sp;
}

inline int distance(const Space& sp, int a, int b) {
    const gf::Mat meet = gf::intersect(sp.vertices[static_cast<std::size_t>(a)],
                                       sp.vertices[static_cast<std::size_t>(b)], sp.q);
    return sp.d - static_cast<int>(meet.size());
}

// Perp of a subspace with respect to the alternating form: the solution space
// of <u, x> = 0 for all basis vectors u.
inline gf::Mat perp(const Space& sp, const gf::Mat& u) {
    const std::size_t nc = static_cast<std::size_t>(2 * sp.d);
    if (u.empty()) {
        gf::Mat full;
        for (std::size_t i = 0; i < nc; ++i) {
            gf::Vec e(nc, 0);
            e[i] = 1;
            full.push_back(std::move(e));
        }
        return full;
    }
    gf::Mat constraints;
    for (const auto& row : u) {
        gf::Vec cons(nc, 0);
        for (std::size_t c = 0; c < nc; ++c) {
            // coefficient of x_c in <row, x>
            const int i = static_cast<int>(c);
            int coef = 0;
            if (i < sp.d)
                coef = gf::norm(-row[static_cast<std::size_t>(i + sp.d)], sp.q);
            else
                coef = row[static_cast<std::size_t>(i - sp.d)];
            cons[c] = coef;
        }
        constraints.push_back(std::move(cons));
    }
    return gf::nullspace(std::move(constraints), sp.q, nc);
}

inline int vertex_of(const Space& sp, const gf::Mat& rows) {
    const auto it = sp.index.find(flatten(gf::canonical_basis(rows, sp.q)));
    require(it != sp.index.end(), "dual polar: subspace is not a vertex");
    return it->second;
}

}  // namespace relans::dual_polar
