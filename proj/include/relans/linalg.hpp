#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "relans/matrix.hpp"
#include "relans/rational.hpp"

namespace relans {

// Elementary row operation, recorded so a caller can replay (or invert) an
// elimination. factor is the scale for kScale, the multiplier for kAddMul.
struct RowOp {
    enum Kind { kSwap, kScale, kAddMul } kind;
    std::size_t target = 0;
    std::size_t source = 0;
    Rational factor = 0;
};

struct RrefResult {
    std::size_t rank = 0;
    ExactMatrix rref;
    std::vector<std::size_t> pivot_columns;
    std::vector<RowOp> ops;  // applied in order to the input, they produce rref
};

namespace detail {

inline void apply_op(ExactMatrix& m, const RowOp& op) {
    const std::size_t c = m.cols();
    switch (op.kind) {
        case RowOp::kSwap:
            for (std::size_t j = 0; j < c; ++j) std::swap(m(op.target, j), m(op.source, j));
            break;
        case RowOp::kScale:
            for (std::size_t j = 0; j < c; ++j) m(op.target, j) *= op.factor;
            break;
        case RowOp::kAddMul:
            for (std::size_t j = 0; j < c; ++j)
                if (m(op.source, j) != 0) m(op.target, j) += op.factor * m(op.source, j);
            break;
    }
}

inline Int row_content(const ExactMatrix& m, std::size_t i) {
    Int g = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j) == 0) continue;
        g = boost::multiprecision::gcd(g, numer(m(i, j)));
        if (g == 1) break;
    }
    return g;
}

}  // namespace detail

inline void apply_ops(ExactMatrix& m, const std::vector<RowOp>& ops) {
    for (const auto& op : ops) detail::apply_op(m, op);
}

inline RowOp invert_op(const RowOp& op) {
    RowOp inv = op;
    if (op.kind == RowOp::kScale)
        inv.factor = Rational(1) / op.factor;
    else if (op.kind == RowOp::kAddMul)
        inv.factor = -op.factor;
    return inv;
}

// Undoes a recorded elimination: applying the inverted ops in reverse order
// to the rref reproduces the input matrix exactly.
inline ExactMatrix replay_inverse(const ExactMatrix& rref, const std::vector<RowOp>& ops) {
    ExactMatrix m = rref;
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) detail::apply_op(m, invert_op(*it));
    return m;
}

// Reduced row echelon form by fraction-free elimination: rows are first
// cleared to primitive integer vectors, cross-multiplication keeps them
// integral, and every updated row is divided by the gcd of its entries.
// Pivot selection is the first nonzero entry in column order, so the result
// (the unique RREF) and the recorded operations are deterministic.
inline RrefResult rank_and_rref(const ExactMatrix& input) {
    RrefResult res;
    ExactMatrix& w = res.rref;
    w = input;
    const std::size_t nr = w.rows(), nc = w.cols();
    auto scale_row = [&](std::size_t i, const Rational& f) {
        if (f == 1) return;
        res.ops.push_back({RowOp::kScale, i, i, f});
        for (std::size_t j = 0; j < nc; ++j) w(i, j) *= f;
    };
    auto addmul_row = [&](std::size_t i, std::size_t src, const Rational& f) {
        if (f == 0) return;
        res.ops.push_back({RowOp::kAddMul, i, src, f});
        for (std::size_t j = 0; j < nc; ++j)
            if (w(src, j) != 0) w(i, j) += f * w(src, j);
    };
    auto reduce_content = [&](std::size_t i) {
        const Int g = detail::row_content(w, i);
        if (g > 1) scale_row(i, Rational(1, g));
    };

    // clear denominators, divide out content
    for (std::size_t i = 0; i < nr; ++i) {
        Int l = 1;
        for (std::size_t j = 0; j < nc; ++j) l = boost::multiprecision::lcm(l, denom(w(i, j)));
        if (l != 1) scale_row(i, Rational(l));
        reduce_content(i);
    }

    std::size_t pr = 0;
    for (std::size_t c = 0; c < nc && pr < nr; ++c) {
        std::size_t r = pr;
        while (r < nr && w(r, c) == 0) ++r;
        if (r == nr) continue;
        if (r != pr) {
            res.ops.push_back({RowOp::kSwap, pr, r, 0});
            for (std::size_t j = 0; j < nc; ++j) std::swap(w(pr, j), w(r, j));
        }
        for (std::size_t i = pr + 1; i < nr; ++i) {
            if (w(i, c) == 0) continue;
            const Rational p = w(pr, c), e = w(i, c);
            scale_row(i, p);
            addmul_row(i, pr, -e);
            reduce_content(i);
        }
        res.pivot_columns.push_back(c);
        ++pr;
    }
    res.rank = pr;

    for (std::size_t k = res.rank; k-- > 0;) {
        const std::size_t c = res.pivot_columns[k];
        for (std::size_t i = 0; i < k; ++i) {
            if (w(i, c) == 0) continue;
            const Rational p = w(k, c), e = w(i, c);
            scale_row(i, p);
            addmul_row(i, k, -e);
            reduce_content(i);
        }
        if (w(k, c) != 1) scale_row(k, Rational(1) / w(k, c));
    }
    return res;
}

inline std::size_t rank(const ExactMatrix& m) { return rank_and_rref(m).rank; }

// Exact determinant by Bareiss fraction-free elimination after clearing
// denominators.
inline Rational determinant(const ExactMatrix& input) {
    require(input.rows() == input.cols(), "determinant: not square");
    const std::size_t n = input.rows();
    if (n == 0) return 1;
    ExactMatrix w = input;
    Rational denominator_product = 1;
    for (std::size_t i = 0; i < n; ++i) {
        Int l = 1;
        for (std::size_t j = 0; j < n; ++j) l = boost::multiprecision::lcm(l, denom(w(i, j)));
        if (l != 1) {
            for (std::size_t j = 0; j < n; ++j) w(i, j) *= l;
            denominator_product *= l;
        }
    }
    int sign = 1;
    Rational prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t r = k;
        while (r < n && w(r, k) == 0) ++r;
        if (r == n) return 0;
        if (r != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(w(k, j), w(r, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                w(i, j) = (w(i, j) * w(k, k) - w(i, k) * w(k, j)) / prev;
            w(i, k) = 0;
        }
        prev = w(k, k);
    }
    return Rational(sign) * w(n - 1, n - 1) / denominator_product;
}

// One exact solution of a*x = b, or nullopt when the system is inconsistent.
// Free variables are set to zero.
inline std::optional<RatVec> solve_linear(const ExactMatrix& a, const RatVec& b) {
    require(a.rows() == b.size(), "solve_linear: dimension mismatch");
    ExactMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    const RrefResult r = rank_and_rref(aug);
    for (std::size_t k = 0; k < r.rank; ++k)
        if (r.pivot_columns[k] == a.cols()) return std::nullopt;
    RatVec x(a.cols(), Rational(0));
    for (std::size_t k = 0; k < r.rank; ++k) x[r.pivot_columns[k]] = r.rref(k, a.cols());
    return x;
}

// Basis of {x : a*x = 0}, one vector per free column in ascending column
// order (deterministic).
inline std::vector<RatVec> nullspace(const ExactMatrix& a) {
    const RrefResult r = rank_and_rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : r.pivot_columns) is_pivot[c] = true;
    std::vector<RatVec> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVec v(a.cols(), Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < r.rank; ++k) v[r.pivot_columns[k]] = -r.rref(k, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Lagrange interpolation projectors P_j = prod_{i!=j} (a - theta_i I) /
// (theta_j - theta_i) for a symmetric matrix whose spectrum is exactly the
// supplied list. The minimal-polynomial identity prod_i (a - theta_i I) = 0
// is checked up front; a wrong or incomplete eigenvalue list is an error.
inline std::vector<ExactMatrix> spectral_projectors(const ExactMatrix& a,
                                                    const std::vector<Rational>& eigenvalues) {
    require(a.rows() == a.cols(), "spectral_projectors: not square");
    require(a.is_symmetric(), "spectral_projectors: matrix not symmetric");
    require(!eigenvalues.empty(), "spectral_projectors: no eigenvalues");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < eigenvalues.size(); ++j)
            require(eigenvalues[i] != eigenvalues[j], "spectral_projectors: repeated eigenvalue");

    ExactMatrix minpoly = ExactMatrix::identity(n);
    std::vector<ExactMatrix> shifted;
    shifted.reserve(eigenvalues.size());
    for (const auto& th : eigenvalues) {
        ExactMatrix s = a;
        for (std::size_t i = 0; i < n; ++i) s(i, i) -= th;
        minpoly = minpoly * s;
        shifted.push_back(std::move(s));
    }
    require(minpoly.is_zero(),
            "spectral_projectors: minimal-polynomial check failed (eigenvalue list wrong or incomplete)");

    std::vector<ExactMatrix> projectors;
    projectors.reserve(eigenvalues.size());
    for (std::size_t j = 0; j < eigenvalues.size(); ++j) {
        ExactMatrix p = ExactMatrix::identity(n);
        Rational scale = 1;
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
            if (i == j) continue;
            p = p * shifted[i];
            scale *= eigenvalues[j] - eigenvalues[i];
        }
        p *= Rational(1) / scale;
        projectors.push_back(std::move(p));
    }
    return projectors;
}

// Incrementally maintained reduced span of row vectors. Rows are kept in
// reduced echelon form sorted by pivot column, so membership tests and rank
// queries are cheap and the stored basis is canonical for the insertion
// history.
class RowSpan {
public:
    explicit RowSpan(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    std::size_t ambient_dim() const { return ambient_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<RatVec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // Residual of v after reduction against the current span.
    RatVec reduce(RatVec v) const {
        require(v.size() == ambient_, "RowSpan: ambient mismatch");
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Rational& coef = v[pivots_[k]];
            if (coef == 0) continue;
            const Rational c = coef;
            const RatVec& row = rows_[k];
            for (std::size_t j = 0; j < ambient_; ++j)
                if (row[j] != 0) v[j] -= c * row[j];
        }
        return v;
    }

    bool contains(const RatVec& v) const { return is_zero_vec(reduce(v)); }

    // Inserts v; returns the stored reduced row when the rank grew.
    std::optional<RatVec> insert_reduced(RatVec v) {
        v = reduce(std::move(v));
        std::size_t piv = ambient_;
        for (std::size_t j = 0; j < ambient_; ++j) {
            if (v[j] != 0) {
                piv = j;
                break;
            }
        }
        if (piv == ambient_) return std::nullopt;
        const Rational lead = v[piv];
        if (lead != 1)
            for (auto& x : v) x /= lead;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            Rational& coef = rows_[k][piv];
            if (coef == 0) continue;
            const Rational c = coef;
            for (std::size_t j = piv; j < ambient_; ++j)
                if (v[j] != 0) rows_[k][j] -= c * v[j];
        }
        const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), piv) - pivots_.begin();
        pivots_.insert(pivots_.begin() + pos, piv);
        rows_.insert(rows_.begin() + pos, std::move(v));
        return rows_[static_cast<std::size_t>(pos)];
    }

    bool insert(RatVec v) { return insert_reduced(std::move(v)).has_value(); }

    std::size_t insert_all(const std::vector<RatVec>& vs) {
        std::size_t grew = 0;
        for (const auto& v : vs)
            if (insert(v)) ++grew;
        return grew;
    }

private:
    std::size_t ambient_;
    std::vector<RatVec> rows_;
    std::vector<std::size_t> pivots_;
};

inline std::size_t rank_of_rows(const std::vector<RatVec>& rows, std::size_t ambient_dim) {
    RowSpan span(ambient_dim);
    span.insert_all(rows);
    return span.rank();
}

// Basis of a subspace, stored as independent vectors of a fixed ambient
// dimension. Independence is enforced at construction.
struct SubspaceBasis {
    std::size_t ambient_dim = 0;
    std::vector<RatVec> vectors;

    SubspaceBasis() = default;
    SubspaceBasis(std::size_t ambient, std::vector<RatVec> vecs)
        : ambient_dim(ambient), vectors(std::move(vecs)) {
        for (const auto& v : vectors)
            require(v.size() == ambient_dim, "SubspaceBasis: ambient mismatch");
        require(rank_of_rows(vectors, ambient_dim) == vectors.size(),
                "SubspaceBasis: vectors not linearly independent");
    }

    std::size_t dimension() const { return vectors.size(); }
};

}  // namespace relans
