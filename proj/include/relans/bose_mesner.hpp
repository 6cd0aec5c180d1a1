#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "relans/linalg.hpp"
#include "relans/polynomial.hpp"
#include "relans/scheme.hpp"

namespace relans {

// Bose-Mesner data of a P-polynomial scheme: eigenvalues of A_1, eigenmatrices
// P and Q, multiplicities, Krein parameters, and (lazily) the adjacency and
// idempotent matrices themselves. Idempotents are stored in the detected
// Q-polynomial ordering when one exists, in descending-eigenvalue order
// otherwise; index 0 is always the all-ones idempotent.
struct BoseMesnerData {
    int d = 0;
    Int n = 0;
    std::vector<Int> k;              // valencies, relation order
    std::vector<Rational> theta;     // eigenvalue of A_1 on E_j
    std::vector<Int> multiplicities; // m_j = rank(E_j)
    ExactMatrix P, Q;                // A_i = sum_j P(j,i) E_j ; E_j = (1/n) sum_i Q(i,j) A_i
    std::vector<std::vector<std::vector<Rational>>> krein;  // q^k_{ij}
    std::optional<std::vector<int>> q_poly_ordering;  // permutation applied to descending order
    bool q_polynomial = false;

    std::vector<ExactMatrix> A;  // adjacency matrices (lazy, see build_matrices)
    std::vector<ExactMatrix> E;  // primitive idempotents (lazy)
    bool matrices_built = false;

    Rational idempotent_entry(const Scheme& s, int j, int x, int y) const {
        return Q(static_cast<std::size_t>(s.relation(x, y)), static_cast<std::size_t>(j)) / Rational(n);
    }
};

namespace detail {

// Above this size the idempotents are assembled entrywise from Q rather than
// as Lagrange projector products; both routes are checked against each other
// in the test suite.
constexpr int kSpectralRouteLimit = 150;

inline std::vector<std::vector<std::vector<Rational>>> krein_parameters(const ExactMatrix& P,
                                                                        const ExactMatrix& Q,
                                                                        const Int& n) {
    const std::size_t dim = P.rows();
    std::vector<std::vector<std::vector<Rational>>> q(
        dim, std::vector<std::vector<Rational>>(dim, std::vector<Rational>(dim, Rational(0))));
    for (std::size_t k = 0; k < dim; ++k)
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                Rational acc = 0;
                for (std::size_t r = 0; r < dim; ++r) acc += P(k, r) * Q(r, i) * Q(r, j);
                q[k][i][j] = acc / Rational(n);
            }
    return q;
}

inline bool krein_tridiagonal(const std::vector<std::vector<std::vector<Rational>>>& krein,
                              const std::vector<int>& perm) {
    const int dp1 = static_cast<int>(perm.size());
    auto q = [&](int k, int i, int j) -> const Rational& {
        return krein[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]
                    [static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]
                    [static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])];
    };
    for (int k = 0; k < dp1; ++k)
        for (int j = 0; j < dp1; ++j)
            if (std::abs(k - j) > 1 && q(k, 1, j) != 0) return false;
    for (int j = 0; j + 1 < dp1; ++j)
        if (q(j + 1, 1, j) == 0) return false;
    return true;
}

}  // namespace detail

// True when perm (a permutation of {0..d} with perm[0] = 0) reorders the
// idempotents into a Q-polynomial ordering.
inline bool is_q_polynomial_ordering(const BoseMesnerData& bm, const std::vector<int>& perm) {
    require(static_cast<int>(perm.size()) == bm.d + 1 && perm[0] == 0,
            "is_q_polynomial_ordering: permutation must fix index 0");
    return detail::krein_tridiagonal(bm.krein, perm);
}

// Lexicographically least Q-polynomial ordering among permutations fixing
// E_0, or nullopt when none exists.
inline std::optional<std::vector<int>> detect_q_polynomial_ordering(const BoseMesnerData& bm) {
    std::vector<int> tail(static_cast<std::size_t>(bm.d));
    std::iota(tail.begin(), tail.end(), 1);
    std::vector<int> perm(static_cast<std::size_t>(bm.d + 1));
    perm[0] = 0;
    do {
        std::copy(tail.begin(), tail.end(), perm.begin() + 1);
        if (detail::krein_tridiagonal(bm.krein, perm)) return perm;
    } while (std::next_permutation(tail.begin(), tail.end()));
    return std::nullopt;
}

inline BoseMesnerData primitive_idempotents(const Scheme& s) {
    const IntersectionNumbers& in = s.intersection_numbers();
    require(in.p_polynomial, "primitive_idempotents: scheme not P-polynomial in natural ordering");
    const int d = s.d;
    BoseMesnerData bm;
    bm.d = d;
    bm.n = s.n_vertices;
    bm.k = in.k;

    // eigenvalues of A_1: integer roots of the tridiagonal intersection matrix
    std::vector<Int> sub, diag, super;
    for (int i = 1; i <= d; ++i) sub.push_back(in.c[static_cast<std::size_t>(i)]);
    for (int i = 0; i <= d; ++i) diag.push_back(in.a[static_cast<std::size_t>(i)]);
    for (int i = 0; i + 1 <= d; ++i) super.push_back(in.b[static_cast<std::size_t>(i)]);
    const IntPoly charpoly = tridiagonal_char_poly(sub, diag, super);
    std::vector<Int> roots = integer_roots(charpoly);
    require(static_cast<int>(roots.size()) == d + 1,
            "primitive_idempotents: non-integer eigenvalue of A_1 (unsupported)");
    require(roots.front() == in.k[1], "primitive_idempotents: top eigenvalue is not the valency");

    // P(j,i) = v_i(theta_j) with v the three-term recurrence A*A_i =
    // b_{i-1} A_{i-1} + a_i A_i + c_{i+1} A_{i+1}
    bm.P = ExactMatrix(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
    for (int j = 0; j <= d; ++j) {
        const Rational th(roots[static_cast<std::size_t>(j)]);
        bm.P(static_cast<std::size_t>(j), 0) = 1;
        if (d >= 1) bm.P(static_cast<std::size_t>(j), 1) = th;
        for (int i = 1; i < d; ++i) {
            const Rational vi = bm.P(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
            const Rational vim1 = bm.P(static_cast<std::size_t>(j), static_cast<std::size_t>(i - 1));
            bm.P(static_cast<std::size_t>(j), static_cast<std::size_t>(i + 1)) =
                ((th - Rational(in.a[static_cast<std::size_t>(i)])) * vi -
                 Rational(in.b[static_cast<std::size_t>(i - 1)]) * vim1) /
                Rational(in.c[static_cast<std::size_t>(i + 1)]);
        }
        Rational rowsum = 0;
        for (int i = 0; i <= d; ++i) rowsum += bm.P(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
        require(rowsum == (j == 0 ? Rational(bm.n) : Rational(0)),
                "primitive_idempotents: eigenmatrix row-sum identity failed");
    }

    // multiplicities m_j = |X| / sum_i P(j,i)^2 / k_i
    bm.multiplicities.resize(static_cast<std::size_t>(d + 1));
    Int msum = 0;
    for (int j = 0; j <= d; ++j) {
        Rational denom_sum = 0;
        for (int i = 0; i <= d; ++i) {
            const Rational& pji = bm.P(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
            denom_sum += pji * pji / Rational(in.k[static_cast<std::size_t>(i)]);
        }
        const Rational mj = Rational(bm.n) / denom_sum;
        require(is_integer(mj), "primitive_idempotents: non-integer multiplicity");
        bm.multiplicities[static_cast<std::size_t>(j)] = numer(mj);
        msum += numer(mj);
    }
    require(msum == bm.n, "primitive_idempotents: multiplicities do not sum to |X|");

    // Q = |X| P^{-1}, exact
    {
        ExactMatrix aug(static_cast<std::size_t>(d + 1), 2 * static_cast<std::size_t>(d + 1));
        for (int i = 0; i <= d; ++i) {
            for (int j = 0; j <= d; ++j)
                aug(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                    bm.P(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            aug(static_cast<std::size_t>(i), static_cast<std::size_t>(d + 1 + i)) = Rational(bm.n);
        }
        const RrefResult r = rank_and_rref(aug);
        require(r.rank == static_cast<std::size_t>(d + 1), "primitive_idempotents: P singular");
        bm.Q = ExactMatrix(static_cast<std::size_t>(d + 1), static_cast<std::size_t>(d + 1));
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j)
                bm.Q(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) =
                    r.rref(static_cast<std::size_t>(j), static_cast<std::size_t>(d + 1 + i));
        // note: solving P*Q = nI row-wise yields Q with rows indexed by relation
    }

    bm.krein = detail::krein_parameters(bm.P, bm.Q, bm.n);

    // reorder idempotents into the canonical Q-polynomial ordering if any
    if (const auto perm = detect_q_polynomial_ordering(bm)) {
        bm.q_polynomial = true;
        bm.q_poly_ordering = perm;
        const auto& pi = *perm;
        bool identity = true;
        for (int t = 0; t <= d; ++t)
            if (pi[static_cast<std::size_t>(t)] != t) identity = false;
        if (!identity) {
            ExactMatrix newP = bm.P, newQ = bm.Q;
            std::vector<Int> newm = bm.multiplicities;
            for (int t = 0; t <= d; ++t) {
                const std::size_t src = static_cast<std::size_t>(pi[static_cast<std::size_t>(t)]);
                newm[static_cast<std::size_t>(t)] = bm.multiplicities[src];
                for (int i = 0; i <= d; ++i) {
                    newP(static_cast<std::size_t>(t), static_cast<std::size_t>(i)) =
                        bm.P(src, static_cast<std::size_t>(i));
                    newQ(static_cast<std::size_t>(i), static_cast<std::size_t>(t)) =
                        bm.Q(static_cast<std::size_t>(i), src);
                }
            }
            bm.P = std::move(newP);
            bm.Q = std::move(newQ);
            bm.multiplicities = std::move(newm);
            bm.krein = detail::krein_parameters(bm.P, bm.Q, bm.n);
        }
    }

    bm.theta.resize(static_cast<std::size_t>(d + 1));
    for (int j = 0; j <= d; ++j)
        bm.theta[static_cast<std::size_t>(j)] = bm.P(static_cast<std::size_t>(j), 1);

    // algebraic sanity in Bose-Mesner coordinates: E_j E_k = delta_jk E_j and
    // A_1 E_j = theta_j E_j, via the p^k_{ij} structure constants
    const auto& p = s.intersection_numbers().p;
    for (int j = 0; j <= d; ++j) {
        for (int kk = 0; kk <= d; ++kk) {
            for (int r = 0; r <= d; ++r) {
                Rational acc = 0;
                for (int i = 0; i <= d; ++i) {
                    if (p[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)].empty()) continue;
                    for (int t = 0; t <= d; ++t) {
                        const Int& pc = p[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(t)];
                        if (pc == 0) continue;
                        acc += bm.Q(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) *
                               bm.Q(static_cast<std::size_t>(t), static_cast<std::size_t>(kk)) * Rational(pc);
                    }
                }
                acc /= Rational(bm.n) * Rational(bm.n);
                const Rational expected =
                    (j == kk) ? bm.Q(static_cast<std::size_t>(r), static_cast<std::size_t>(j)) / Rational(bm.n)
                              : Rational(0);
                require(acc == expected, "primitive_idempotents: idempotent algebra check failed");
            }
        }
    }
    return bm;
}

// Materializes the adjacency matrices and primitive idempotents. Small
// schemes go through the Lagrange projectors of A_1; larger ones assemble
// E_j entrywise from Q (the two routes agree, which the tests pin down).
inline void build_matrices(BoseMesnerData& bm, const Scheme& s) {
    if (bm.matrices_built) return;
    const std::size_t n = static_cast<std::size_t>(s.n_vertices);
    bm.A.assign(static_cast<std::size_t>(bm.d + 1), ExactMatrix(n, n));
    for (int x = 0; x < s.n_vertices; ++x)
        for (int y = 0; y < s.n_vertices; ++y)
            bm.A[static_cast<std::size_t>(s.relation(x, y))](static_cast<std::size_t>(x),
                                                             static_cast<std::size_t>(y)) = 1;
    if (s.n_vertices <= detail::kSpectralRouteLimit) {
        bm.E = spectral_projectors(bm.A[1], bm.theta);
    } else {
        bm.E.assign(static_cast<std::size_t>(bm.d + 1), ExactMatrix(n, n));
        for (int j = 0; j <= bm.d; ++j)
            for (int x = 0; x < s.n_vertices; ++x)
                for (int y = 0; y < s.n_vertices; ++y)
                    bm.E[static_cast<std::size_t>(j)](static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
                        bm.idempotent_entry(s, j, x, y);
    }
    bm.matrices_built = true;
}

// The pair (P, Q); PQ = |X| I is re-checked on every call.
inline std::pair<ExactMatrix, ExactMatrix> eigenmatrices(const BoseMesnerData& bm) {
    ExactMatrix prod = bm.P * bm.Q;
    ExactMatrix expected = ExactMatrix::identity(static_cast<std::size_t>(bm.d + 1)) * Rational(bm.n);
    require(prod == expected, "eigenmatrices: PQ != |X| I");
    return {bm.P, bm.Q};
}

inline bool formal_self_duality(const BoseMesnerData& bm) { return bm.P == bm.Q; }

}  // namespace relans
