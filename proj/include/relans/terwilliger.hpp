#pragma once

#include <optional>
#include <sstream>
#include <vector>

#include "relans/bose_mesner.hpp"
#include "relans/linalg.hpp"
#include "relans/scheme.hpp"

namespace relans {

// Dual Bose-Mesner data at a base vertex: shell structure, the diagonal
// matrices E_i* (shell indicators) and A_i* with (A_i*)_xx = |X| (E_i)_{u0 x},
// and the dual eigenvalue sequence theta*.
struct TerwilligerContext {
    const Scheme* scheme = nullptr;
    const BoseMesnerData* bm = nullptr;
    BasePointShells base;
    std::vector<Rational> theta_star;  // value of A_1* on shell i, Q-polynomial ordering
};

inline TerwilligerContext dual_matrices(const Scheme& s, const BoseMesnerData& bm, int u0) {
    TerwilligerContext ctx;
    ctx.scheme = &s;
    ctx.bm = &bm;
    ctx.base = shells(s, u0);
    ctx.theta_star.resize(static_cast<std::size_t>(s.d + 1));
    for (int i = 0; i <= s.d; ++i)
        ctx.theta_star[static_cast<std::size_t>(i)] = bm.Q(static_cast<std::size_t>(i), 1);
    return ctx;
}

inline ExactMatrix estar_matrix(const TerwilligerContext& ctx, int i) {
    const std::size_t n = static_cast<std::size_t>(ctx.scheme->n_vertices);
    ExactMatrix m(n, n);
    for (int x : ctx.base.shells[static_cast<std::size_t>(i)])
        m(static_cast<std::size_t>(x), static_cast<std::size_t>(x)) = 1;
    return m;
}

inline ExactMatrix astar_matrix(const TerwilligerContext& ctx, int i) {
    const std::size_t n = static_cast<std::size_t>(ctx.scheme->n_vertices);
    ExactMatrix m(n, n);
    for (int x = 0; x < ctx.scheme->n_vertices; ++x)
        m(static_cast<std::size_t>(x), static_cast<std::size_t>(x)) =
            ctx.bm->Q(static_cast<std::size_t>(ctx.base.shell_of[static_cast<std::size_t>(x)]),
                      static_cast<std::size_t>(i));
    return m;
}

inline RatVec estar_apply(const TerwilligerContext& ctx, int i, const RatVec& v) {
    RatVec out(v.size(), Rational(0));
    for (int x : ctx.base.shells[static_cast<std::size_t>(i)])
        out[static_cast<std::size_t>(x)] = v[static_cast<std::size_t>(x)];
    return out;
}

inline RatVec adjacency_apply(const Scheme& s, const RatVec& v) {
    RatVec out(v.size(), Rational(0));
    for (int x = 0; x < s.n_vertices; ++x) {
        Rational acc = 0;
        for (int y : s.adjacency[static_cast<std::size_t>(x)])
            if (v[static_cast<std::size_t>(y)] != 0) acc += v[static_cast<std::size_t>(y)];
        out[static_cast<std::size_t>(x)] = std::move(acc);
    }
    return out;
}

// All products A_r v in one pass over the relation table.
inline std::vector<RatVec> relation_bucket_apply(const Scheme& s, const RatVec& v) {
    std::vector<RatVec> out(static_cast<std::size_t>(s.d + 1),
                            RatVec(static_cast<std::size_t>(s.n_vertices), Rational(0)));
    for (int y = 0; y < s.n_vertices; ++y) {
        if (v[static_cast<std::size_t>(y)] == 0) continue;
        const Rational& vy = v[static_cast<std::size_t>(y)];
        for (int x = 0; x < s.n_vertices; ++x)
            out[static_cast<std::size_t>(s.relation(x, y))][static_cast<std::size_t>(x)] += vy;
    }
    return out;
}

// E_j v for all j at once, assembled from the relation buckets.
inline std::vector<RatVec> idempotent_images(const TerwilligerContext& ctx, const RatVec& v) {
    const Scheme& s = *ctx.scheme;
    const BoseMesnerData& bm = *ctx.bm;
    const std::vector<RatVec> buckets = relation_bucket_apply(s, v);
    std::vector<RatVec> out(static_cast<std::size_t>(s.d + 1),
                            RatVec(static_cast<std::size_t>(s.n_vertices), Rational(0)));
    const Rational invn = Rational(1) / Rational(bm.n);
    for (int j = 0; j <= s.d; ++j) {
        for (int r = 0; r <= s.d; ++r) {
            const Rational coef = bm.Q(static_cast<std::size_t>(r), static_cast<std::size_t>(j)) * invn;
            if (coef == 0) continue;
            for (int x = 0; x < s.n_vertices; ++x)
                if (buckets[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)] != 0)
                    out[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)] +=
                        coef * buckets[static_cast<std::size_t>(r)][static_cast<std::size_t>(x)];
        }
    }
    return out;
}

// A T-module with its profile. Irreducibility is certified only through the
// thin criterion: one-dimensional E_i* slices on a contiguous shell interval
// linked by nonzero raising maps. (A is symmetric and the slices are
// orthogonal, so nonzero raising maps imply nonzero lowering maps.)
struct TModule {
    SubspaceBasis basis;
    int endpoint = -1;
    int dual_endpoint = -1;
    int diameter = -1;
    bool thin = false;
    bool dual_thin = false;
    bool irreducible_certified = false;
    std::vector<std::size_t> estar_dims;  // dim E_i* W per shell
    std::vector<std::size_t> e_dims;      // dim E_j W per eigenspace

    std::size_t dimension() const { return basis.dimension(); }
};

inline TModule module_profile(const TerwilligerContext& ctx, SubspaceBasis basis) {
    const Scheme& s = *ctx.scheme;
    const int d = s.d;
    const std::size_t n = static_cast<std::size_t>(s.n_vertices);
    TModule w;
    w.basis = std::move(basis);

    std::vector<RowSpan> slices(static_cast<std::size_t>(d + 1), RowSpan(n));
    std::vector<RowSpan> espans(static_cast<std::size_t>(d + 1), RowSpan(n));
    for (const RatVec& b : w.basis.vectors) {
        for (int i = 0; i <= d; ++i) {
            RatVec masked = estar_apply(ctx, i, b);
            if (!is_zero_vec(masked)) slices[static_cast<std::size_t>(i)].insert(std::move(masked));
        }
        const std::vector<RatVec> images = idempotent_images(ctx, b);
        for (int j = 0; j <= d; ++j)
            if (!is_zero_vec(images[static_cast<std::size_t>(j)]))
                espans[static_cast<std::size_t>(j)].insert(images[static_cast<std::size_t>(j)]);
    }

    w.estar_dims.resize(static_cast<std::size_t>(d + 1));
    w.e_dims.resize(static_cast<std::size_t>(d + 1));
    w.thin = w.dual_thin = true;
    int support_count = 0;
    for (int i = 0; i <= d; ++i) {
        w.estar_dims[static_cast<std::size_t>(i)] = slices[static_cast<std::size_t>(i)].rank();
        w.e_dims[static_cast<std::size_t>(i)] = espans[static_cast<std::size_t>(i)].rank();
        if (w.estar_dims[static_cast<std::size_t>(i)] > 0) {
            if (w.endpoint < 0) w.endpoint = i;
            ++support_count;
        }
        if (w.e_dims[static_cast<std::size_t>(i)] > 0 && w.dual_endpoint < 0) w.dual_endpoint = i;
        if (w.estar_dims[static_cast<std::size_t>(i)] > 1) w.thin = false;
        if (w.e_dims[static_cast<std::size_t>(i)] > 1) w.dual_thin = false;
    }
    w.diameter = support_count - 1;

    w.irreducible_certified = w.thin;
    for (int i = w.endpoint; i <= w.endpoint + w.diameter && w.irreducible_certified; ++i)
        if (w.estar_dims[static_cast<std::size_t>(i)] != 1) w.irreducible_certified = false;
    if (w.irreducible_certified) {
        for (int i = w.endpoint; i < w.endpoint + w.diameter; ++i) {
            const RatVec& ui = slices[static_cast<std::size_t>(i)].rows().front();
            const RatVec raised = estar_apply(ctx, i + 1, adjacency_apply(s, ui));
            if (is_zero_vec(raised)) {
                w.irreducible_certified = false;
                break;
            }
        }
    }
    return w;
}

// Smallest subspace containing v that is closed under A_1 and every E_i*
// (iterated closure with rank growth until fixpoint), with its profile.
inline TModule generate_module(const TerwilligerContext& ctx, const RatVec& v) {
    const Scheme& s = *ctx.scheme;
    require(!is_zero_vec(v), "generate_module: zero vector");
    const std::size_t n = static_cast<std::size_t>(s.n_vertices);
    RowSpan span(n);
    std::vector<RatVec> work;
    if (auto first = span.insert_reduced(v)) work.push_back(std::move(*first));
    while (!work.empty()) {
        const RatVec w = std::move(work.back());
        work.pop_back();
        if (auto grew = span.insert_reduced(adjacency_apply(s, w))) work.push_back(std::move(*grew));
        for (int i = 0; i <= s.d; ++i)
            if (auto grew = span.insert_reduced(estar_apply(ctx, i, w))) work.push_back(std::move(*grew));
    }
    return module_profile(ctx, SubspaceBasis(n, span.rows()));
}

struct LocalGraphAnalysis {
    std::vector<std::pair<Int, int>> spectrum;  // (eigenvalue, multiplicity), descending
    Rational go_terwilliger_value;              // -1 - b_1/(1 + theta_1)
    std::vector<std::vector<int>> local_adjacency;
};

namespace detail {

inline ExactMatrix shell_adjacency(const Scheme& s, const std::vector<int>& shell) {
    const std::size_t kr = shell.size();
    ExactMatrix m(kr, kr);
    for (std::size_t u = 0; u < kr; ++u)
        for (std::size_t v = 0; v < kr; ++v)
            if (s.relation(shell[u], shell[v]) == 1) m(u, v) = 1;
    return m;
}

// Distinct integer eigenvalues with eigenbasis of a symmetric integer matrix
// whose spectral radius is at most `bound`; error if the integral spectrum is
// incomplete.
inline std::vector<std::pair<Int, std::vector<RatVec>>> integer_eigensystem(const ExactMatrix& m,
                                                                            const Int& bound) {
    std::vector<std::pair<Int, std::vector<RatVec>>> out;
    std::size_t total = 0;
    for (Int lam = bound; lam >= -bound; --lam) {
        ExactMatrix shifted = m;
        for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= Rational(lam);
        std::vector<RatVec> ns = nullspace(shifted);
        if (!ns.empty()) {
            total += ns.size();
            out.emplace_back(lam, std::move(ns));
        }
    }
    require(total == m.rows(), "integer_eigensystem: spectrum is not integral");
    return out;
}

}  // namespace detail

// Spectrum of the local graph E_1* A E_1* on shell 1, plus the Go-Terwilliger
// threshold value -1 - b_1/(1+theta_1).
inline LocalGraphAnalysis local_graph_analysis(const TerwilligerContext& ctx) {
    const Scheme& s = *ctx.scheme;
    require(s.d >= 2, "local_graph_analysis: needs diameter >= 2");
    const auto& shell1 = ctx.base.shells[1];
    const ExactMatrix local = detail::shell_adjacency(s, shell1);
    const Int bound = numer(ctx.bm->theta[0]);
    LocalGraphAnalysis res;
    for (auto& [lam, basis] : detail::integer_eigensystem(local, bound))
        res.spectrum.emplace_back(lam, static_cast<int>(basis.size()));
    const Rational theta1 = ctx.bm->theta[1];
    require(theta1 != -1, "local_graph_analysis: theta_1 = -1 degeneracy");
    res.go_terwilliger_value =
        Rational(-1) - Rational(s.intersection_numbers().b[1]) / (Rational(1) + theta1);
    res.local_adjacency.assign(shell1.size(), {});
    for (std::size_t u = 0; u < shell1.size(); ++u)
        for (std::size_t v = 0; v < shell1.size(); ++v)
            if (s.relation(shell1[u], shell1[v]) == 1)
                res.local_adjacency[u].push_back(static_cast<int>(v));
    return res;
}

// Greedy orthogonal decomposition of the standard module into certified thin
// irreducible T-modules: start from the primary module, then repeatedly take
// an exact integer eigenvector of the local matrix E_r* A E_r* inside the
// orthogonal complement of the sum so far, at the lowest shell r that is not
// yet exhausted, and close it up. Certification failure is an error, never a
// silent success.
inline std::vector<TModule> decompose_standard_module(const TerwilligerContext& ctx) {
    const Scheme& s = *ctx.scheme;
    const int d = s.d;
    const std::size_t n = static_cast<std::size_t>(s.n_vertices);

    std::vector<RowSpan> shell_span;
    shell_span.reserve(static_cast<std::size_t>(d + 1));
    for (int r = 0; r <= d; ++r)
        shell_span.emplace_back(ctx.base.shells[static_cast<std::size_t>(r)].size());

    std::vector<TModule> modules;
    auto add_module = [&](TModule w) {
        for (const RatVec& b : w.basis.vectors) {
            for (int r = 0; r <= d; ++r) {
                const auto& shell = ctx.base.shells[static_cast<std::size_t>(r)];
                RatVec local(shell.size(), Rational(0));
                bool nonzero = false;
                for (std::size_t t = 0; t < shell.size(); ++t) {
                    local[t] = b[static_cast<std::size_t>(shell[t])];
                    if (local[t] != 0) nonzero = true;
                }
                if (nonzero) shell_span[static_cast<std::size_t>(r)].insert(std::move(local));
            }
        }
        modules.push_back(std::move(w));
    };

    auto fail = [&](int r, const std::string& what) {
        std::ostringstream os;
        os << "decompose_standard_module(" << s.spec.name() << "): " << what << " at shell " << r;
        throw std::runtime_error(os.str());
    };

    RatVec u0hat(n, Rational(0));
    u0hat[static_cast<std::size_t>(ctx.base.u0)] = 1;
    TModule primary = generate_module(ctx, u0hat);
    if (!primary.irreducible_certified) fail(0, "primary module failed thin certification");
    add_module(std::move(primary));

    std::vector<std::optional<std::vector<std::pair<Int, std::vector<RatVec>>>>> eig(
        static_cast<std::size_t>(d + 1));
    const Int bound = numer(ctx.bm->theta[0]);

    while (true) {
        int r = -1;
        for (int rr = 0; rr <= d; ++rr)
            if (shell_span[static_cast<std::size_t>(rr)].rank() <
                ctx.base.shells[static_cast<std::size_t>(rr)].size()) {
                r = rr;
                break;
            }
        if (r < 0) break;

        auto& cache = eig[static_cast<std::size_t>(r)];
        if (!cache)
            cache = detail::integer_eigensystem(
                detail::shell_adjacency(s, ctx.base.shells[static_cast<std::size_t>(r)]), bound);

        const RowSpan& used = shell_span[static_cast<std::size_t>(r)];
        RatVec local;
        bool found = false;
        for (const auto& [lambda, eigbasis] : *cache) {
            // coefficients a with sum_s a_s N_s orthogonal to everything used
            ExactMatrix g(used.rank(), eigbasis.size());
            for (std::size_t t = 0; t < used.rank(); ++t)
                for (std::size_t sidx = 0; sidx < eigbasis.size(); ++sidx)
                    g(t, sidx) = dot(used.rows()[t], eigbasis[sidx]);
            const std::vector<RatVec> ker = nullspace(g);
            if (ker.empty()) continue;
            const RatVec& a = ker.front();
            local.assign(ctx.base.shells[static_cast<std::size_t>(r)].size(), Rational(0));
            for (std::size_t sidx = 0; sidx < eigbasis.size(); ++sidx) {
                if (a[sidx] == 0) continue;
                for (std::size_t t = 0; t < local.size(); ++t)
                    if (eigbasis[sidx][t] != 0) local[t] += a[sidx] * eigbasis[sidx][t];
            }
            found = true;
            break;
        }
        if (!found) fail(r, "no integer local eigenvector in the orthogonal complement");

        RatVec full(n, Rational(0));
        const auto& shell = ctx.base.shells[static_cast<std::size_t>(r)];
        for (std::size_t t = 0; t < shell.size(); ++t) full[static_cast<std::size_t>(shell[t])] = local[t];
        TModule w = generate_module(ctx, full);
        if (!w.irreducible_certified) {
            std::ostringstream os;
            os << "generated module failed thin certification (dim " << w.dimension() << ", endpoint "
               << w.endpoint << ")";
            fail(r, os.str());
        }
        add_module(std::move(w));
    }

    std::size_t total = 0;
    for (const auto& w : modules) total += w.dimension();
    require(total == n, "decompose_standard_module: dimensions do not sum to |X|");
    return modules;
}

}  // namespace relans
