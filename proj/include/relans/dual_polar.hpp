#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "relans/design_spaces.hpp"
#include "relans/parallel.hpp"

namespace relans {

namespace dp {

inline const gf::Mat& vertex_subspace(const Scheme& s, int v) {
    require(s.spec.family == Family::kDualPolarC, "dual polar operation on a non dual polar scheme");
    return s.dp_space.vertices[static_cast<std::size_t>(v)];
}

// Lemma-level geodesic criterion: x cap y <= z and z = (x cap z) + (y cap z).
inline bool subspace_geodesic_criterion(const Scheme& s, int x, int y, int z) {
    const int q = s.dp_space.q;
    const gf::Mat& zx = vertex_subspace(s, z);
    const gf::Mat meet = gf::intersect(vertex_subspace(s, x), vertex_subspace(s, y), q);
    if (!gf::contains(zx, meet, q)) return false;
    const gf::Mat sum = gf::sum(gf::intersect(vertex_subspace(s, x), zx, q),
                                gf::intersect(vertex_subspace(s, y), zx, q), q);
    return sum.size() == zx.size();
}

}  // namespace dp

// Whether z lies on a geodesic between x and y. Computed metrically, and
// cross-checked against the subspace criterion x cap y <= z = (x cap z) +
// (y cap z); the two must agree.
inline bool geodesic_split(const Scheme& s, int x, int y, int z) {
    const bool metric = s.relation(x, z) + s.relation(z, y) == s.relation(x, y);
    require(metric == dp::subspace_geodesic_criterion(s, x, y, z),
            "geodesic_split: metric and subspace criteria disagree");
    return metric;
}

// The convex subset X' = {z | x cap y <= z} together with the data the gate
// map needs.
struct GateContext {
    int x = 0, y = 0;
    gf::Mat U;       // x cap y
    gf::Mat u_perp;  // perp of U under the symplectic form
    int ell = 0;     // dim(u0 cap U)
    std::vector<int> xprime;
};

inline GateContext make_gate_context(const Scheme& s, const BasePointShells& base, int x, int y) {
    const int q = s.dp_space.q;
    GateContext ctx;
    ctx.x = x;
    ctx.y = y;
    ctx.U = gf::intersect(dp::vertex_subspace(s, x), dp::vertex_subspace(s, y), q);
    ctx.u_perp = dual_polar::perp(s.dp_space, ctx.U);
    ctx.ell = static_cast<int>(gf::intersect(dp::vertex_subspace(s, base.u0), ctx.U, q).size());
    require(ctx.ell >= s.d - s.relation(base.u0, x) - s.relation(base.u0, y),
            "gate context: ell >= d - i - j violated");
    for (int z = 0; z < s.n_vertices; ++z)
        if (gf::contains(dp::vertex_subspace(s, z), ctx.U, q)) ctx.xprime.push_back(z);
    return ctx;
}

// The gate of z into X': z' = U + (z cap U^perp), the unique distance
// minimizer.
inline int gate(const Scheme& s, const GateContext& ctx, int z) {
    const int q = s.dp_space.q;
    const gf::Mat zcap = gf::intersect(dp::vertex_subspace(s, z), ctx.u_perp, q);
    return dual_polar::vertex_of(s.dp_space, gf::sum(ctx.U, zcap, q));
}

// The vertices z' in X' with f_x(z') = f_y(z') = 1, verifying the pointwise
// product identity f_x f_y = sum_z f_z and that every z' sits at shell d - ell.
inline std::vector<int> product_decomposition(const Scheme& s, const BasePointShells& base, int x,
                                               int y) {
    const GateContext ctx = make_gate_context(s, base, x, y);
    const RatVec fx = hom_vector(s, base, x);
    const RatVec fy = hom_vector(s, base, y);
    std::vector<int> zs;
    for (int z : ctx.xprime)
        if (fx[static_cast<std::size_t>(z)] == 1 && fy[static_cast<std::size_t>(z)] == 1)
            zs.push_back(z);
    RatVec sum(static_cast<std::size_t>(s.n_vertices), Rational(0));
    for (int z : zs) {
        require(s.relation(base.u0, z) == s.d - ctx.ell,
                "product_decomposition: returned vertex not at shell d - ell");
        const RatVec fz = hom_vector(s, base, z);
        for (int w = 0; w < s.n_vertices; ++w) sum[static_cast<std::size_t>(w)] += fz[static_cast<std::size_t>(w)];
    }
    for (int w = 0; w < s.n_vertices; ++w)
        require(sum[static_cast<std::size_t>(w)] ==
                    fx[static_cast<std::size_t>(w)] * fy[static_cast<std::size_t>(w)],
                "product_decomposition: f_x f_y != sum of f_z");
    return zs;
}

struct FisherDualPolar {
    std::size_t bound = 0;
    bool holds = false;
    bool injectivity_certified = false;
};

// Fisher bound check on a verified relative 2e-design of a dual polar scheme,
// together with the injectivity certificate for the restriction map
// Hom_{<=e}(S) -> F(Y) that drives the proof.
inline FisherDualPolar fisher_dual_polar(const Scheme& s, const BasePointShells& base,
                                         const BoseMesnerData& bm, const WeightedSubset& y, int e) {
    require(verify_relative_design(s, base, bm, y, 2 * e, DesignVariant::kP),
            "fisher_dual_polar: Y is not a verified relative 2e-design (variant P)");
    const ShellSupport support = support_of(y, base, s.d);
    std::vector<DesignSpace> hom;
    for (int j = 0; j <= e; ++j) hom.push_back(hom_basis(s, base, j));
    std::vector<const DesignSpace*> hp;
    for (const auto& h : hom) hp.push_back(&h);
    FisherDualPolar out;
    out.bound = restricted_dim(hp, base, support);
    out.holds = y.size() >= out.bound;
    // rank of the basis restricted to the design points
    RowSpan on_y(y.entries.size());
    for (const auto& h : hom)
        for (const RatVec& f : h.basis.vectors) {
            RatVec restricted(y.entries.size());
            for (std::size_t i = 0; i < y.entries.size(); ++i)
                restricted[i] = f[static_cast<std::size_t>(y.entries[i].first)];
            on_y.insert(std::move(restricted));
        }
    out.injectivity_certified = on_y.rank() == out.bound;
    return out;
}

struct CheckSummary {
    std::string name;
    long long cases = 0;
    long long failures = 0;
};

// Exhaustive checks of the geodesic lemma, the gate lemma, and the product
// identity over the whole scheme; sharded across workers.
inline std::vector<CheckSummary> appendix_a_suite(const Scheme& s, const BasePointShells& base) {
    const int n = s.n_vertices;
    std::vector<CheckSummary> out;

    {  // Lemma A.1: metric vs subspace geodesic criterion, all triples
        CheckSummary summary{"lemmaA1_geodesic", static_cast<long long>(n) * n * n, 0};
        std::atomic<long long> failures{0};
        parallel_chunks(static_cast<std::size_t>(n), [&](std::size_t beginx, std::size_t endx) {
            long long local = 0;
            for (std::size_t x = beginx; x < endx; ++x)
                for (int y = 0; y < n; ++y)
                    for (int z = 0; z < n; ++z) {
                        const bool metric = s.relation(static_cast<int>(x), z) + s.relation(z, y) ==
                                            s.relation(static_cast<int>(x), y);
                        if (metric != dp::subspace_geodesic_criterion(s, static_cast<int>(x), y, z))
                            ++local;
                    }
            failures += local;
        });
        summary.failures = failures;
        out.push_back(summary);
    }

    {  // Lemma A.2: unique gate and the two-step distance identity
        CheckSummary summary{"lemmaA2_gate", static_cast<long long>(n) * n * n, 0};
        std::atomic<long long> failures{0};
        parallel_chunks(static_cast<std::size_t>(n), [&](std::size_t beginx, std::size_t endx) {
            long long local = 0;
            for (std::size_t x = beginx; x < endx; ++x)
                for (int y = 0; y < n; ++y) {
                    const GateContext ctx = make_gate_context(s, base, static_cast<int>(x), y);
                    for (int z = 0; z < n; ++z) {
                        const int zprime = gate(s, ctx, z);
                        const int dz = s.relation(z, zprime);
                        int minimizers = 0;
                        bool twostep = true;
                        for (int z1 : ctx.xprime) {
                            const int dz1 = s.relation(z, z1);
                            if (dz1 < dz) twostep = false;  // gate not a minimizer
                            if (dz1 == dz) ++minimizers;
                            if (dz1 != dz + s.relation(zprime, z1)) twostep = false;
                        }
                        if (minimizers != 1 || !twostep) ++local;
                    }
                }
            failures += local;
        });
        summary.failures = failures;
        out.push_back(summary);
    }

    {  // Lemmas A.3/A.4 + Prop A.5: product identity over all pairs
        CheckSummary summary{"propA5_product", static_cast<long long>(n) * n, 0};
        std::atomic<long long> failures{0};
        parallel_chunks(static_cast<std::size_t>(n), [&](std::size_t beginx, std::size_t endx) {
            long long local = 0;
            for (std::size_t x = beginx; x < endx; ++x) {
                const RatVec fx = hom_vector(s, base, static_cast<int>(x));
                for (int y = 0; y < n; ++y) {
                    const RatVec fy = hom_vector(s, base, y);
                    bool ok = true;
                    try {
                        const GateContext ctx = make_gate_context(s, base, static_cast<int>(x), y);
                        std::vector<int> zs;
                        for (int z : ctx.xprime)
                            if (fx[static_cast<std::size_t>(z)] == 1 && fy[static_cast<std::size_t>(z)] == 1) {
                                if (s.relation(base.u0, z) != s.d - ctx.ell) ok = false;  // Lemma A.3
                                zs.push_back(z);
                            }
                        // Prop A.5 pointwise identity (uniqueness of Lemma A.4
                        // is what keeps the sum 0/1-valued)
                        RatVec sum(static_cast<std::size_t>(n), Rational(0));
                        for (int z : zs) {
                            const RatVec fz = hom_vector(s, base, z);
                            for (int w = 0; w < n; ++w)
                                sum[static_cast<std::size_t>(w)] += fz[static_cast<std::size_t>(w)];
                        }
                        for (int w = 0; w < n && ok; ++w)
                            if (sum[static_cast<std::size_t>(w)] !=
                                fx[static_cast<std::size_t>(w)] * fy[static_cast<std::size_t>(w)])
                                ok = false;
                    } catch (const std::exception&) {
                        ok = false;
                    }
                    if (!ok) ++local;
                }
            }
            failures += local;
        });
        summary.failures = failures;
        out.push_back(summary);
    }

    return out;
}

}  // namespace relans
