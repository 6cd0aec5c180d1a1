#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "relans/design_spaces.hpp"

namespace relans {

// Design file format:
//   line 1: scheme: <scheme spec text>
//   line 2: u0: <vertex index>
//   then one line per point: <vertex index> <weight as num/den>
struct DesignFile {
    SchemeSpec spec;
    int u0 = 0;
    std::vector<std::pair<int, Rational>> entries;
};

inline DesignFile parse_design_file(std::istream& in) {
    DesignFile df;
    std::string line;
    int lineno = 0;
    auto fail = [&lineno](const std::string& what) {
        throw std::runtime_error("design file line " + std::to_string(lineno) + ": " + what);
    };

    ++lineno;
    if (!std::getline(in, line)) fail("missing scheme line");
    if (line.rfind("scheme:", 0) != 0) fail("expected 'scheme: <spec>'");
    const auto spec = SchemeSpec::parse(line.substr(7));
    if (!spec) fail("unparsable scheme spec");
    df.spec = *spec;

    ++lineno;
    if (!std::getline(in, line)) fail("missing u0 line");
    if (line.rfind("u0:", 0) != 0) fail("expected 'u0: <vertex index>'");
    try {
        df.u0 = std::stoi(line.substr(3));
    } catch (const std::exception&) {
        fail("unparsable base vertex");
    }

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string vtx, wt;
        if (!(ls >> vtx >> wt)) fail("expected '<vertex> <weight>'");
        int vertex = 0;
        try {
            vertex = std::stoi(vtx);
        } catch (const std::exception&) {
            fail("unparsable vertex index");
        }
        const auto weight = parse_rational(wt);
        if (!weight) fail("unparsable weight");
        if (*weight <= 0) fail("weight must be positive");
        df.entries.emplace_back(vertex, *weight);
    }
    if (df.entries.empty()) fail("no design points");
    return df;
}

inline std::string format_design_file(const DesignFile& df) {
    std::ostringstream os;
    os << "scheme: " << df.spec.to_text() << "\n";
    os << "u0: " << df.u0 << "\n";
    for (const auto& [v, w] : df.entries) os << v << " " << w << "\n";
    return os.str();
}

enum class SearchMode { kUniformPerShell, kSolveWeights };

struct SearchOptions {
    ShellSupport support;
    int t = 0;
    DesignVariant variant = DesignVariant::kQ;
    int max_size = 0;
    SearchMode mode = SearchMode::kUniformPerShell;
    long long budget = 10'000'000;  // candidate-set cap
};

namespace detail {

// Strictly positive vector in the span of a nullspace basis, if one of the
// cheap candidates (single basis vectors, their sum, and negations) is
// positive. For one-dimensional kernels this is exact.
inline std::optional<RatVec> positive_kernel_vector(const std::vector<RatVec>& kernel) {
    if (kernel.empty()) return std::nullopt;
    auto all_positive = [](const RatVec& v) {
        for (const auto& x : v)
            if (x <= 0) return false;
        return true;
    };
    std::vector<RatVec> candidates = kernel;
    RatVec sum(kernel.front().size(), Rational(0));
    for (const auto& b : kernel)
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += b[i];
    candidates.push_back(std::move(sum));
    for (const RatVec& c : candidates) {
        if (all_positive(c)) return c;
        RatVec neg(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) neg[i] = -c[i];
        if (all_positive(neg)) return neg;
    }
    return std::nullopt;
}

inline bool next_colex_combination(std::vector<int>& combo, int pool_size) {
    const int s = static_cast<int>(combo.size());
    for (int i = 0; i < s; ++i) {
        const int limit = (i + 1 < s) ? combo[static_cast<std::size_t>(i + 1)] : pool_size;
        if (combo[static_cast<std::size_t>(i)] + 1 < limit) {
            ++combo[static_cast<std::size_t>(i)];
            for (int t = 0; t < i; ++t) combo[static_cast<std::size_t>(t)] = t;
            return true;
        }
    }
    return false;
}

}  // namespace detail

// Exhaustive search for relative t-designs supported on the given shells,
// over candidate subsets enumerated by size and then in colex order of
// sorted vertex indices. Every returned design is re-verified against the
// definition, and against the Fisher bound when t is even.
inline std::vector<WeightedSubset> design_search(const Scheme& s, const BasePointShells& base,
                                                 const BoseMesnerData& bm, const SearchOptions& opt) {
    require(opt.t >= 0 && opt.t <= s.d, "design_search: t out of range");
    require(opt.max_size >= 1, "design_search: max_size must be >= 1");

    std::vector<int> pool = support_coords(base, opt.support);
    std::sort(pool.begin(), pool.end());
    const int pool_size = static_cast<int>(pool.size());

    // enumeration budget
    {
        Rational total = 0;
        Rational binom = 1;
        for (int size = 1; size <= std::min(opt.max_size, pool_size); ++size) {
            binom = binom * Rational(pool_size - size + 1) / Rational(size);
            total += binom;
            require(total <= opt.budget, "design_search: enumeration budget exceeded");
        }
    }

    // spanning set of the degree <= t design space, with per-shell sums
    std::vector<RatVec> span_vectors;
    for (int j = 0; j <= opt.t; ++j) {
        if (opt.variant == DesignVariant::kP) {
            for (int z : base.shells[static_cast<std::size_t>(j)])
                span_vectors.push_back(hom_vector(s, base, z));
        } else {
            for (const RatVec& f : l_basis(s, bm, j).basis.vectors) span_vectors.push_back(f);
        }
    }
    const std::size_t nf = span_vectors.size();
    const int p = opt.support.p();
    std::vector<std::vector<Rational>> shell_sum(nf, std::vector<Rational>(static_cast<std::size_t>(p)));
    for (std::size_t fi = 0; fi < nf; ++fi)
        for (int i = 0; i < p; ++i) {
            Rational acc = 0;
            for (int x : base.shells[static_cast<std::size_t>(opt.support.shells[static_cast<std::size_t>(i)])])
                acc += span_vectors[fi][static_cast<std::size_t>(x)];
            shell_sum[fi][static_cast<std::size_t>(i)] = std::move(acc);
        }

    std::vector<WeightedSubset> found;
    auto consider = [&](const std::vector<int>& combo) {
        std::vector<int> verts;
        verts.reserve(combo.size());
        for (int idx : combo) verts.push_back(pool[static_cast<std::size_t>(idx)]);
        // must touch every support shell
        std::vector<std::vector<int>> by_shell(static_cast<std::size_t>(p));
        for (int v : verts) {
            const int r = base.shell_of[static_cast<std::size_t>(v)];
            const auto it = std::find(opt.support.shells.begin(), opt.support.shells.end(), r);
            by_shell[static_cast<std::size_t>(it - opt.support.shells.begin())].push_back(v);
        }
        for (const auto& g : by_shell)
            if (g.empty()) return;

        std::optional<WeightedSubset> candidate;
        if (opt.mode == SearchMode::kUniformPerShell) {
            ExactMatrix g(nf, static_cast<std::size_t>(p));
            for (std::size_t fi = 0; fi < nf; ++fi)
                for (int i = 0; i < p; ++i) {
                    Rational point_sum = 0;
                    for (int v : by_shell[static_cast<std::size_t>(i)])
                        point_sum += span_vectors[fi][static_cast<std::size_t>(v)];
                    const int r = opt.support.shells[static_cast<std::size_t>(i)];
                    g(fi, static_cast<std::size_t>(i)) =
                        Rational(by_shell[static_cast<std::size_t>(i)].size()) /
                            Rational(base.valencies[static_cast<std::size_t>(r)]) *
                            shell_sum[fi][static_cast<std::size_t>(i)] -
                        point_sum;
                }
            if (const auto w = detail::positive_kernel_vector(nullspace(g))) {
                std::vector<std::pair<int, Rational>> entries;
                for (int i = 0; i < p; ++i)
                    for (int v : by_shell[static_cast<std::size_t>(i)])
                        entries.emplace_back(v, (*w)[static_cast<std::size_t>(i)]);
                candidate = make_weighted_subset(std::move(entries), s.n_vertices);
            }
        } else {
            ExactMatrix g(nf, verts.size());
            for (std::size_t fi = 0; fi < nf; ++fi)
                for (std::size_t vi = 0; vi < verts.size(); ++vi) {
                    const int v = verts[vi];
                    const int r = base.shell_of[static_cast<std::size_t>(v)];
                    const auto it = std::find(opt.support.shells.begin(), opt.support.shells.end(), r);
                    const std::size_t si = static_cast<std::size_t>(it - opt.support.shells.begin());
                    g(fi, vi) = span_vectors[fi][static_cast<std::size_t>(v)] -
                                shell_sum[fi][si] / Rational(base.valencies[static_cast<std::size_t>(r)]);
                }
            if (const auto w = detail::positive_kernel_vector(nullspace(g))) {
                std::vector<std::pair<int, Rational>> entries;
                for (std::size_t vi = 0; vi < verts.size(); ++vi)
                    entries.emplace_back(verts[vi], (*w)[vi]);
                candidate = make_weighted_subset(std::move(entries), s.n_vertices);
            }
        }
        if (!candidate) return;
        require(verify_relative_design(s, base, bm, *candidate, opt.t, opt.variant),
                "design_search: solved candidate failed re-verification");
        if (opt.t % 2 == 0) {
            const FisherBounds fb = fisher_bounds(s, base, bm, opt.support, opt.t / 2);
            const std::size_t bound =
                opt.variant == DesignVariant::kP ? fb.hom_bound : fb.l_bound;
            require(candidate->size() >= bound, "design_search: found design below the Fisher bound");
        }
        found.push_back(std::move(*candidate));
    };

    for (int size = 1; size <= std::min(opt.max_size, pool_size); ++size) {
        std::vector<int> combo(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) combo[static_cast<std::size_t>(i)] = i;
        while (true) {
            consider(combo);
            if (!detail::next_colex_combination(combo, pool_size)) break;
        }
    }
    return found;
}

}  // namespace relans
