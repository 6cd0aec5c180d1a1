#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "relans/bose_mesner.hpp"
#include "relans/terwilliger.hpp"

namespace relans {

enum class DesignVariant { kP, kQ };

inline char variant_letter(DesignVariant v) { return v == DesignVariant::kP ? 'p' : 'q'; }

// Strictly increasing shell indices r_1 < ... < r_p naming a union of shells.
struct ShellSupport {
    std::vector<int> shells;

    int p() const { return static_cast<int>(shells.size()); }

    static ShellSupport of(std::vector<int> r, int d) {
        require(!r.empty(), "ShellSupport: empty");
        for (std::size_t i = 0; i < r.size(); ++i) {
            require(r[i] >= 0 && r[i] <= d, "ShellSupport: shell index out of range");
            require(i == 0 || r[i - 1] < r[i], "ShellSupport: shells must strictly increase");
        }
        return {std::move(r)};
    }

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < shells.size(); ++i)
            out += (i ? "," : "") + std::to_string(shells[i]);
        return out;
    }
};

// Positive weighted subset of the vertex set.
struct WeightedSubset {
    std::vector<std::pair<int, Rational>> entries;  // sorted by vertex, distinct

    std::size_t size() const { return entries.size(); }
};

inline WeightedSubset make_weighted_subset(std::vector<std::pair<int, Rational>> entries,
                                           int n_vertices) {
    require(!entries.empty(), "weighted subset: empty");
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        require(entries[i].first >= 0 && entries[i].first < n_vertices,
                "weighted subset: vertex out of range");
        require(entries[i].second > 0, "weighted subset: weights must be positive");
        require(i == 0 || entries[i - 1].first != entries[i].first,
                "weighted subset: repeated vertex");
    }
    return {std::move(entries)};
}

inline ShellSupport support_of(const WeightedSubset& y, const BasePointShells& base, int d) {
    std::vector<int> seen;
    for (const auto& [v, w] : y.entries) {
        const int r = base.shell_of[static_cast<std::size_t>(v)];
        if (seen.empty() || seen.back() != r) {
            if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r);
        }
    }
    std::sort(seen.begin(), seen.end());
    return ShellSupport::of(std::move(seen), d);
}

// w(Y_{r_i}) sums, aligned with the support shells.
inline std::vector<Rational> shell_weights(const WeightedSubset& y, const BasePointShells& base,
                                           const ShellSupport& support) {
    std::vector<Rational> sums(support.shells.size(), Rational(0));
    for (const auto& [v, w] : y.entries) {
        const int r = base.shell_of[static_cast<std::size_t>(v)];
        const auto it = std::find(support.shells.begin(), support.shells.end(), r);
        require(it != support.shells.end(), "shell_weights: vertex outside support");
        sums[static_cast<std::size_t>(it - support.shells.begin())] += w;
    }
    return sums;
}

// The geodesic indicator f_z: f_z(x) = 1 iff x in X_i with i >= j and
// (x,z) in R_{i-j}, where j is the shell of z.
inline RatVec hom_vector(const Scheme& s, const BasePointShells& base, int z) {
    require(z >= 0 && z < s.n_vertices, "hom_vector: vertex out of range");
    const int j = base.shell_of[static_cast<std::size_t>(z)];
    RatVec f(static_cast<std::size_t>(s.n_vertices), Rational(0));
    for (int x = 0; x < s.n_vertices; ++x) {
        const int i = base.shell_of[static_cast<std::size_t>(x)];
        if (i >= j && s.relation(x, z) == i - j) f[static_cast<std::size_t>(x)] = 1;
    }
    return f;
}

struct DesignSpace {
    enum class Kind { kHom, kL } kind;
    int j = 0;
    SubspaceBasis basis;
};

inline DesignSpace hom_basis(const Scheme& s, const BasePointShells& base, int j) {
    require(j >= 0 && j <= s.d, "hom_basis: degree out of range");
    std::vector<RatVec> rows;
    for (int z : base.shells[static_cast<std::size_t>(j)]) rows.push_back(hom_vector(s, base, z));
    DesignSpace space{DesignSpace::Kind::kHom, j,
                      SubspaceBasis(static_cast<std::size_t>(s.n_vertices), std::move(rows))};
    require(space.basis.dimension() == base.valencies[static_cast<std::size_t>(j)],
            "hom_basis: dim Hom_j != k_j");
    return space;
}

inline DesignSpace l_basis(const Scheme& s, const BoseMesnerData& bm, int j) {
    require(j >= 0 && j <= s.d, "l_basis: degree out of range");
    const std::size_t n = static_cast<std::size_t>(s.n_vertices);
    const Int& mj = bm.multiplicities[static_cast<std::size_t>(j)];
    RowSpan span(n);
    for (int x = 0; x < s.n_vertices && span.rank() < mj; ++x) {
        RatVec row(n);
        for (int y = 0; y < s.n_vertices; ++y)
            row[static_cast<std::size_t>(y)] = bm.idempotent_entry(s, j, x, y);
        span.insert(std::move(row));
    }
    require(Int(span.rank()) == mj, "l_basis: dim L_j != m_j");
    return {DesignSpace::Kind::kL, j, SubspaceBasis(n, span.rows())};
}

inline std::vector<int> support_coords(const BasePointShells& base, const ShellSupport& support) {
    std::vector<int> coords;
    for (int r : support.shells)
        coords.insert(coords.end(), base.shells[static_cast<std::size_t>(r)].begin(),
                      base.shells[static_cast<std::size_t>(r)].end());
    return coords;
}

// Exact dimension of the restrictions f|_S of all the given spaces, stacked.
inline std::size_t restricted_dim(const std::vector<const DesignSpace*>& spaces,
                                  const BasePointShells& base, const ShellSupport& support) {
    const std::vector<int> coords = support_coords(base, support);
    RowSpan span(coords.size());
    for (const DesignSpace* sp : spaces)
        for (const RatVec& f : sp->basis.vectors) {
            RatVec restricted(coords.size());
            for (std::size_t t = 0; t < coords.size(); ++t)
                restricted[t] = f[static_cast<std::size_t>(coords[t])];
            span.insert(std::move(restricted));
        }
    return span.rank();
}

struct FisherBounds {
    std::size_t hom_bound = 0;
    std::size_t l_bound = 0;
    Int k_sum = 0;
    Int m_sum = 0;
};

// Restricted dimensions of Hom_0..e and L_0..e on S, with the closed-form
// sums k_e + ... + k_{e-p+1} and m_e + ... + m_{e-p+1}.
inline FisherBounds fisher_bounds(const Scheme& s, const BasePointShells& base,
                                  const BoseMesnerData& bm, const ShellSupport& support, int e) {
    require(e >= 0 && e <= s.d, "fisher_bounds: e out of range");
    require(e >= support.p() - 1, "fisher_bounds: need e >= p-1");
    std::vector<DesignSpace> hom, ell;
    for (int j = 0; j <= e; ++j) {
        hom.push_back(hom_basis(s, base, j));
        ell.push_back(l_basis(s, bm, j));
    }
    std::vector<const DesignSpace*> hp, lp;
    for (const auto& d : hom) hp.push_back(&d);
    for (const auto& d : ell) lp.push_back(&d);
    FisherBounds out;
    out.hom_bound = restricted_dim(hp, base, support);
    out.l_bound = restricted_dim(lp, base, support);
    for (int j = e - support.p() + 1; j <= e; ++j) {
        out.k_sum += base.valencies[static_cast<std::size_t>(j)];
        out.m_sum += bm.multiplicities[static_cast<std::size_t>(j)];
    }
    return out;
}

struct IntersectionMatrixCheck {
    ExactMatrix matrix;
    Rational det;
    bool nonsingular = false;
};

// The p x p matrix of products of intersection numbers whose nonsingularity
// drives the P-side dimension formula: entry (i,h) = prod_{m=1}^{h}
// c_{r_i - e + p - m}, h = 0..p-1.
inline IntersectionMatrixCheck intersection_matrix_check(const Scheme& s, int e,
                                                         const ShellSupport& support) {
    const auto& in = s.intersection_numbers();
    require(in.p_polynomial, "intersection_matrix_check: scheme not P-polynomial");
    const int p = support.p();
    require(p - 1 <= e && e <= support.shells.front(), "intersection_matrix_check: need p-1 <= e <= r_1");
    require(support.shells.back() <= s.d, "intersection_matrix_check: r_p out of range");
    IntersectionMatrixCheck out;
    out.matrix = ExactMatrix(static_cast<std::size_t>(p), static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        Rational prod = 1;
        out.matrix(static_cast<std::size_t>(i), 0) = 1;
        for (int h = 1; h < p; ++h) {
            const int idx = support.shells[static_cast<std::size_t>(i)] - e + p - h;
            require(idx >= 1 && idx <= s.d, "intersection_matrix_check: c-index out of range");
            prod *= Rational(in.c[static_cast<std::size_t>(idx)]);
            out.matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(h)) = prod;
        }
    }
    out.det = determinant(out.matrix);
    out.nonsingular = out.det != 0;
    return out;
}

struct HypothesisReport {
    bool ok = true;
    std::vector<std::string> failures;

    void fail(const std::string& what) {
        ok = false;
        failures.push_back(what);
    }
};

// Checks the module-level hypotheses of the two dimension-formula criteria on
// a concrete decomposition; lists every failing module.
inline HypothesisReport criterion_hypotheses(DesignVariant kind, const std::vector<TModule>& modules,
                                             int e, const ShellSupport& support, const Scheme& s) {
    HypothesisReport report;
    const int p = support.p();
    auto module_tag = [](const TModule& w, std::size_t idx) {
        std::ostringstream os;
        os << "module#" << idx << "(dim " << w.dimension() << ", rho " << w.endpoint << ", rho* "
           << w.dual_endpoint << ", delta " << w.diameter << ")";
        return os.str();
    };
    if (kind == DesignVariant::kP) {
        for (std::size_t idx = 0; idx < modules.size(); ++idx) {
            const TModule& w = modules[idx];
            if (w.endpoint > e) continue;
            if (!w.thin) report.fail(module_tag(w, idx) + ": not thin");
            if (w.endpoint + w.diameter < support.shells.back())
                report.fail(module_tag(w, idx) + ": rho + delta < r_p");
        }
        const IntersectionMatrixCheck mc = intersection_matrix_check(s, e, support);
        if (!mc.nonsingular) report.fail("intersection-number matrix is singular");
    } else {
        for (std::size_t idx = 0; idx < modules.size(); ++idx) {
            const TModule& w = modules[idx];
            if (w.dual_endpoint > e) continue;
            if (!w.dual_thin) report.fail(module_tag(w, idx) + ": not dual thin");
            if (w.dual_endpoint + w.diameter < e)
                report.fail(module_tag(w, idx) + ": rho* + delta < e");
            int touched = 0;
            for (int r : support.shells)
                if (w.estar_dims[static_cast<std::size_t>(r)] > 0) ++touched;
            if (touched < std::min(p, e - w.dual_endpoint + 1))
                report.fail(module_tag(w, idx) + ": support count below min{p, e - rho* + 1}");
        }
    }
    return report;
}

// Definition check for a relative t-design: the weighted shell-average
// identity, verified exactly on a spanning set of Hom_0..t (variant P) or
// L_0..t (variant Q).
inline bool verify_relative_design(const Scheme& s, const BasePointShells& base,
                                   const BoseMesnerData& bm, const WeightedSubset& y, int t,
                                   DesignVariant variant) {
    require(!y.entries.empty(), "verify_relative_design: empty weighted subset");
    require(t >= 0 && t <= s.d, "verify_relative_design: t out of range");
    const ShellSupport support = support_of(y, base, s.d);
    const std::vector<Rational> wsums = shell_weights(y, base, support);

    auto check = [&](const RatVec& f) {
        Rational lhs = 0;
        for (std::size_t i = 0; i < support.shells.size(); ++i) {
            const int r = support.shells[i];
            Rational shell_sum = 0;
            for (int x : base.shells[static_cast<std::size_t>(r)])
                shell_sum += f[static_cast<std::size_t>(x)];
            lhs += wsums[i] / Rational(base.valencies[static_cast<std::size_t>(r)]) * shell_sum;
        }
        Rational rhs = 0;
        for (const auto& [v, w] : y.entries) rhs += w * f[static_cast<std::size_t>(v)];
        return lhs == rhs;
    };

    for (int j = 0; j <= t; ++j) {
        if (variant == DesignVariant::kP) {
            for (int z : base.shells[static_cast<std::size_t>(j)])
                if (!check(hom_vector(s, base, z))) return false;
        } else {
            const DesignSpace lj = l_basis(s, bm, j);
            for (const RatVec& f : lj.basis.vectors)
                if (!check(f)) return false;
        }
    }
    return true;
}

// Triple-rank test for Hom_0+...+Hom_t = L_0+...+L_t as subspaces.
inline bool hom_l_equality(const Scheme& s, const BasePointShells& base, const BoseMesnerData& bm,
                           int t) {
    require(t >= 0 && t <= s.d, "hom_l_equality: t out of range");
    const std::size_t n = static_cast<std::size_t>(s.n_vertices);
    RowSpan hom_span(n), l_span(n), joint(n);
    for (int j = 0; j <= t; ++j) {
        for (int z : base.shells[static_cast<std::size_t>(j)]) {
            RatVec f = hom_vector(s, base, z);
            hom_span.insert(f);
            joint.insert(std::move(f));
        }
        for (const RatVec& f : l_basis(s, bm, j).basis.vectors) {
            l_span.insert(f);
            joint.insert(f);
        }
    }
    return hom_span.rank() == l_span.rank() && l_span.rank() == joint.rank();
}

struct RatioExpansion {
    std::optional<Rational> ratio;  // the common value of c_i/(theta_i* - theta_0*)
    Rational alpha = 0;             // coefficient of E_0 u0-hat in the expansion
    Rational beta = 0;              // coefficient of E_1 u0-hat
    bool footnote_ok = false;       // alpha == sum_i c_i k_i
};

// The quantity c_i/(theta_i* - theta_0*), together with the expansion
// sum_i c_i A_i u0-hat = alpha E_0 u0-hat + beta E_1 u0-hat when it exists.
inline RatioExpansion ratio_expansion(const Scheme& s, const BoseMesnerData& bm) {
    const auto& in = s.intersection_numbers();
    require(in.p_polynomial && bm.q_polynomial,
            "ratio_expansion: needs a P- and Q-polynomial scheme");
    RatioExpansion out;
    const Rational theta0_star = bm.Q(0, 1);
    std::optional<Rational> common;
    for (int i = 1; i <= s.d; ++i) {
        const Rational theta_i_star = bm.Q(static_cast<std::size_t>(i), 1);
        require(theta_i_star != theta0_star, "ratio_expansion: theta_i* = theta_0* degeneracy");
        const Rational value = Rational(in.c[static_cast<std::size_t>(i)]) / (theta_i_star - theta0_star);
        if (!common) common = value;
        else if (*common != value) return out;  // not constant
    }
    out.ratio = common;
    // alpha from shell 1, beta = -alpha/theta_0*; then re-check every shell
    out.alpha = Rational(in.c[1]) * Rational(bm.n) * theta0_star /
                (theta0_star - bm.Q(1, 1));
    out.beta = -out.alpha / theta0_star;
    for (int r = 0; r <= s.d; ++r) {
        const Rational cr = (r == 0) ? Rational(0) : Rational(in.c[static_cast<std::size_t>(r)]);
        require(Rational(bm.n) * cr == out.alpha + out.beta * bm.Q(static_cast<std::size_t>(r), 1),
                "ratio_expansion: expansion identity failed");
    }
    Rational ck_sum = 0;
    for (int i = 1; i <= s.d; ++i)
        ck_sum += Rational(in.c[static_cast<std::size_t>(i)]) * Rational(in.k[static_cast<std::size_t>(i)]);
    out.footnote_ok = out.alpha == ck_sum;
    return out;
}

inline std::optional<Rational> ratio_constancy(const Scheme& s, const BoseMesnerData& bm) {
    return ratio_expansion(s, bm).ratio;
}

}  // namespace relans
