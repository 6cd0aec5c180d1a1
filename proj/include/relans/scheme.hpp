#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "relans/dual_polar_space.hpp"
#include "relans/rational.hpp"

namespace relans {

enum class Family { kHamming, kJohnson, kDualPolarC, kDoob };

struct SchemeSpec {
    Family family = Family::kHamming;
    int d = 0;  // hamming/dual polar classes, johnson subset size
    int q = 0;  // alphabet / field size
    int v = 0;  // johnson ground-set size
    int n = 0;  // doob: Shrikhande factors
    int m = 0;  // doob: K4 factors

    static SchemeSpec hamming(int d, int q) { return {Family::kHamming, d, q, 0, 0, 0}; }
    static SchemeSpec johnson(int v, int d) { return {Family::kJohnson, d, 0, v, 0, 0}; }
    static SchemeSpec dual_polar_c(int d, int q) { return {Family::kDualPolarC, d, q, 0, 0, 0}; }
    static SchemeSpec doob(int n, int m) { return {Family::kDoob, 0, 0, 0, n, m}; }

    std::string name() const {
        std::ostringstream os;
        switch (family) {
            case Family::kHamming: os << "H(" << d << "," << q << ")"; break;
            case Family::kJohnson: os << "J(" << v << "," << d << ")"; break;
            case Family::kDualPolarC: os << "C" << d << "(" << q << ")"; break;
            case Family::kDoob: os << "Doob(" << n << "," << m << ")"; break;
        }
        return os.str();
    }

    // One-line text form used by design files and the CLI.
    std::string to_text() const {
        std::ostringstream os;
        switch (family) {
            case Family::kHamming: os << "family=hamming d=" << d << " q=" << q; break;
            case Family::kJohnson: os << "family=johnson v=" << v << " d=" << d; break;
            case Family::kDualPolarC: os << "family=dualpolarC d=" << d << " q=" << q; break;
            case Family::kDoob: os << "family=doob n=" << n << " m=" << m; break;
        }
        return os.str();
    }

    static std::optional<SchemeSpec> parse(const std::string& text) {
        std::map<std::string, std::string> kv;
        std::istringstream is(text);
        std::string tok;
        while (is >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) return std::nullopt;
            kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
        const auto fam = kv.find("family");
        if (fam == kv.end()) return std::nullopt;
        auto geti = [&kv](const char* key) -> std::optional<int> {
            const auto it = kv.find(key);
            if (it == kv.end()) return std::nullopt;
            try {
                return std::stoi(it->second);
            } catch (const std::exception&) {
                return std::nullopt;
            }
        };
        SchemeSpec s;
        if (fam->second == "hamming") {
            const auto d = geti("d"), q = geti("q");
            if (!d || !q) return std::nullopt;
            s = hamming(*d, *q);
        } else if (fam->second == "johnson") {
            const auto v = geti("v"), d = geti("d");
            if (!v || !d) return std::nullopt;
            s = johnson(*v, *d);
        } else if (fam->second == "dualpolarC") {
            const auto d = geti("d"), q = geti("q");
            if (!d || !q) return std::nullopt;
            s = dual_polar_c(*d, *q);
        } else if (fam->second == "doob") {
            const auto n = geti("n"), m = geti("m");
            if (!n || !m) return std::nullopt;
            s = doob(*n, *m);
        } else {
            return std::nullopt;
        }
        return s;
    }
};

// p^k_{ij} table plus the P-polynomial arrays when the natural relation
// ordering is metric.
struct IntersectionNumbers {
    int d = 0;
    std::vector<std::vector<std::vector<Int>>> p;  // p[k][i][j]
    std::vector<Int> k;                            // valencies k_0..k_d
    bool p_polynomial = false;
    std::vector<Int> c, a, b;  // c[1..d], a[0..d], b[0..d-1]; unused slots 0
};

struct BasePointShells {
    int u0 = 0;
    std::vector<int> shell_of;
    std::vector<std::vector<int>> shells;  // X_0..X_d, ascending vertex order
    std::vector<Int> valencies;
};

// A concrete association scheme: vertex set with a relation table, checked
// against the scheme axioms at construction time. Immutable afterwards.
class Scheme {
public:
    SchemeSpec spec;
    int n_vertices = 0;
    int d = 0;
    std::vector<std::string> vertex_labels;
    std::vector<std::vector<int>> adjacency;  // R_1 neighbor lists

    // family payloads backing the canonical enumeration
    std::vector<std::vector<int>> words;    // hamming digits / doob factor ids
    std::vector<std::vector<int>> subsets;  // johnson d-subsets
    dual_polar::Space dp_space;             // dual polar geometry

    int relation(int x, int y) const {
        return rel_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n_vertices) +
                    static_cast<std::size_t>(y)];
    }

    const IntersectionNumbers& intersection_numbers() const { return inter_; }

    friend Scheme build_scheme(const SchemeSpec& spec);

private:
    std::vector<std::uint8_t> rel_;
    IntersectionNumbers inter_;

    void set_relation(int x, int y, int r) {
        rel_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n_vertices) +
             static_cast<std::size_t>(y)] = static_cast<std::uint8_t>(r);
    }

    void finalize();
};

namespace detail {

// Every shipped family is vertex transitive, so intersection numbers may be
// read off representative pairs; for small schemes the well-definedness of
// p^k_{ij} (the association scheme axiom) is verified over all pairs, above
// that over two representative pairs per relation.
constexpr int kExhaustiveAxiomLimit = 256;

inline std::vector<std::vector<Int>> count_paths(const Scheme& s, int x, int y) {
    std::vector<std::vector<Int>> cnt(static_cast<std::size_t>(s.d + 1),
                                      std::vector<Int>(static_cast<std::size_t>(s.d + 1), Int(0)));
    for (int z = 0; z < s.n_vertices; ++z)
        ++cnt[static_cast<std::size_t>(s.relation(x, z))][static_cast<std::size_t>(s.relation(z, y))];
    return cnt;
}

inline std::string digits_label(const std::vector<int>& digits) {
    std::string out;
    for (int t : digits) out += static_cast<char>('0' + t);
    return out;
}

inline int shrikhande_distance(int a, int b) {
    const int da = ((a >> 2) - (b >> 2)) & 3;
    const int db = ((a & 3) - (b & 3)) & 3;
    if (da == 0 && db == 0) return 0;
    const bool adj = (da == 0 && (db == 1 || db == 3)) || (db == 0 && (da == 1 || da == 3)) ||
                     (da == 1 && db == 1) || (da == 3 && db == 3);
    return adj ? 1 : 2;
}

}  // namespace detail

inline void Scheme::finalize() {
    const int n = n_vertices;
    for (int x = 0; x < n; ++x) {
        require(relation(x, x) == 0, "scheme axiom: relation(x,x) != 0");
        for (int y = x + 1; y < n; ++y) {
            require(relation(x, y) == relation(y, x), "scheme axiom: relation not symmetric");
            require(relation(x, y) >= 1 && relation(x, y) <= d, "scheme axiom: relation out of range");
        }
    }

    adjacency.assign(static_cast<std::size_t>(n), {});
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (relation(x, y) == 1) adjacency[static_cast<std::size_t>(x)].push_back(y);

    inter_.d = d;
    inter_.p.assign(static_cast<std::size_t>(d + 1), {});
    std::vector<int> rep(static_cast<std::size_t>(d + 1), -1);
    for (int k = 0; k <= d; ++k) {
        int fx = -1, fy = -1;
        for (int x = 0; x < n && fx < 0; ++x)
            for (int y = 0; y < n; ++y)
                if (relation(x, y) == k) {
                    fx = x;
                    fy = y;
                    break;
                }
        require(fx >= 0, "scheme axiom: relation class " + std::to_string(k) + " is empty");
        inter_.p[static_cast<std::size_t>(k)] = detail::count_paths(*this, fx, fy);
        rep[static_cast<std::size_t>(k)] = fx;
    }

    if (n <= detail::kExhaustiveAxiomLimit) {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                require(detail::count_paths(*this, x, y) ==
                            inter_.p[static_cast<std::size_t>(relation(x, y))],
                        "scheme axiom: p^k_{ij} not well defined");
    } else {
        for (int k = 0; k <= d; ++k) {
            const int x0 = rep[static_cast<std::size_t>(k)];
            const int x1 = (x0 + 1) % n;
            for (int y = 0; y < n; ++y)
                if (relation(x1, y) == k) {
                    require(detail::count_paths(*this, x1, y) == inter_.p[static_cast<std::size_t>(k)],
                            "scheme axiom: p^k_{ij} spot check failed");
                    break;
                }
        }
    }

    inter_.k.resize(static_cast<std::size_t>(d + 1));
    for (int i = 0; i <= d; ++i)
        inter_.k[static_cast<std::size_t>(i)] =
            inter_.p[0][static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];

    // P-polynomial in the natural ordering: p^k_{1j} tridiagonal with positive
    // off-diagonal entries.
    inter_.p_polynomial = true;
    for (int k = 0; k <= d && inter_.p_polynomial; ++k)
        for (int j = 0; j <= d; ++j)
            if (std::abs(k - j) > 1 && inter_.p[static_cast<std::size_t>(k)][1][static_cast<std::size_t>(j)] != 0)
                inter_.p_polynomial = false;
    if (inter_.p_polynomial) {
        inter_.c.assign(static_cast<std::size_t>(d + 1), Int(0));
        inter_.a.assign(static_cast<std::size_t>(d + 1), Int(0));
        inter_.b.assign(static_cast<std::size_t>(d + 1), Int(0));
        for (int i = 0; i <= d; ++i) {
            if (i >= 1) inter_.c[static_cast<std::size_t>(i)] = inter_.p[static_cast<std::size_t>(i)][1][static_cast<std::size_t>(i - 1)];
            inter_.a[static_cast<std::size_t>(i)] = inter_.p[static_cast<std::size_t>(i)][1][static_cast<std::size_t>(i)];
            if (i < d) inter_.b[static_cast<std::size_t>(i)] = inter_.p[static_cast<std::size_t>(i)][1][static_cast<std::size_t>(i + 1)];
        }
        for (int i = 1; i <= d && inter_.p_polynomial; ++i)
            if (inter_.c[static_cast<std::size_t>(i)] == 0 || (i < d && inter_.b[static_cast<std::size_t>(i)] == 0))
                inter_.p_polynomial = false;
        if (!inter_.p_polynomial) {
            inter_.c.clear();
            inter_.a.clear();
            inter_.b.clear();
        }
    }
}

inline Scheme build_scheme(const SchemeSpec& spec) {
    Scheme s;
    s.spec = spec;
    switch (spec.family) {
        case Family::kHamming: {
            require(spec.d >= 1 && spec.q >= 2, "hamming: need d >= 1, q >= 2");
            long long n = 1;
            for (int i = 0; i < spec.d; ++i) {
                n *= spec.q;
                require(n <= 40000, "hamming: scheme too large");
            }
            s.n_vertices = static_cast<int>(n);
            s.d = spec.d;
            s.words.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < s.n_vertices; ++i) {
                std::vector<int> w(static_cast<std::size_t>(spec.d));
                int t = i;
                for (int l = spec.d - 1; l >= 0; --l) {
                    w[static_cast<std::size_t>(l)] = t % spec.q;
                    t /= spec.q;
                }
                s.words[static_cast<std::size_t>(i)] = std::move(w);
                s.vertex_labels.push_back(detail::digits_label(s.words[static_cast<std::size_t>(i)]));
            }
            s.rel_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
            for (int x = 0; x < s.n_vertices; ++x)
                for (int y = 0; y < s.n_vertices; ++y) {
                    int dist = 0;
                    for (int l = 0; l < spec.d; ++l)
                        dist += s.words[static_cast<std::size_t>(x)][static_cast<std::size_t>(l)] !=
                                s.words[static_cast<std::size_t>(y)][static_cast<std::size_t>(l)];
                    s.set_relation(x, y, dist);
                }
            break;
        }
        case Family::kJohnson: {
            require(spec.d >= 1 && spec.v >= 2 * spec.d, "johnson: need v >= 2d >= 2");
            std::vector<std::vector<int>> subs;
            std::vector<int> cur;
            // generate d-subsets of {1..v}; sort colexicographically
            auto rec = [&](auto&& self, int next) -> void {
                if (static_cast<int>(cur.size()) == spec.d) {
                    subs.push_back(cur);
                    return;
                }
                for (int e = next; e <= spec.v; ++e) {
                    cur.push_back(e);
                    self(self, e + 1);
                    cur.pop_back();
                }
            };
            rec(rec, 1);
            std::sort(subs.begin(), subs.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
                return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
            });
            s.n_vertices = static_cast<int>(subs.size());
            s.d = spec.d;
            s.subsets = std::move(subs);
            for (const auto& sub : s.subsets) {
                std::string lab = "{";
                for (std::size_t i = 0; i < sub.size(); ++i)
                    lab += (i ? "," : "") + std::to_string(sub[i]);
                s.vertex_labels.push_back(lab + "}");
            }
            s.rel_.assign(static_cast<std::size_t>(s.n_vertices) * static_cast<std::size_t>(s.n_vertices), 0);
            for (int x = 0; x < s.n_vertices; ++x)
                for (int y = 0; y < s.n_vertices; ++y) {
                    int common = 0;
                    std::size_t i = 0, j = 0;
                    const auto& ax = s.subsets[static_cast<std::size_t>(x)];
                    const auto& ay = s.subsets[static_cast<std::size_t>(y)];
                    while (i < ax.size() && j < ay.size()) {
                        if (ax[i] == ay[j]) ++common, ++i, ++j;
                        else if (ax[i] < ay[j]) ++i;
                        else ++j;
                    }
                    s.set_relation(x, y, spec.d - common);
                }
            break;
        }
        case Family::kDualPolarC: {
            require(spec.d >= 2 && spec.d <= 3, "dual polar: d in {2,3}");
            require(spec.q == 2 || spec.q == 3, "dual polar: q in {2,3}");
            s.dp_space = dual_polar::enumerate_space(spec.d, spec.q);
            s.n_vertices = static_cast<int>(s.dp_space.vertices.size());
            s.d = spec.d;
            for (const auto& vtx : s.dp_space.vertices) {
                std::string lab;
                for (std::size_t r = 0; r < vtx.size(); ++r) {
                    if (r) lab += ";";
                    lab += detail::digits_label(vtx[r]);
                }
                s.vertex_labels.push_back(lab);
            }
            s.rel_.assign(static_cast<std::size_t>(s.n_vertices) * static_cast<std::size_t>(s.n_vertices), 0);
            for (int x = 0; x < s.n_vertices; ++x)
                for (int y = x; y < s.n_vertices; ++y) {
                    const int r = dual_polar::distance(s.dp_space, x, y);
                    s.set_relation(x, y, r);
                    s.set_relation(y, x, r);
                }
            break;
        }
        case Family::kDoob: {
            require(spec.n >= 1 && spec.m >= 0, "doob: need n >= 1, m >= 0");
            const int factors = spec.n + spec.m;
            long long n = 1;
            for (int i = 0; i < factors; ++i) {
                n *= (i < spec.n) ? 16 : 4;
                require(n <= 40000, "doob: scheme too large");
            }
            s.n_vertices = static_cast<int>(n);
            s.d = 2 * spec.n + spec.m;
            s.words.resize(static_cast<std::size_t>(n));
            for (int i = 0; i < s.n_vertices; ++i) {
                std::vector<int> w(static_cast<std::size_t>(factors));
                int t = i;
                for (int f = factors - 1; f >= 0; --f) {
                    const int radix = (f < spec.n) ? 16 : 4;
                    w[static_cast<std::size_t>(f)] = t % radix;
                    t /= radix;
                }
                s.words[static_cast<std::size_t>(i)] = std::move(w);
                std::string lab;
                for (int f = 0; f < factors; ++f) {
                    if (f) lab += "|";
                    const int val = s.words[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)];
                    if (f < spec.n)
                        lab += "(" + std::to_string(val >> 2) + "," + std::to_string(val & 3) + ")";
                    else
                        lab += std::to_string(val);
                }
                s.vertex_labels.push_back(lab);
            }
            s.rel_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
            for (int x = 0; x < s.n_vertices; ++x)
                for (int y = 0; y < s.n_vertices; ++y) {
                    int dist = 0;
                    for (int f = 0; f < factors; ++f) {
                        const int ax = s.words[static_cast<std::size_t>(x)][static_cast<std::size_t>(f)];
                        const int ay = s.words[static_cast<std::size_t>(y)][static_cast<std::size_t>(f)];
                        if (f < spec.n) dist += detail::shrikhande_distance(ax, ay);
                        else dist += ax != ay;
                    }
                    s.set_relation(x, y, dist);
                }
            break;
        }
    }
    s.finalize();
    return s;
}

inline BasePointShells shells(const Scheme& s, int u0) {
    require(u0 >= 0 && u0 < s.n_vertices, "shells: base vertex out of range");
    auto build = [&s](int base) {
        BasePointShells bp;
        bp.u0 = base;
        bp.shell_of.resize(static_cast<std::size_t>(s.n_vertices));
        bp.shells.assign(static_cast<std::size_t>(s.d + 1), {});
        for (int x = 0; x < s.n_vertices; ++x) {
            const int r = s.relation(base, x);
            bp.shell_of[static_cast<std::size_t>(x)] = r;
            bp.shells[static_cast<std::size_t>(r)].push_back(x);
        }
        bp.valencies.resize(static_cast<std::size_t>(s.d + 1));
        for (int r = 0; r <= s.d; ++r)
            bp.valencies[static_cast<std::size_t>(r)] = static_cast<int>(bp.shells[static_cast<std::size_t>(r)].size());
        return bp;
    };
    BasePointShells bp = build(u0);
    Int total = 0;
    for (const auto& k : bp.valencies) total += k;
    require(total == s.n_vertices, "shells: valencies do not sum to |X|");
    require(bp.shells[0].size() == 1 && bp.shells[0][0] == u0, "shells: X_0 != {u0}");
    // valencies must not depend on the base point
    const BasePointShells other = build((u0 + 1) % s.n_vertices);
    require(other.valencies == bp.valencies, "shells: valencies depend on base point");
    return bp;
}

// Path-length distances from a vertex in the graph (X, R_1); the metric
// oracle for the shipped families.
inline std::vector<int> bfs_distances(const Scheme& s, int from) {
    std::vector<int> dist(static_cast<std::size_t>(s.n_vertices), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(from)] = 0;
    q.push(from);
    while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (int y : s.adjacency[static_cast<std::size_t>(x)])
            if (dist[static_cast<std::size_t>(y)] < 0) {
                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                q.push(y);
            }
    }
    return dist;
}

}  // namespace relans
