#pragma once

#include <cstddef>
#include <vector>

#include "relans/rational.hpp"

namespace relans {

// Dense integer polynomial, coeffs[i] is the coefficient of x^i. The zero
// polynomial has an empty coefficient vector.
struct IntPoly {
    std::vector<Int> coeffs;

    static IntPoly zero() { return {}; }
    static IntPoly constant(Int c) {
        IntPoly p;
        if (c != 0) p.coeffs = {std::move(c)};
        return p;
    }
    // x^n - a convenience used when building x^q - 1
    static IntPoly monomial(std::size_t n, Int c = 1) {
        IntPoly p;
        if (c != 0) {
            p.coeffs.assign(n + 1, Int(0));
            p.coeffs[n] = std::move(c);
        }
        return p;
    }

    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    void trim() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }

    Int eval(const Int& x) const {
        Int acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
        return acc;
    }

    bool operator==(const IntPoly& o) const { return coeffs == o.coeffs; }
};

inline IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
    r.trim();
    return r;
}

inline IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    IntPoly r;
    r.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), Int(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) r.coeffs[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
    r.trim();
    return r;
}

inline IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly::zero();
    IntPoly r;
    r.coeffs.assign(a.coeffs.size() + b.coeffs.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (a.coeffs[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j)
            if (b.coeffs[j] != 0) r.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return r;
}

// Division that must be exact over the integers (divisor monic up to sign in
// all uses here); throws when a coefficient fails to divide or a remainder
// survives.
inline IntPoly div_exact(IntPoly num, const IntPoly& den) {
    require(!den.is_zero(), "div_exact: division by zero polynomial");
    IntPoly q;
    if (num.degree() < den.degree()) {
        require(num.is_zero(), "div_exact: nonzero remainder");
        return q;
    }
    q.coeffs.assign(static_cast<std::size_t>(num.degree() - den.degree()) + 1, Int(0));
    const Int& lead = den.coeffs.back();
    for (int k = num.degree() - den.degree(); k >= 0; --k) {
        const Int& top = num.coeffs[static_cast<std::size_t>(k + den.degree())];
        if (top == 0) continue;
        require(top % lead == 0, "div_exact: leading coefficient does not divide");
        Int c = top / lead;
        for (std::size_t i = 0; i < den.coeffs.size(); ++i)
            num.coeffs[static_cast<std::size_t>(k) + i] -= c * den.coeffs[i];
        q.coeffs[static_cast<std::size_t>(k)] = std::move(c);
    }
    num.trim();
    require(num.is_zero(), "div_exact: nonzero remainder");
    return q;
}

// Remainder of num mod a monic divisor, exact over the integers.
inline IntPoly mod_monic(IntPoly num, const IntPoly& den) {
    require(!den.is_zero() && den.coeffs.back() == 1, "mod_monic: divisor must be monic");
    for (int k = num.degree() - den.degree(); k >= 0; --k) {
        const Int c = num.coeffs[static_cast<std::size_t>(k + den.degree())];
        if (c == 0) continue;
        for (std::size_t i = 0; i < den.coeffs.size(); ++i)
            num.coeffs[static_cast<std::size_t>(k) + i] -= c * den.coeffs[i];
    }
    num.trim();
    return num;
}

// Distinct integer roots, found by divisor trial on the constant term after
// factoring out powers of x. Sorted descending.
inline std::vector<Int> integer_roots(IntPoly p) {
    std::vector<Int> roots;
    require(!p.is_zero(), "integer_roots: zero polynomial");
    std::size_t first_nonzero = 0;
    while (p.coeffs[first_nonzero] == 0) ++first_nonzero;
    if (first_nonzero > 0) {
        roots.push_back(0);
        p.coeffs.erase(p.coeffs.begin(), p.coeffs.begin() + static_cast<std::ptrdiff_t>(first_nonzero));
    }
    const Int c0 = boost::multiprecision::abs(p.coeffs.front());
    for (Int trial = 1; trial * trial <= c0; ++trial) {
        if (c0 % trial != 0) continue;
        for (const Int& div : {trial, c0 / trial}) {
            for (const Int& cand : {div, Int(-div)}) {
                if (p.eval(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end())
                    roots.push_back(cand);
            }
        }
    }
    std::sort(roots.begin(), roots.end(), [](const Int& a, const Int& b) { return a > b; });
    return roots;
}

// det(xI - T) for a tridiagonal matrix given by sub/diag/super bands, via the
// leading-principal-minor recurrence. diag has n entries, sub and super n-1.
inline IntPoly tridiagonal_char_poly(const std::vector<Int>& sub, const std::vector<Int>& diag,
                                     const std::vector<Int>& super) {
    const std::size_t n = diag.size();
    require(sub.size() + 1 == n && super.size() + 1 == n, "tridiagonal_char_poly: band sizes");
    IntPoly prev = IntPoly::constant(1);
    IntPoly cur;
    cur.coeffs = {-diag[0], Int(1)};
    cur.trim();
    for (std::size_t i = 1; i < n; ++i) {
        IntPoly x_minus_a;
        x_minus_a.coeffs = {-diag[i], Int(1)};
        x_minus_a.trim();
        IntPoly next = x_minus_a * cur - IntPoly::constant(sub[i - 1] * super[i - 1]) * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

}  // namespace relans
