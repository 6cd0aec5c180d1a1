#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace relans {

using Int = boost::multiprecision::cpp_int;

// Exact rational scalar. cpp_rational keeps values in lowest terms with a
// positive denominator, which is exactly the representation contract every
// rank/dimension computation below relies on.
using Rational = boost::multiprecision::cpp_rational;

using RatVec = std::vector<Rational>;

inline Int numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int denom(const Rational& r) { return boost::multiprecision::denominator(r); }

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

// Parses "n" or "n/d"; d must be nonzero. Sign may sit on either part.
inline std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(text));
        const Int num(text.substr(0, slash));
        const Int den(text.substr(slash + 1));
        if (den == 0) return std::nullopt;
        return Rational(num, den);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

inline bool is_integer(const Rational& r) { return denom(r) == 1; }

}  // namespace relans
