#pragma once

// Scalar types for the library.  Everything downstream is templated on the
// scalar; the two families used in practice are
//   * boost::multiprecision binary floats (real30/real60/real120/real240) for
//     quadrature and probing, and
//   * boost::multiprecision::cpp_rational for the exact-identity paths
//     (products of rationals raised to integer powers).
//
// All floating types are header-only backends, so results are deterministic
// across platforms for a fixed digit count.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace rellich {

namespace mp = boost::multiprecision;

template <unsigned Digits10>
using real_digits = mp::number<mp::cpp_bin_float<Digits10>, mp::et_off>;

using real30  = real_digits<30>;
using real60  = real_digits<60>;   // project default
using real120 = real_digits<120>;
using real240 = real_digits<240>;

// expression templates off, same as the floats: mixed arithmetic then always
// yields plain values, which the generic template code relies on
using rational =
    mp::number<mp::backends::rational_adaptor<mp::backends::cpp_int_backend<>>, mp::et_off>;
using bigint = mp::cpp_int;

template <class T>
struct is_rational : std::false_type {};
template <>
struct is_rational<rational> : std::true_type {};
template <class T>
inline constexpr bool is_rational_v = is_rational<T>::value;

// Decimal digits carried by a scalar type (used for output formatting and
// for tolerance floors).
template <class Real>
constexpr int scalar_digits10() {
    if constexpr (is_rational_v<Real>)
        return 0;  // exact
    else
        return static_cast<int>(std::numeric_limits<Real>::digits10);
}

// cpp_int's string constructor follows C literal rules, so a leading zero
// would flip it into octal; always strip to plain decimal first
inline bigint bigint_from_decimal(std::string s) {
    std::string sign;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        if (s[0] == '-') sign = "-";
        s.erase(s.begin());
    }
    auto nz = s.find_first_not_of('0');
    s = (nz == std::string::npos) ? std::string("0") : s.substr(nz);
    return bigint(sign + s);
}

template <class Real>
Real scalar_from_string(const std::string& s) {
    if constexpr (is_rational_v<Real>) {
        // accept "a/b" and plain decimals "x.yz" / "-x.yz"
        auto slash = s.find('/');
        if (slash != std::string::npos)
            return rational(bigint_from_decimal(s.substr(0, slash)),
                            bigint_from_decimal(s.substr(slash + 1)));
        auto dot = s.find('.');
        if (dot == std::string::npos) return rational(bigint_from_decimal(s));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        bigint den = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        return rational(bigint_from_decimal(digits), den);
    } else {
        return Real(s);
    }
}

// Round-trip-exact decimal rendering at the type's working precision.
template <class Real>
std::string scalar_to_string(const Real& x) {
    std::ostringstream os;
    if constexpr (is_rational_v<Real>) {
        os << x;
    } else {
        os.precision(std::numeric_limits<Real>::max_digits10);
        os << x;
    }
    return os.str();
}

// True when x holds an integer value (for rationals: denominator 1; for
// floats: equal to its truncation and within integer range of long long).
template <class Real>
bool is_integer_value(const Real& x, long long* out = nullptr) {
    if constexpr (is_rational_v<Real>) {
        if (mp::denominator(x) != 1) return false;
        bigint n = mp::numerator(x);
        if (out) *out = n.template convert_to<long long>();
        return true;
    } else {
        Real t = trunc(x);
        if (t != x) return false;
        if (abs(x) > Real(1e15)) return false;
        if (out) *out = x.template convert_to<long long>();
        return true;
    }
}

// x^n for integer n, valid for every scalar (rationals included).
template <class Real>
Real pow_integer(Real x, long long n) {
    if (n < 0) {
        if (x == 0) throw std::domain_error("pow_integer: 0 to negative power");
        return Real(1) / pow_integer(x, -n);
    }
    Real r(1);
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}

// x^p with a possibly non-integer exponent.  For integer p this is the true
// power (signs included).  For non-integer p and x < 0 the real power is
// undefined; we use the signed-magnitude convention sign(x)*|x|^p, which is
// what the optimality analysis consumes (it only ever uses |x|^p, and inside
// the validity region of the inequality every base is positive anyway).
template <class Real>
Real pow_signed(const Real& x, const Real& p) {
    long long n;
    if (is_integer_value(p, &n)) return pow_integer(x, n);
    if constexpr (is_rational_v<Real>) {
        throw std::domain_error("pow_signed: rational scalar needs an integer exponent");
    } else {
        if (x == 0) {
            if (p <= 0) throw std::domain_error("pow_signed: 0 to non-positive power");
            return Real(0);
        }
        Real mag = exp(p * log(abs(x)));
        return x < 0 ? -mag : mag;
    }
}

// |x|^p for any scalar/exponent combination that makes sense.
template <class Real>
Real pow_abs(const Real& x, const Real& p) {
    long long n;
    if (is_integer_value(p, &n)) {
        Real r = pow_integer(x, n);
        return r < 0 ? Real(-r) : r;
    }
    if constexpr (is_rational_v<Real>) {
        throw std::domain_error("pow_abs: rational scalar needs an integer exponent");
    } else {
        if (x == 0) {
            if (p <= 0) throw std::domain_error("pow_abs: 0 to non-positive power");
            return Real(0);
        }
        return exp(p * log(abs(x)));
    }
}

template <class Real>
Real scalar_abs(const Real& x) {
    return x < 0 ? Real(-x) : x;
}

}  // namespace rellich
