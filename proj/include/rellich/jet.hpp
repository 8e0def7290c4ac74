#pragma once

// Truncated Taylor ("jet") arithmetic in one variable.
//
// A Jet of order n at center t stores the n+1 scaled Taylor coefficients
//     coeffs[j] = f^(j)(t) / j!
// Project-wide convention: always the scaled (divided-by-factorial) form.
// Arithmetic is exact truncation: the order-n jet of f op g depends only on
// the order-n jets of f and g.

#include <cassert>
#include <stdexcept>
#include <vector>

#include "rellich/scalar.hpp"

namespace rellich {

template <class Real>
struct Jet {
    Real center{0};
    std::vector<Real> coeffs;  // size = order+1

    Jet() = default;
    Jet(Real t, int order) : center(t), coeffs(order + 1, Real(0)) {}

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    const Real& value() const { return coeffs[0]; }
    Real& value() { return coeffs[0]; }

    // f^(j)(center), unscaled
    Real derivative(int j) const {
        Real f = coeffs.at(j);
        for (int i = 2; i <= j; ++i) f *= i;
        return f;
    }

    // Taylor evaluation at center+h (order-n polynomial; for cross-checks)
    Real eval_shift(const Real& h) const {
        Real s(0);
        for (int j = order(); j >= 0; --j) s = s * h + coeffs[j];
        return s;
    }
};

template <class Real>
Jet<Real> jet_const(const Real& c, const Real& t, int order) {
    Jet<Real> j(t, order);
    j.coeffs[0] = c;
    return j;
}

// jet of the identity map s -> s
template <class Real>
Jet<Real> jet_var(const Real& t, int order) {
    Jet<Real> j(t, order);
    j.coeffs[0] = t;
    if (order >= 1) j.coeffs[1] = Real(1);
    return j;
}

namespace detail {
// mixed orders truncate to the shorter jet: the result is only accurate to
// the lower order anyway
template <class Real>
int common_order(const Jet<Real>& a, const Jet<Real>& b) {
    if (a.center != b.center) throw std::invalid_argument("jet: center mismatch");
    return a.order() < b.order() ? a.order() : b.order();
}
}  // namespace detail

template <class Real>
Jet<Real> operator+(const Jet<Real>& a, const Jet<Real>& b) {
    Jet<Real> r(a.center, detail::common_order(a, b));
    for (int j = 0; j <= r.order(); ++j) r.coeffs[j] = a.coeffs[j] + b.coeffs[j];
    return r;
}

template <class Real>
Jet<Real> operator-(const Jet<Real>& a, const Jet<Real>& b) {
    Jet<Real> r(a.center, detail::common_order(a, b));
    for (int j = 0; j <= r.order(); ++j) r.coeffs[j] = a.coeffs[j] - b.coeffs[j];
    return r;
}

template <class Real>
Jet<Real> operator-(const Jet<Real>& a) {
    Jet<Real> r = a;
    for (auto& c : r.coeffs) c = -c;
    return r;
}

template <class Real>
Jet<Real> operator*(const Jet<Real>& a, const Jet<Real>& b) {
    Jet<Real> r(a.center, detail::common_order(a, b));
    for (int j = 0; j <= r.order(); ++j) {
        if (a.coeffs[j] == 0) continue;
        for (int i = 0; j + i <= r.order(); ++i)
            r.coeffs[j + i] += a.coeffs[j] * b.coeffs[i];
    }
    return r;
}

template <class Real>
Jet<Real> operator*(const Real& c, const Jet<Real>& a) {
    Jet<Real> r = a;
    for (auto& x : r.coeffs) x *= c;
    return r;
}
template <class Real>
Jet<Real> operator*(const Jet<Real>& a, const Real& c) { return c * a; }

template <class Real>
Jet<Real> operator+(const Jet<Real>& a, const Real& c) {
    Jet<Real> r = a;
    r.coeffs[0] += c;
    return r;
}
template <class Real>
Jet<Real> operator+(const Real& c, const Jet<Real>& a) { return a + c; }
template <class Real>
Jet<Real> operator-(const Real& c, const Jet<Real>& a) { return (-a) + c; }
template <class Real>
Jet<Real> operator-(const Jet<Real>& a, const Real& c) { return a + Real(-c); }

template <class Real>
Jet<Real> operator/(const Jet<Real>& a, const Jet<Real>& b) {
    if (b.coeffs[0] == 0) throw std::domain_error("jet: division by zero value");
    Jet<Real> q(a.center, detail::common_order(a, b));
    for (int j = 0; j <= q.order(); ++j) {
        Real s = a.coeffs[j];
        for (int i = 0; i < j; ++i) s -= q.coeffs[i] * b.coeffs[j - i];
        q.coeffs[j] = s / b.coeffs[0];
    }
    return q;
}

template <class Real>
Jet<Real> operator/(const Real& c, const Jet<Real>& b) {
    return jet_const(c, b.center, b.order()) / b;
}
template <class Real>
Jet<Real> operator/(const Jet<Real>& a, const Real& c) {
    Jet<Real> r = a;
    for (auto& x : r.coeffs) x /= c;
    return r;
}

// log f, requires f(t) > 0.  Standard recurrence:
//   l_0 = log a_0,  l_j = (a_j - (1/j) sum_{i=1}^{j-1} i l_i a_{j-i}) / a_0
template <class Real>
Jet<Real> log(const Jet<Real>& a) {
    if (!(a.coeffs[0] > 0)) throw std::domain_error("jet log: non-positive value");
    Jet<Real> l(a.center, a.order());
    using std::log;
    l.coeffs[0] = log(a.coeffs[0]);
    for (int j = 1; j <= a.order(); ++j) {
        Real s = a.coeffs[j];
        for (int i = 1; i < j; ++i) s -= Real(i) * l.coeffs[i] * a.coeffs[j - i] / Real(j);
        l.coeffs[j] = s / a.coeffs[0];
    }
    return l;
}

// exp f.  e_0 = exp a_0,  e_j = (1/j) sum_{i=1}^{j} i a_i e_{j-i}
template <class Real>
Jet<Real> exp(const Jet<Real>& a) {
    Jet<Real> e(a.center, a.order());
    using std::exp;
    e.coeffs[0] = exp(a.coeffs[0]);
    for (int j = 1; j <= a.order(); ++j) {
        Real s(0);
        for (int i = 1; i <= j; ++i) s += Real(i) * a.coeffs[i] * e.coeffs[j - i];
        e.coeffs[j] = s / Real(j);
    }
    return e;
}

// f^q for real exponent q.  Positive value: exp(q log f).  Negative value
// with integer q: sign handled explicitly.
template <class Real>
Jet<Real> pow(const Jet<Real>& a, const Real& q) {
    if (a.coeffs[0] > 0) return exp(q * log(a));
    long long n;
    if (a.coeffs[0] < 0 && is_integer_value(q, &n)) {
        Jet<Real> r = exp(q * log(-a));
        return (n % 2 != 0) ? -r : r;
    }
    throw std::domain_error("jet pow: value <= 0 with non-integer exponent");
}

// jet of f' (order drops by one)
template <class Real>
Jet<Real> jet_derivative(const Jet<Real>& a) {
    if (a.order() < 1) throw std::invalid_argument("jet_derivative: order 0");
    Jet<Real> d(a.center, a.order() - 1);
    for (int j = 0; j <= d.order(); ++j)
        d.coeffs[j] = Real(j + 1) * a.coeffs[j + 1];
    return d;
}

}  // namespace rellich
