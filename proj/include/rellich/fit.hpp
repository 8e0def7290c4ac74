#pragma once

// Small dense linear-algebra helpers used for coefficient extraction:
// polynomial interpolation/fits in one variable and least squares via
// normal equations.  Sizes here are tiny (<= 16), so plain Gaussian
// elimination with partial pivoting is plenty.

#include <stdexcept>
#include <vector>

#include "rellich/scalar.hpp"

namespace rellich {

// Solve A x = b in place; A is n x n row-major.
template <class Real>
std::vector<Real> solve_linear(std::vector<Real> A, std::vector<Real> b) {
    const std::size_t n = b.size();
    if (A.size() != n * n) throw std::invalid_argument("solve_linear: shape");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (scalar_abs(A[r * n + col]) > scalar_abs(A[piv * n + col])) piv = r;
        if (A[piv * n + col] == 0) throw std::domain_error("solve_linear: singular");
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A[piv * n + c], A[col * n + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            Real f = A[r * n + col] / A[col * n + col];
            if (f == 0) continue;
            for (std::size_t c = col; c < n; ++c) A[r * n + c] -= f * A[col * n + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Real> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        Real s = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) s -= A[ri * n + c] * x[c];
        x[ri] = s / A[ri * n + ri];
    }
    return x;
}

// Least squares min ||A x - b||_2 via normal equations with column
// equilibration (basis columns can span many orders of magnitude, and the
// normal equations square the condition number).  A is m x n row-major,
// m >= n.
template <class Real>
std::vector<Real> solve_lstsq(const std::vector<Real>& A, const std::vector<Real>& b,
                              std::size_t m, std::size_t n) {
    if (A.size() != m * n || b.size() != m || m < n)
        throw std::invalid_argument("solve_lstsq: shape");
    std::vector<Real> scale(n, Real(0));
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t i = 0; i < n; ++i)
            if (scalar_abs(A[r * n + i]) > scale[i]) scale[i] = scalar_abs(A[r * n + i]);
    for (auto& s : scale)
        if (s == 0) s = Real(1);
    std::vector<Real> AtA(n * n, Real(0)), Atb(n, Real(0));
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const Real ai = A[r * n + i] / scale[i];
            Atb[i] += ai * b[r];
            for (std::size_t j = i; j < n; ++j) AtA[i * n + j] += ai * (A[r * n + j] / scale[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) AtA[i * n + j] = AtA[j * n + i];
    auto x = solve_linear<Real>(std::move(AtA), std::move(Atb));
    for (std::size_t i = 0; i < n; ++i) x[i] /= scale[i];
    return x;
}

// Interpolating polynomial through (xs[i], ys[i]); returns coefficients
// c[0..n-1], p(x) = sum c[j] x^j.  Exact fit (Vandermonde solve).
template <class Real>
std::vector<Real> poly_interpolate(const std::vector<Real>& xs, const std::vector<Real>& ys) {
    const std::size_t n = xs.size();
    if (ys.size() != n || n == 0) throw std::invalid_argument("poly_interpolate: shape");
    std::vector<Real> V(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        Real p(1);
        for (std::size_t c = 0; c < n; ++c) {
            V[r * n + c] = p;
            p *= xs[r];
        }
    }
    return solve_linear<Real>(std::move(V), std::vector<Real>(ys));
}

template <class Real>
Real poly_eval(const std::vector<Real>& coeffs, const Real& x) {
    Real s(0);
    for (std::size_t j = coeffs.size(); j-- > 0;) s = s * x + coeffs[j];
    return s;
}

}  // namespace rellich
