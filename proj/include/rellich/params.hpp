#pragma once

// Shared parameter block for the inequality
//   int |D^{m/2} u|^p / d^gamma  >=  A int |u|^p/d^{gamma+mp} + B sum_i ...
// d = distance to a codimension-k affine set; the X_i scale carries an inner
// length D (X_i(t/D)) and the test functions are supported in [0, R].

#include <string>

#include "rellich/scalar.hpp"

namespace rellich {

template <class Real>
struct Params {
    int m{2};          // order of the inequality (m even: Delta^{m/2}; odd: grad Delta^{(m-1)/2})
    Real p{2};         // integrability exponent, p > 1
    Real gamma{0};     // weight exponent, gamma >= 0 for probing
    Real k{12};        // codimension of the singular set
    Real D{0};         // X-scale; 0 means "use e * R"
    Real R{1};         // support radius of the test family

    Real scale() const {
        if (D > 0) return D;
        using std::exp;
        return exp(Real(1)) * R;
    }

    std::string describe() const {
        return "m=" + std::to_string(m) + " p=" + scalar_to_string(p) +
               " gamma=" + scalar_to_string(gamma) + " k=" + scalar_to_string(k) +
               " D=" + scalar_to_string(scale()) + " R=" + scalar_to_string(R);
    }
};

// Hypotheses of the main inequality, enforced at the probing entry points
// (the closed-form constant functions accept anything).
template <class Real>
void validate_for_probe(const Params<Real>& params) {
    if (params.m < 1) throw std::domain_error("params: m >= 1");
    if (!(params.p > 1)) throw std::domain_error("params: p > 1");
    if (params.gamma < 0) throw std::domain_error("params: gamma >= 0");
    if (!(params.k - params.gamma - params.m * params.p > 0))
        throw std::domain_error("params: k > gamma + m p");
    if (!(params.R > 0) || !(params.scale() >= params.R))
        throw std::domain_error("params: 0 < R <= D");
}

}  // namespace rellich
