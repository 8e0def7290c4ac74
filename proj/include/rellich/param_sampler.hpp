#pragma once

// Deterministic random parameter tuples for identity suites.  Uses raw
// mt19937_64 output (the sequence is fixed by the standard) rather than
// distribution adaptors, whose outputs vary across standard libraries; the
// tiny modulo bias is irrelevant for test-point generation.

#include <cstdint>
#include <random>
#include <vector>

#include "rellich/scalar.hpp"

namespace rellich {

struct RationalTuple {
    int m{1};
    int p{2};
    rational gamma{0};
    rational k{0};
    rational mu{0};
    rational beta{0};
};

// tuples with gamma >= 0 and k > gamma + m p + 1, so every factor of A and B
// is strictly positive and the recursion shift gamma + 2p stays admissible
inline std::vector<RationalTuple> sample_rational_tuples(std::uint64_t seed, int trials,
                                                         int max_m) {
    std::mt19937_64 rng(seed);
    auto draw = [&rng](std::uint64_t n) { return rng() % n; };
    std::vector<RationalTuple> out;
    out.reserve(std::size_t(trials));
    for (int t = 0; t < trials; ++t) {
        RationalTuple r;
        r.m = 1 + int(draw(std::uint64_t(max_m)));
        r.p = 2 + int(draw(2));
        r.gamma = rational(int(draw(41))) / rational(1 + int(draw(12)));
        const rational margin = rational(int(draw(61))) / rational(1 + int(draw(12)));
        r.k = r.gamma + rational(r.m * r.p) + 1 + margin;
        r.mu = rational(int(draw(3)));
        r.beta = rational(int(draw(21))) / rational(1 + int(draw(6)));
        out.push_back(r);
    }
    return out;
}

}  // namespace rellich
