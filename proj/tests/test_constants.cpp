#include <catch2/catch_amalgamated.hpp>

#include "rellich/constants.hpp"
#include "rellich/param_sampler.hpp"

using namespace rellich;

// Frozen reference values, computed by hand from the factor products:
//   A(2,0; p=2, k=12):  A' = ((12-4)/2)^2 = 16, A'' = ((24-12)/2)^2 = 36 -> 576
//   B = (1/4) * 576 * (1/16 + 1/36) = 13
//   A(2,0; p=2, k=8):   A' = 4, A'' = 16 -> 64;  B = (1/4)*64*(1/4+1/16) = 5
//   A(3,0; p=2, k=12):  A' = 3^2 * 5^2 = 225, A'' = 7^2 = 49 -> 11025
//   B(3,0) = (1/4)*11025*(1/9+1/25+1/49) = 1891/4
//   A(4,0; p=2, k=12):  A' = 4^2*16... = (4*8/2 form) = 64, A'' = 2304 -> 147456
TEST_CASE("frozen sharp constants") {
    rational p = 2, g = 0;
    CHECK(constant_A(2, p, g, rational(12)) == 576);
    CHECK(constant_B(2, p, g, rational(12)) == 13);
    CHECK(q_factor(p, g, rational(12)) == 24);
    CHECK(constant_A(2, p, g, rational(8)) == 64);
    CHECK(constant_B(2, p, g, rational(8)) == 5);
    CHECK(constant_A(3, p, g, rational(12)) == 11025);
    CHECK(constant_B(3, p, g, rational(12)) == rational(1891) / 4);
    CHECK(constant_A(4, p, g, rational(12)) == 147456);
    CHECK(gamma_crit(p, rational(12)) == rational(14) / 3);
}

TEST_CASE("star condition") {
    rational p = 2;
    CHECK(star_condition(1, p, rational(100), rational(3)));  // m=1: always
    // m=2, gamma at the critical weight fails, elsewhere passes
    rational k = 12;
    rational gc = gamma_crit(p, k);
    CHECK_FALSE(star_condition(2, p, gc, k));
    CHECK(star_condition(2, p, gc + 1, k));
    // m=3 needs gamma + p away from the critical weight
    CHECK_FALSE(star_condition(3, p, gc - p, k));
    CHECK(star_condition(3, p, gc - p + rational(1) / 7, k));
    // large p passes regardless: threshold is (13+sqrt(105))/4 ~ 5.81
    CHECK(star_condition(2, rational(6), gamma_crit(rational(6), k), k));
    CHECK_FALSE(star_condition(2, rational(5), gamma_crit(rational(5), k), k));
}

TEST_CASE("A splits as A' * A'' and Q^p = A(2,gamma) on random tuples") {
    for (const auto& tup : sample_rational_tuples(97, 25, 8)) {
        rational p(tup.p);
        CHECK(constant_A(tup.m, p, tup.gamma, tup.k) ==
              constant_A_prime(tup.m, p, tup.gamma, tup.k) *
                  constant_A_second(tup.m, p, tup.gamma, tup.k));
        if (tup.k - tup.gamma - 2 * p > 0)
            CHECK(pow_integer(q_factor(p, tup.gamma, tup.k), tup.p) ==
                  constant_A(2, p, tup.gamma, tup.k));
    }
}

TEST_CASE("order-reduction recursions are exact") {
    for (const auto& tup : sample_rational_tuples(11, 25, 8)) {
        if (tup.m < 3) continue;
        for (const auto& rec : verify_recursions(tup.m, rational(tup.p), tup.gamma, tup.k)) {
            INFO(rec.identity << " at " << rec.params);
            CHECK(rec.exact);
            CHECK(rec.pass);
        }
    }
}

TEST_CASE("proof coefficients: first-order terms vanish identically") {
    for (const auto& tup : sample_rational_tuples(5, 40, 2)) {
        rational p(tup.p);
        if (!(tup.k - tup.gamma - 2 * p > 0)) continue;
        auto rc = proof_r_coefficients(p, tup.gamma, tup.k, tup.beta, tup.mu);
        INFO("p=" << tup.p << " gamma=" << scalar_to_string(tup.gamma)
                  << " k=" << scalar_to_string(tup.k));
        CHECK(rc.r1 == 0);
        CHECK(rc.r2 == 0);
        CHECK(rc.r2p == constant_B(2, p, tup.gamma, tup.k) +
                            tup.mu * constant_A(2, p, tup.gamma, tup.k));
    }
}

TEST_CASE("frozen proof coefficients at p=2, gamma=0") {
    rational p = 2, g = 0;
    auto r12 = proof_r_coefficients(p, g, rational(12), rational(0), rational(0));
    CHECK(r12.r0 == 576);  // r0 = pQ lambda - (p-1) lambda^{p/(p-1)} = Q^p
    CHECK(r12.r2p == 13);
    CHECK(r12.r3pp == -1);
    auto r12mu = proof_r_coefficients(p, g, rational(12), rational(0), rational(1));
    CHECK(r12mu.r2p == 589);  // 13 + 576
    auto r8 = proof_r_coefficients(p, g, rational(8), rational(0), rational(0));
    CHECK(r8.r2p == 5);
    auto r8mu = proof_r_coefficients(p, g, rational(8), rational(0), rational(1));
    CHECK(r8mu.r2p == 69);  // 5 + 64
}

TEST_CASE("critical-weight sign flips with the quadratic 2p^2-13p+8") {
    // p = 2: quadratic = -10, the combined third-order coefficient is negative
    auto low = lemma_new_sign(rational(2), rational(5));
    CHECK(low.quadratic == -10);
    CHECK(low.sum_coeffs == low.sum_closed);
    CHECK(low.sum_coeffs == -2);
    CHECK_FALSE(low.positive);
    // p = 6: quadratic = 2 > 0, the coefficient turns positive
    auto high = lemma_new_sign(rational(6), rational(20));
    CHECK(high.quadratic == 2);
    CHECK(high.sum_coeffs == high.sum_closed);
    CHECK(high.positive);
}

TEST_CASE("alpha polynomial: values and factorization") {
    // alpha_1(s) = s (s + k - 2); at k=12, s*=-4: (-4)(6) = -24, alpha'=2s+10=2
    auto j = alpha_poly_jet(1, rational(12), rational(-4), 2);
    CHECK(j.value() == -24);
    CHECK(j.derivative(1) == 2);
    CHECK(j.derivative(2) == 2);

    for (int p_num : {2, 3}) {
        for (int k_num : {8, 12, 20}) {
            for (int m_lap : {1, 2}) {
                rational p(p_num), k(k_num);
                for (const auto& rec : verify_radio(m_lap, p, k)) {
                    INFO(rec.identity << " at " << rec.params);
                    CHECK(rec.exact);
                    CHECK(rec.pass);
                }
            }
        }
    }
    // non-integer p: factorization still exact in rationals, power identities
    // checked in floating point
    rational p52 = rational(5) / 2;
    auto recs = verify_radio(1, p52, rational(12));
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].identity == "alpha_factorization");
    CHECK(recs[0].pass);
    for (const auto& rec : verify_radio(1, real60(p52), real60(12), 1e-50)) {
        INFO(rec.identity);
        CHECK(rec.pass);
    }
}

TEST_CASE("cancellation chain at the hand-checked point") {
    auto rep = cancellation_report(1, rational(2), rational(12), 2);
    CHECK(rep.all_pass);
    CHECK(rep.a1_00 == -48);   // |alpha|^{p-2} alpha alpha' = (-24)(2)
    CHECK(rep.a2_00 == -11);   // (1/2p)((p-1) alpha'^2 + alpha alpha'') = (4-48)/4
    CHECK(rep.b1_11 == -13);   // ((p-2) a a'' - 2(p-1) a'^2)/(2p) + A_2,00 = -2 - 11
    CHECK(rep.terminal_limit == 13);
    for (const auto& rec : rep.records) {
        INFO(rec.identity);
        CHECK(rec.exact);
    }
}

TEST_CASE("cancellation chain across parameters") {
    for (int p_num : {2, 3}) {
        for (int k_num : {12, 20}) {
            auto rep = cancellation_report(1, rational(p_num), rational(k_num), 2);
            INFO("p=" << p_num << " k=" << k_num);
            CHECK(rep.all_pass);
        }
    }
    // two Laplacians
    auto rep2 = cancellation_report(2, rational(2), rational(16), 2);
    CHECK(rep2.all_pass);
}
