#include <catch2/catch_amalgamated.hpp>

#include "rellich/fit.hpp"
#include "rellich/param_sampler.hpp"

using namespace rellich;

TEST_CASE("rational tuple sampler: deterministic and in bounds") {
    auto a = sample_rational_tuples(42, 60, 8);
    auto b = sample_rational_tuples(42, 60, 8);
    REQUIRE(a.size() == 60);
    REQUIRE(b.size() == 60);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].m == b[i].m);
        CHECK(a[i].p == b[i].p);
        CHECK(a[i].gamma == b[i].gamma);
        CHECK(a[i].k == b[i].k);
        CHECK(a[i].mu == b[i].mu);
        CHECK(a[i].beta == b[i].beta);
    }

    bool any_differs = false;
    auto c = sample_rational_tuples(43, 60, 8);
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i].k != a[i].k || c[i].gamma != a[i].gamma) any_differs = true;
    CHECK(any_differs);

    int seen_m[9] = {0};
    for (const auto& t : a) {
        CHECK(t.m >= 1);
        CHECK(t.m <= 8);
        CHECK((t.p == 2 || t.p == 3));
        CHECK(t.gamma >= 0);
        CHECK(t.k > t.gamma + t.m * t.p);  // strict: validity of every factor
        CHECK(t.mu >= 0);
        CHECK(t.mu <= 2);
        CHECK(t.beta >= 0);
        seen_m[t.m]++;
    }
    // with 60 draws every order should appear at least once
    for (int m = 1; m <= 8; ++m) CHECK(seen_m[m] > 0);

    // capping the order works
    for (const auto& t : sample_rational_tuples(7, 30, 2)) CHECK(t.m <= 2);
}

TEST_CASE("linear solve is exact over the rationals") {
    std::vector<rational> A{rational(2), rational(1), rational(1), rational(3)};
    std::vector<rational> b{rational(5), rational(10)};
    auto x = solve_linear(A, b);
    REQUIRE(x.size() == 2);
    CHECK(x[0] == 1);
    CHECK(x[1] == 3);

    // needs pivoting: zero in the leading position
    std::vector<rational> P{rational(0), rational(1), rational(1), rational(0)};
    auto y = solve_linear(P, std::vector<rational>{rational(7), rational(9)});
    CHECK(y[0] == 9);
    CHECK(y[1] == 7);

    std::vector<rational> S{rational(1), rational(2), rational(2), rational(4)};
    CHECK_THROWS_AS(solve_linear(S, std::vector<rational>{rational(1), rational(2)}),
                    std::domain_error);
}

TEST_CASE("polynomial interpolation recovers exact coefficients") {
    std::vector<rational> xs{rational(0), rational(1), rational(2)};
    std::vector<rational> ys{rational(1), rational(3), rational(7)};  // 1 + x + x^2
    auto c = poly_interpolate(xs, ys);
    REQUIRE(c.size() == 3);
    CHECK(c[0] == 1);
    CHECK(c[1] == 1);
    CHECK(c[2] == 1);
    CHECK(poly_eval(c, rational(5)) == 31);

    // rational nodes, rational data
    std::vector<rational> xq{rational(-1) / 2, rational(1) / 3, rational(2)};
    std::vector<rational> yq;
    for (const auto& x : xq) yq.push_back(rational(4) - 3 * x + x * x / 2);
    auto cq = poly_interpolate(xq, yq);
    CHECK(cq[0] == 4);
    CHECK(cq[1] == -3);
    CHECK(cq[2] == rational(1) / 2);
}

TEST_CASE("least squares: consistent systems come back exact") {
    // y = 2x - 3 sampled four times: residual zero, coefficients exact
    std::vector<rational> A, b;
    for (int i = 0; i < 4; ++i) {
        A.push_back(rational(i));
        A.push_back(rational(1));
        b.push_back(rational(2 * i - 3));
    }
    auto x = solve_lstsq(A, b, 4, 2);
    CHECK(x[0] == 2);
    CHECK(x[1] == -3);
}

TEST_CASE("least squares: genuine overdetermined fit") {
    // points (0,0), (1,1), (2,1); normal equations give slope 1/2, mean 1/6
    std::vector<rational> A{rational(0), rational(1), rational(1),
                            rational(1), rational(2), rational(1)};
    std::vector<rational> b{rational(0), rational(1), rational(1)};
    auto x = solve_lstsq(A, b, 3, 2);
    CHECK(x[0] == rational(1) / 2);
    CHECK(x[1] == rational(1) / 6);
}
