#include <doctest.h>

#include <random>

#include "plcycles/curve.hpp"
#include "plcycles/ect.hpp"
#include "plcycles/errors.hpp"

using namespace plc;

namespace {

MonomialSum x(long e, long c = 1) { return MonomialSum::monomial(e, Rational(c)); }

std::vector<double> spaced(int n, double lo, double hi) {
    std::vector<double> t;
    for (int i = 0; i < n; ++i) t.push_back(lo + (hi - lo) * (i + 0.5) / n);
    return t;
}

}  // namespace

TEST_CASE("certificate for k=1 without c terms") {
    const auto cert = certify_ect(1, {});
    REQUIRE(cert.records.size() == 3);
    CHECK(cert.records[0].w == x(1) + x(9, 3));
    CHECK(cert.records[1].coefficient == 1);
    CHECK(cert.records[1].exponent == 2);
    CHECK(cert.records[2].coefficient == 12);  // 4k(4k^2-1) at k=1
    CHECK(cert.records[2].exponent == 5);
    CHECK(cert.self_check() == "");
    CHECK(cert.b0 > 0);
    CHECK(cert.b0 <= 1);
}

TEST_CASE("certificate for k=1, p=(2)") {
    const auto cert = certify_ect(1, {2});
    REQUIRE(cert.records.size() == 4);
    CHECK(rho(1, {2}, 1) == 8);
    CHECK(cert.records[3].exponent == 8);
    CHECK(cert.self_check() == "");
    for (const auto& r : cert.records) {
        CHECK(r.nonvanishing);
        CHECK(r.method == "exact-sign-scan");
    }
}

TEST_CASE("leading terms match the closed forms for k <= 4") {
    std::mt19937 g(8);
    for (int k = 1; k <= 4; ++k) {
        std::vector<std::vector<int>> lists{build_lattice(k, Parity::Odd).p_list()};
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<int> p;
            int v = 0;
            const int len = 1 + static_cast<int>(g() % 4);
            for (int i = 0; i < len; ++i) p.push_back(v += 1 + static_cast<int>(g() % 4));
            lists.push_back(p);
        }
        for (const auto& p : lists) {
            CAPTURE(k);
            const auto cert = certify_ect(k, p);
            CHECK(cert.self_check() == "");
            CHECK(cert.records[1].coefficient == 2 * k - 1);
            CHECK(cert.records[1].exponent == 2 * k);
            CHECK(cert.records[2].coefficient == 4 * k * (4 * k * k - 1));
            CHECK(cert.records[2].exponent == 6 * k - 1);
            for (size_t i = 1; i <= p.size(); ++i) {
                CHECK(cert.records[i + 2].exponent == rho(k, p, static_cast<int>(i)));
                CHECK(rho(k, p, static_cast<int>(i)) > 0);
            }
        }
    }
}

TEST_CASE("b0 for the theorem instances") {
    const auto c1 = certify_ect(1, {1, 2, 3});
    CHECK(c1.b0 == doctest::Approx(0.6987).epsilon(1e-3));
    const auto c2 = certify_ect(2, {1, 2, 3, 4, 5, 6, 8, 10});
    CHECK(c2.b0 == doctest::Approx(0.6503).epsilon(1e-3));
    CHECK(c2.self_check() == "");
}

TEST_CASE("realize with no targets returns the seed") {
    const auto r = realize_zeros(1, {2}, {});
    CHECK(r.lambda_star.alpha == 1.0);
    CHECK(r.lambda_star.beta == 0.0);
    CHECK(r.lambda_star.gamma == 0.0);
    const MelnikovForm f(1, {2});
    CHECK(count_zeros(f, r.lambda_star, 0.0, 1.0).count == 0);
}

TEST_CASE("realize three zeros for k=1, p=(2)") {
    const std::vector<double> t{0.1, 0.2, 0.3};
    const auto r = realize_zeros(1, {2}, t);
    CHECK(r.residual <= 1e-10);
    CHECK(r.margin > 0);
    CHECK(r.alternates);
    const MelnikovForm f(1, {2});
    // sign alternates on (0.05, 0.35)
    int prev = 0;
    for (double u : {0.05, 0.15, 0.25, 0.35}) {
        const int s = f.P(u, r.lambda_star) > 0 ? 1 : -1;
        CHECK(s != prev);
        prev = s;
    }
    const auto z = count_zeros(f, r.lambda_star, 0.0, 0.4);
    REQUIRE(z.count == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(to_double(z.isolation.roots[i].lo) <= t[i]);
        CHECK(t[i] <= to_double(z.isolation.roots[i].hi));
    }
    CHECK(count_zeros(f, r.exact, 0.0, 0.4).count == 3);
}

TEST_CASE("realize at theorem scale for k=2") {
    const std::vector<int> p{1, 2, 3, 4, 5, 6, 8, 10};
    const auto cert = certify_ect(2, p);
    RealizeOptions ro;
    ro.b0 = cert.b0;
    const auto t = spaced(10, 0.05, 0.55);
    const auto r = realize_zeros(2, p, t, ro);
    CHECK(r.residual <= 1e-10);
    CHECK(r.alternates);
    CHECK(r.margin > 0);
    const MelnikovForm f(2, p);
    CHECK(count_zeros(f, r.exact, 0.0, cert.b0).count == 10);
    CHECK(count_zeros(f, r.lambda_star, 0.0, cert.b0).count == 10);

    // the p-list quoted for this instance elsewhere also works
    const std::vector<int> q{3, 4, 5, 6, 7, 8, 9, 10};
    const auto cq = certify_ect(2, q);
    CHECK(cq.self_check() == "");
    const auto rq = realize_zeros(2, q, spaced(10, 0.05, std::min(0.55, 0.95 * cq.b0)));
    CHECK(rq.residual <= 1e-10);
    CHECK(count_zeros(MelnikovForm(2, q), rq.exact, 0.0, cq.b0).count == 10);
}

TEST_CASE("realize rejects bad input") {
    CHECK_THROWS_AS(realize_zeros(1, {2}, {0.1, 0.2, 0.3, 0.4}), UsageError);
    CHECK_THROWS_AS(realize_zeros(1, {2}, {0.1, 0.1}), UsageError);
    CHECK_THROWS_AS(realize_zeros(1, {2}, {-0.1}), UsageError);
    RealizeOptions ro;
    ro.b0 = 0.5;
    CHECK_THROWS_AS(realize_zeros(1, {2}, {0.2, 0.6}, ro), UsageError);
    RealizeOptions strict;
    strict.min_margin = 10.0;
    CHECK_THROWS_WITH_AS(realize_zeros(1, {2}, {0.1, 0.2}, strict), doctest::Contains("non-simple zero"),
                         NumericalError);
}

TEST_CASE("count_zeros") {
    const MelnikovForm f(1, {1, 2, 3});
    CHECK(count_zeros(f, Lambda{1, 0, 0, {0, 0, 0}}, 0.0, 0.69).count == 0);
    CHECK_THROWS_AS(count_zeros(f, Lambda{0, 0, 0, {0, 0, 0}}, 0.0, 0.69), NumericalError);
}

TEST_CASE("ECT zero bound on random Lambda") {
    std::mt19937 g(77);
    std::normal_distribution<double> n(0.0, 1.0);
    const std::vector<int> p{1, 2, 3};
    const auto cert = certify_ect(1, p);
    const MelnikovForm f(1, p);
    for (int rep = 0; rep < 50; ++rep) {
        Lambda l{n(g), n(g), n(g), {n(g), n(g), n(g)}};
        CHECK(count_zeros(f, l, 0.0, cert.b0).count <= static_cast<int>(p.size()) + 2);
    }
}

TEST_CASE("fewer targets use the leading basis functions") {
    const auto r = realize_zeros(1, {1, 2, 3}, {0.3});
    CHECK(r.basis_used == 2);
    for (size_t i = 2; i < r.g.size(); ++i) CHECK(r.g[i] == 0);
    const auto z = count_zeros(MelnikovForm(1, {1, 2, 3}), r.exact, 0.0, 0.69);
    CHECK(z.count == 1);
}

TEST_CASE("default targets") {
    const auto t = default_targets(5, 0.6987, 0.9);
    REQUIRE(t.size() == 5);
    CHECK(t.back() < 0.9 * 0.6987);
    for (size_t i = 1; i < t.size(); ++i) CHECK(t[i] - t[i - 1] == doctest::Approx(t[0]));
}
