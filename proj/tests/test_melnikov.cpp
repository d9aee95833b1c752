#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "plcycles/curve.hpp"
#include "plcycles/errors.hpp"
#include "plcycles/melnikov.hpp"

using namespace plc;
using std::numbers::pi;

namespace {

Lambda random_lambda(std::mt19937& g, size_t m, double radius) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Lambda l{n(g), n(g), n(g), {}};
    for (size_t i = 0; i < m; ++i) l.c.push_back(n(g));
    return l.scaled(radius * u(g) / l.norm());
}

}  // namespace

TEST_CASE("theta1") {
    CHECK(theta1(1e-6, 1) == doctest::Approx(0.0).epsilon(1e-10));
    for (int k = 1; k <= 4; ++k) {
        CHECK(theta1(1.0, k) == doctest::Approx(pi / 4));
        CHECK(r_of_u(1.0, k) == doctest::Approx(std::sqrt(2.0)));
    }
    CHECK(theta1(0.5, 1) == doctest::Approx(0.2449787).epsilon(1e-7));
    CHECK_THROWS(theta1(0.0, 1));
    CHECK_THROWS(theta1(-0.5, 1));
}

TEST_CASE("r and u are inverse") {
    for (int k = 1; k <= 3; ++k)
        for (double u : {0.01, 0.3, 0.77, 1.0}) CHECK(u_of_r(r_of_u(u, k), k) == doctest::Approx(u).epsilon(1e-14));
}

TEST_CASE("theta1_prime") {
    CHECK(theta1_prime(1e-6, 1) <= 1e-5);
    CHECK(theta1_prime(1.0, 1) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
    // finite differences of theta1 as a function of r
    CHECK(theta1_prime(0.5, 1) == doctest::Approx(0.8169616).epsilon(1e-6));
    for (int k = 1; k <= 3; ++k)
        for (double u : {0.1, 0.35, 0.5, 0.8, 1.0}) {
            const double r = r_of_u(u, k), h = 1e-6 * r;
            const double fd = (theta1(u_of_r(r + h, k), k) - theta1(u_of_r(r - h, k), k)) / (2 * h);
            CHECK(theta1_prime(u, k) == doctest::Approx(fd).epsilon(1e-6));
        }
}

TEST_CASE("polar field pieces") {
    const auto f = PolarField::from_lambda(1, {1, 2}, Lambda{0.4, -0.3, 0.2, {0.5, -0.1}});
    CHECK(f.F2_minus(0.3, 0.5) == 0.0);
    // Lambda = 0 leaves only the term r(beta sin - cos) sin of F1+ (beta = 0)
    const auto z = PolarField::from_lambda(1, {1}, Lambda{0, 0, 0, {0}});
    CHECK(z.F1_minus(0.7, 0.4) == 0.0);
    CHECK(z.F1_plus(0.7, 0.4) == doctest::Approx(-0.4 * std::cos(0.7) * std::sin(0.7)));
    // beta-only: F1- = -r beta cos^2
    const auto b = PolarField::from_lambda(1, {1}, Lambda{0, 0.3, 0, {0}});
    CHECK(b.F1_minus(0.7, 0.4) == doctest::Approx(-0.4 * 0.3 * std::cos(0.7) * std::cos(0.7)));
    CHECK(b.F1_plus(0.7, 0.4) ==
          doctest::Approx(0.4 * (0.3 * std::sin(0.7) - std::cos(0.7)) * std::sin(0.7)));
    // r-partials against central differences
    for (double th : {0.2, 1.3, 2.9, 4.4}) {
        const double r = 0.6, h = 1e-6;
        CHECK(f.dF1_plus(th, r) == doctest::Approx((f.F1_plus(th, r + h) - f.F1_plus(th, r - h)) / (2 * h)).epsilon(1e-7));
        CHECK(f.dF1_minus(th, r) ==
              doctest::Approx((f.F1_minus(th, r + h) - f.F1_minus(th, r - h)) / (2 * h)).epsilon(1e-7));
    }
}

TEST_CASE("M1 vanishes") {
    CHECK(std::fabs(M1_quadrature(0.5, PolarField::from_lambda(1, {1}, Lambda{0, 0, 0, {0}})).value) <= 1e-12);
    CHECK(std::fabs(M1_quadrature(0.5, PolarField::from_lambda(1, {2}, Lambda{0, 0.3, 0, {0.01}})).value) <= 1e-10);
    std::mt19937 g(2024);
    const auto p = build_lattice(2, Parity::Odd).p_list();
    for (int rep = 0; rep < 3; ++rep) {
        const auto lam = random_lambda(g, p.size(), 0.5);
        CHECK(std::fabs(M1_quadrature(0.8, PolarField::from_lambda(2, p, lam)).value) <= 1e-10);
    }
}

TEST_CASE("closed form examples") {
    const MelnikovForm f1(1, {});
    CHECK(closed_form_M2(0.7, f1, Lambda{0, 0, 0, {}}) == 0.0);
    CHECK(f1.B_alpha(1.0) == doctest::Approx(32.0));
    CHECK(f1.Q(1.0) == doctest::Approx(16.0 * std::sqrt(2.0)));
    CHECK(closed_form_M2(1.0, f1, Lambda{1, 0, 0, {}}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(f1.B_beta(1.0) == doctest::Approx(-12 * pi));
    CHECK(closed_form_M2(1.0, f1, Lambda{0, 1, 0, {}}) == doctest::Approx(-12 * pi / (16 * std::sqrt(2.0))));
    const MelnikovForm f2(1, {2});
    CHECK(f2.G(0, 0.5) == doctest::Approx(0.125));
    CHECK(f2.Q(0.5) == doctest::Approx(4 * 1.1875 * std::sqrt(1.0625)));
    CHECK(closed_form_M2(0.5, f2, Lambda{0, 0, 0, {1}}) == doctest::Approx(0.025530).epsilon(1e-4));
}

TEST_CASE("M2 quadrature matches the closed form") {
    const auto a = PolarField::from_lambda(1, {}, Lambda{1, 0, 0, {}});
    const auto r1 = r_of_u(1.0, 1);
    CHECK(M2_quadrature(r1, a).linear == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    const auto b = PolarField::from_lambda(1, {}, Lambda{0, 1, 0, {}});
    CHECK(M2_quadrature(r1, b).linear == doctest::Approx(-12 * pi / (16 * std::sqrt(2.0))).epsilon(1e-9));
    const auto z = PolarField::from_lambda(1, {}, Lambda{0, 0, 0, {}});
    CHECK(std::fabs(M2_quadrature(r1, z).linear) <= 1e-12);
    CHECK(std::fabs(M2_quadrature(r1, z).full) <= 1e-12);

    std::mt19937 g(99);
    for (int k = 1; k <= 3; ++k) {
        const auto p = build_lattice(k, Parity::Odd).p_list();
        const MelnikovForm form(k, p);
        for (int rep = 0; rep < 2; ++rep) {
            const auto lam = random_lambda(g, p.size(), 1.0);
            const auto f = PolarField::from_lambda(k, p, lam);
            for (double u : {0.1, 0.45, 0.85})
                CHECK(std::fabs(M2_quadrature(r_of_u(u, k), f).linear - closed_form_M2(u, form, lam)) <= 1e-7);
        }
    }
}

TEST_CASE("M2 quadrature is linear in Lambda") {
    std::mt19937 g(5);
    const std::vector<int> p{1, 2, 3};
    const auto l1 = random_lambda(g, 3, 1.0), l2 = random_lambda(g, 3, 1.0);
    Lambda s{l1.alpha + l2.alpha, l1.beta + l2.beta, l1.gamma + l2.gamma, {}};
    for (size_t i = 0; i < 3; ++i) s.c.push_back(l1.c[i] + l2.c[i]);
    const MelnikovForm form(1, p);
    for (double u : {0.2, 0.6}) {
        const double r = r_of_u(u, 1);
        const double a = M2_quadrature(r, PolarField::from_lambda(1, p, l1)).linear;
        const double b = M2_quadrature(r, PolarField::from_lambda(1, p, l2)).linear;
        const double c = M2_quadrature(r, PolarField::from_lambda(1, p, s)).linear;
        CHECK(std::fabs(c - a - b) <= 1e-7);
        CHECK(closed_form_M2(u, form, s) ==
              doctest::Approx(closed_form_M2(u, form, l1) + closed_form_M2(u, form, l2)).epsilon(1e-13));
    }
}

TEST_CASE("mu_i closed form") {
    CHECK(mu_i_closed_form(1e-5, 1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(mu_i_closed_form(1.0, 1, 1) == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(mu_i_closed_form(0.5, 1, 2) == doctest::Approx(0.025530).epsilon(1e-4));
    const MelnikovForm f(1, {2});
    CHECK(mu_i_closed_form(0.5, 1, 2) == doctest::Approx(f.G(0, 0.5) / f.Q(0.5)).epsilon(1e-13));
    for (int k = 1; k <= 3; ++k)
        for (int p = 1; p <= 6; ++p) CHECK_NOTHROW(mu_i_closed_form(0.63, k, p));
}

TEST_CASE("appendix identity") {
    auto [l0, r0] = appendix_identity_check(1, pi / 2);
    CHECK(std::fabs(l0) <= 1e-11);
    CHECK(std::fabs(r0) <= 1e-15);
    auto [l1, r1] = appendix_identity_check(1, pi / 4);
    CHECK(r1 == doctest::Approx(std::sqrt(2.0) / 4));
    CHECK(std::fabs(l1 - r1) <= 1e-11);
    auto [l3, r3] = appendix_identity_check(3, 1.0);
    CHECK(std::fabs(l3 - r3) <= 1e-11);
    for (int p = 1; p <= 6; ++p) {
        auto [l, r] = appendix_identity_check(p, -3.05);
        CHECK(std::fabs(l - r) <= 1e-11);
    }
}

TEST_CASE("quadrature with reversed bounds") {
    auto f = [](double x) { return std::pow(std::cos(x), 9); };
    const auto fw = integrate_gk(f, 0.0, 3.0);
    const auto bw = integrate_gk(f, 3.0, 0.0);
    CHECK(fw.converged);
    CHECK(bw.converged);
    CHECK(bw.value == doctest::Approx(-fw.value).epsilon(1e-14));
}

TEST_CASE("G-basis") {
    const auto x = [](long e, long c = 1) { return MonomialSum::monomial(e, Rational(c)); };
    auto b1 = cheb_basis(1, {});
    REQUIRE(b1.size() == 3);
    CHECK(b1[0] == x(1) + x(9, 3));
    CHECK(b1[1] == x(2) + x(6, 3));
    CHECK(b1[2] == x(5));
    auto b2 = cheb_basis(2, {1, 3});
    REQUIRE(b2.size() == 5);
    CHECK(b2[0] == x(1) + x(17, 5));
    CHECK(b2[1] == x(4) + x(12, 5));
    CHECK(b2[2] == x(9));
    CHECK(b2[3] == x(6));
    CHECK(b2[4] == x(10));
    for (int k = 1; k <= 4; ++k) {
        const MelnikovForm f(k, {1});
        const auto lhs = f.B_beta_over_pi() * Rational(2 * (k + 1)) - f.B_gamma_over_pi() * Rational(3 * k + 1);
        CHECK(lhs == cheb_basis(k, {})[0] * Rational(4 * k));
        CHECK(f.B_alpha_poly() == cheb_basis(k, {})[1] * Rational(8));
        CHECK(f.G_poly(0) == x(2 * (k + 1), 8));
    }
}

TEST_CASE("sign structure of the closed-form pieces") {
    for (int k = 1; k <= 3; ++k) {
        const MelnikovForm f(k, {1, 2});
        const auto ba = f.B_alpha_poly(), bb = f.B_beta_over_pi(), bg = f.B_gamma_over_pi();
        for (const auto& t : ba.terms()) CHECK(t.coef > 0);
        for (const auto& t : bb.terms()) CHECK(t.coef < 0);
        for (const auto& t : bg.terms()) CHECK(t.coef < 0);
        for (int i = 0; i <= 100; ++i) {
            const double u = i / 100.0;
            CHECK(f.Q(u) > 0);
            if (u > 0) {
                CHECK(f.B_alpha(u) > 0);
                CHECK(f.B_beta(u) < 0);
                CHECK(f.B_gamma(u) < 0);
                CHECK(f.G(1, u) == doctest::Approx(8 * std::pow(u, 2 * (k + 2))));
            }
        }
    }
}

TEST_CASE("basis change round trip") {
    std::mt19937 g(31);
    std::uniform_int_distribution<int> d(-50, 50);
    for (int k = 1; k <= 3; ++k) {
        std::vector<Rational> a;
        for (int i = 0; i < 5; ++i) a.push_back(frac(d(g), 7));
        CHECK(g_from_lambda(k, lambda_from_g(k, a)) == a);
        // P = sum a_i h_i
        const MelnikovForm f(k, {1, 2});
        const auto P = f.numerator(lambda_from_g(k, a));
        MonomialSum want;
        const auto basis = cheb_basis(k, {1, 2});
        for (int i = 0; i < 5; ++i) want += basis[i] * a[i];
        CHECK(P == want);

        const Lambda l{0.3, -0.7, 0.25, {0.125, -2.0}};
        ExactLambda e;
        e.alpha = to_rational(l.alpha);
        e.pi_beta = to_rational(l.beta * pi);
        e.pi_gamma = to_rational(l.gamma * pi);
        for (double c : l.c) e.c.push_back(to_rational(c));
        const Lambda back = lambda_from_g(k, g_from_lambda(k, e)).to_double();
        CHECK(back.alpha == doctest::Approx(l.alpha).epsilon(1e-12));
        CHECK(back.beta == doctest::Approx(l.beta).epsilon(1e-12));
        CHECK(back.gamma == doctest::Approx(l.gamma).epsilon(1e-12));
        for (size_t i = 0; i < l.c.size(); ++i) CHECK(back.c[i] == doctest::Approx(l.c[i]).epsilon(1e-12));
    }
}

TEST_CASE("closed form numerator with pi split off") {
    const MelnikovForm f(2, {1, 4});
    const Lambda l{0.2, -0.4, 0.9, {1.5, -0.25}};
    const auto P = f.numerator(l);
    for (double u : {0.1, 0.5, 0.9}) CHECK(static_cast<double>(P.eval(u)) == doctest::Approx(f.P(u, l)).epsilon(1e-13));
    CHECK_THROWS(MelnikovForm(1, {2, 2}));
    CHECK_THROWS(MelnikovForm(1, {0}));
}
