#include <doctest.h>

#include <random>

#include "plcycles/errors.hpp"
#include "plcycles/poly.hpp"

using namespace plc;

namespace {

MonomialSum mono(long e, long c = 1) { return MonomialSum::monomial(e, Rational(c)); }

MonomialSum random_poly(std::mt19937& g, int terms, int max_exp) {
    std::uniform_int_distribution<int> e(0, max_exp), c(-9, 9);
    MonomialSum p;
    for (int i = 0; i < terms; ++i) p += mono(e(g), c(g));
    return p;
}

}  // namespace

TEST_CASE("normal form keeps sorted, nonzero terms") {
    MonomialSum p({{3, 1}, {1, 2}, {3, -1}, {2, 0}, {1, 1}});
    REQUIRE(p.terms().size() == 1);
    CHECK(p.terms()[0].exp == 1);
    CHECK(p.terms()[0].coef == 3);
    CHECK((mono(2) - mono(2)).is_zero());
    CHECK(MonomialSum().terms().empty());
}

TEST_CASE("differentiate") {
    CHECK(differentiate(MonomialSum()).is_zero());
    CHECK(differentiate(mono(2) + mono(6, 3)) == mono(1, 2) + mono(5, 18));
    CHECK(differentiate(mono(1)) == MonomialSum::constant(1));
    CHECK(differentiate(MonomialSum::constant(7)).is_zero());
}

TEST_CASE("wronskian examples") {
    std::vector<MonomialSum> a{mono(1), mono(3)};
    CHECK(wronskian(a) == mono(3, 2));
    std::vector<MonomialSum> b{mono(1), mono(2)};
    CHECK(wronskian(b) == mono(2));
    std::vector<MonomialSum> c{mono(0, 4) + mono(5, -1)};
    CHECK(wronskian(c) == c[0]);
    std::vector<MonomialSum> d{mono(1), mono(2), mono(3)};
    CHECK(wronskian(d) == mono(3, 2));
}

TEST_CASE("monomial closed form") {
    std::vector<Rational> a{1, 3};
    auto r = monomial_wronskian_closed_form(a);
    CHECK(r.coefficient == 2);
    CHECK(r.exponent == 3);
    std::vector<Rational> s{frac(7, 2)};
    r = monomial_wronskian_closed_form(s);
    CHECK(r.coefficient == 1);
    CHECK(r.exponent == frac(7, 2));
    std::vector<Rational> t{1, 2, 3};
    r = monomial_wronskian_closed_form(t);
    CHECK(r.coefficient == 2);
    CHECK(r.exponent == 3);
    std::vector<Rational> dup{2, 5, 2};
    CHECK_THROWS_AS(monomial_wronskian_closed_form(dup), std::invalid_argument);
}

TEST_CASE("wronskian equals the closed form on pure monomials") {
    std::mt19937 g(12345);
    std::uniform_int_distribution<int> e(0, 40);
    for (int len = 1; len <= 6; ++len)
        for (int rep = 0; rep < 8; ++rep) {
            std::vector<long> ex;
            while (static_cast<int>(ex.size()) < len) {
                long v = e(g);
                if (std::find(ex.begin(), ex.end(), v) == ex.end()) ex.push_back(v);
            }
            std::vector<MonomialSum> fs;
            std::vector<Rational> rs;
            for (long v : ex) {
                fs.push_back(mono(v));
                rs.push_back(v);
            }
            const auto w = wronskian(fs);
            const auto cf = monomial_wronskian_closed_form(rs);
            REQUIRE(w.terms().size() == 1);
            CHECK(w.terms()[0].coef == cf.coefficient);
            CHECK(Rational(w.terms()[0].exp) == cf.exponent);
        }
}

TEST_CASE("wronskian is multilinear and obeys the monomial scaling rule") {
    std::mt19937 g(777);
    for (int rep = 0; rep < 20; ++rep) {
        const auto f = random_poly(g, 3, 8), gg = random_poly(g, 3, 8), h = random_poly(g, 3, 8);
        std::vector<MonomialSum> s{f + gg, h}, a{f, h}, b{gg, h};
        CHECK(wronskian(s) == wronskian(a) + wronskian(b));
    }
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 3;
        std::vector<MonomialSum> fs, gfs;
        const auto gm = mono(rep + 1);
        for (int i = 0; i < n; ++i) {
            fs.push_back(random_poly(g, 3, 10));
            gfs.push_back(gm * fs.back());
        }
        MonomialSum pw = MonomialSum::constant(1);
        for (int i = 0; i < n; ++i) pw = pw * gm;
        CHECK(wronskian(gfs) == pw * wronskian(fs));
    }
}

TEST_CASE("leading wronskians are the nested wronskians") {
    std::vector<MonomialSum> fs{mono(1) + mono(9, 3), mono(2) + mono(6, 3), mono(5), mono(8)};
    const auto ws = leading_wronskians(fs);
    REQUIRE(ws.size() == 4);
    for (size_t l = 1; l <= 4; ++l)
        CHECK(ws[l - 1] == wronskian(std::span<const MonomialSum>(fs.data(), l)));
}

TEST_CASE("exact division") {
    const auto a = mono(1) + mono(3, -2), b = mono(2, 5) + mono(0, 1);
    CHECK(exact_divide(a * b, b) == a);
    CHECK_THROWS_AS(exact_divide(a * b + mono(0), b), NumericalError);
}

TEST_CASE("root isolation examples") {
    const auto p = mono(1) - MonomialSum::constant(frac(1, 2));
    auto iso = isolate_positive_roots(p, 0, 1);
    REQUIRE(iso.roots.size() == 1);
    CHECK(iso.roots[0].simple);
    CHECK(iso.roots[0].lo <= frac(1, 2));
    CHECK(iso.roots[0].hi >= frac(1, 2));
    CHECK(to_double(iso.roots[0].hi - iso.roots[0].lo) <= 1e-12);

    CHECK(isolate_positive_roots(mono(2, 8) + mono(6, 24), 0, 1).roots.empty());

    const auto c = (mono(1) - MonomialSum::constant(frac(1, 4))) * (mono(1) - MonomialSum::constant(frac(1, 2))) *
                   (mono(1) - MonomialSum::constant(frac(3, 4)));
    iso = isolate_positive_roots(c, 0, 1);
    REQUIRE(iso.roots.size() == 3);
    const Rational want[] = {frac(1, 4), frac(1, 2), frac(3, 4)};
    for (int i = 0; i < 3; ++i) {
        CHECK(iso.roots[i].simple);
        CHECK(iso.roots[i].lo <= want[i]);
        CHECK(want[i] <= iso.roots[i].hi);
        CHECK(iso.roots[i].lo > 0);
        CHECK(iso.roots[i].hi < 1);
    }
    for (int i = 0; i + 1 < 3; ++i) CHECK(iso.roots[i].hi < iso.roots[i + 1].lo);

    CHECK_THROWS_WITH_AS(isolate_positive_roots(MonomialSum(), 0, 1), "zero polynomial", NumericalError);
}

TEST_CASE("root isolation recovers random products of linear factors") {
    std::mt19937 g(4242);
    std::uniform_int_distribution<int> num(1, 999);
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<Rational> roots;
        const int n = 1 + rep % 6;
        while (static_cast<int>(roots.size()) < n) {
            const Rational r = frac(num(g), 1000);
            bool far = true;
            for (const auto& q : roots) far = far && abs(q - r) > frac(1, 100);
            if (far) roots.push_back(r);
        }
        std::sort(roots.begin(), roots.end());
        MonomialSum p = MonomialSum::constant(1);
        for (const auto& r : roots) p = p * (mono(1) - MonomialSum::constant(r));
        const auto iso = isolate_positive_roots(p, 0, 1);
        REQUIRE(iso.roots.size() == roots.size());
        for (size_t i = 0; i < roots.size(); ++i) {
            CHECK(iso.roots[i].lo <= roots[i]);
            CHECK(roots[i] <= iso.roots[i].hi);
        }
    }
}

TEST_CASE("unknown signs are reported, not guessed") {
    auto sign = [](const Rational& x) { return x > frac(1, 2) ? kSignUnknown : 1; };
    CHECK_THROWS_AS(isolate_sign_changes(sign, 0, 1), NumericalError);
}

TEST_CASE("evaluation agrees across number types") {
    const auto p = mono(1, 3) + mono(9, -2) + MonomialSum::constant(frac(1, 3));
    const Rational x = frac(3, 7);
    CHECK(p.eval(0.4285714285714285714L) == doctest::Approx(to_double(p.eval(x))).epsilon(1e-15));
    CHECK(p.eval(0.0) == doctest::Approx(1.0 / 3));
}
