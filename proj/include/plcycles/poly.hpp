#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "plcycles/rational.hpp"

namespace plc {

struct Term {
    long exp;
    Rational coef;
};

// Sparse univariate polynomial with exact coefficients. Terms are kept
// sorted by strictly increasing exponent with no zero coefficients.
class MonomialSum {
public:
    MonomialSum() = default;
    explicit MonomialSum(std::vector<Term> terms);

    static MonomialSum monomial(long exp, const Rational& coef = 1);
    static MonomialSum constant(const Rational& c) { return monomial(0, c); }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    long degree() const { return terms_.empty() ? -1 : terms_.back().exp; }
    long valuation() const { return terms_.empty() ? -1 : terms_.front().exp; }
    Rational coefficient(long exp) const;
    // lowest-order term, i.e. the behaviour as x -> 0+
    const Term& lowest() const;
    const Term& highest() const;

    Rational eval(const Rational& x) const;
    long double eval(long double x) const;
    double eval(double x) const { return static_cast<double>(eval(static_cast<long double>(x))); }

    MonomialSum& operator+=(const MonomialSum& o);
    MonomialSum& operator-=(const MonomialSum& o);
    MonomialSum& operator*=(const Rational& s);

    friend MonomialSum operator+(MonomialSum a, const MonomialSum& b) { return a += b; }
    friend MonomialSum operator-(MonomialSum a, const MonomialSum& b) { return a -= b; }
    friend MonomialSum operator*(MonomialSum a, const Rational& s) { return a *= s; }
    friend MonomialSum operator*(const Rational& s, MonomialSum a) { return a *= s; }
    friend MonomialSum operator*(const MonomialSum& a, const MonomialSum& b);
    friend bool operator==(const MonomialSum& a, const MonomialSum& b);

    std::string to_string(const std::string& var = "x") const;

private:
    void normalize();
    std::vector<Term> terms_;
};

MonomialSum differentiate(const MonomialSum& p);

// Exact quotient; throws NumericalError when den does not divide num.
MonomialSum exact_divide(const MonomialSum& num, const MonomialSum& den);

MonomialSum wronskian(std::span<const MonomialSum> fs);

// W(f_1), W(f_1,f_2), ..., W(f_1..f_n) from a single fraction-free pass over
// the full derivative matrix (its leading principal minors).
std::vector<MonomialSum> leading_wronskians(std::span<const MonomialSum> fs);

struct MonomialWronskian {
    Rational coefficient;
    Rational exponent;
};

// W(x^{a_1}, ..., x^{a_l}) = prod_{i<j} (a_j - a_i) x^{sum a_i - l(l-1)/2}
MonomialWronskian monomial_wronskian_closed_form(std::span<const Rational> exponents);

// ---------------------------------------------------------------------------
// Root isolation

struct Bracket {
    Rational lo, hi;
    bool simple = true;
};

struct RootIsolation {
    Rational lo, hi;
    std::vector<Bracket> roots;
};

struct IsolationOptions {
    long grid_per_unit = 2048;
    double width = 1e-12;
};

// Sign oracle for a function of one rational variable. Must return -1, 0 or
// +1, or kSignUnknown when it cannot decide.
inline constexpr int kSignUnknown = 2;
using SignFn = std::function<int(const Rational&)>;

RootIsolation isolate_sign_changes(const SignFn& sign, const Rational& lo, const Rational& hi,
                                   const IsolationOptions& opts = {});

RootIsolation isolate_positive_roots(const MonomialSum& p, const Rational& lo, const Rational& hi,
                                     const IsolationOptions& opts = {});

// Integer-cleared form used for fast exact sign evaluation at rationals.
class ClearedPoly {
public:
    ClearedPoly() = default;
    // all polys share one positive scale so their values stay comparable
    static std::vector<ClearedPoly> clear_together(std::span<const MonomialSum> ps);
    explicit ClearedPoly(const MonomialSum& p);

    // value * den(x)^degree_bound * scale, for x = n/d
    Integer scaled_value(const Integer& n, const Integer& d, long degree_bound) const;
    long degree() const { return degree_; }
    long valuation() const { return valuation_; }

private:
    std::vector<Integer> dense_;  // index e - valuation_
    long valuation_ = 0;
    long degree_ = -1;
};

}  // namespace plc
