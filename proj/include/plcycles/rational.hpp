#pragma once

#include <gmpxx.h>

#include <string>

namespace plc {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational frac(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}

// exact value of a finite double
Rational to_rational(double v);
// closest dyadic with the given number of fractional bits (for grids)
Rational dyadic(double v, int bits);
double to_double(const Rational& q);
long double to_long_double(const Rational& q);
std::string to_string(const Rational& q);

// [lo, hi] with hi - lo < 1e-50
const Rational& pi_lower();
const Rational& pi_upper();

}  // namespace plc
