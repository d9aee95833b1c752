#include "plcycles/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace plc {

Rational to_rational(double v) {
    if (!std::isfinite(v)) throw std::domain_error("non-finite value has no rational form");
    return Rational(v);
}

Rational dyadic(double v, int bits) {
    const double scaled = std::nearbyint(std::ldexp(v, bits));
    Rational q(Integer(scaled), 1);
    q /= Rational(Integer(1) << bits);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return static_cast<double>(to_long_double(q)); }

long double to_long_double(const Rational& q) {
    if (sgn(q) == 0) return 0.0L;
    Integer num = abs(q.get_num());
    Integer den = q.get_den();
    const long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                   static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    const long s = 100 - e;  // quotient keeps ~100 bits
    if (s >= 0)
        num <<= s;
    else
        den <<= -s;
    Integer t = num / den;
    long double r = 0.0L;
    for (long i = static_cast<long>(mpz_size(t.get_mpz_t())) - 1; i >= 0; --i)
        r = r * 18446744073709551616.0L + static_cast<long double>(mpz_getlimbn(t.get_mpz_t(), i));
    r = std::ldexp(r, static_cast<int>(-s));
    return sgn(q) < 0 ? -r : r;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {
const char* kPiDigits = "314159265358979323846264338327950288419716939937510";  // 51 digits

struct PiBounds {
    Rational lo, hi;
    PiBounds() {
        Integer n(kPiDigits);
        Integer d = 1;
        for (int i = 0; i < 50; ++i) d *= 10;
        lo = Rational(n, d);
        hi = Rational(n + 1, d);
        lo.canonicalize();
        hi.canonicalize();
    }
};
const PiBounds& bounds() {
    static const PiBounds b;
    return b;
}
}  // namespace

const Rational& pi_lower() { return bounds().lo; }
const Rational& pi_upper() { return bounds().hi; }

}  // namespace plc
