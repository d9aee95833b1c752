#include "plcycles/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plcycles/errors.hpp"

namespace plc {

MonomialSum::MonomialSum(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

MonomialSum MonomialSum::monomial(long exp, const Rational& coef) {
    if (exp < 0) throw std::invalid_argument("negative exponent");
    MonomialSum p;
    if (sgn(coef) != 0) p.terms_.push_back({exp, coef});
    return p;
}

void MonomialSum::normalize() {
    std::stable_sort(terms_.begin(), terms_.end(),
                     [](const Term& a, const Term& b) { return a.exp < b.exp; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (t.exp < 0) throw std::invalid_argument("negative exponent");
        if (!out.empty() && out.back().exp == t.exp)
            out.back().coef += t.coef;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const Term& t) { return sgn(t.coef) == 0; });
    terms_ = std::move(out);
}

Rational MonomialSum::coefficient(long exp) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exp,
                               [](const Term& t, long e) { return t.exp < e; });
    if (it != terms_.end() && it->exp == exp) return it->coef;
    return 0;
}

const Term& MonomialSum::lowest() const {
    if (terms_.empty()) throw std::logic_error("zero polynomial has no terms");
    return terms_.front();
}

const Term& MonomialSum::highest() const {
    if (terms_.empty()) throw std::logic_error("zero polynomial has no terms");
    return terms_.back();
}

Rational MonomialSum::eval(const Rational& x) const {
    Rational acc = 0;
    long prev = degree();
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        for (long e = prev; e > it->exp; --e) acc *= x;
        acc += it->coef;
        prev = it->exp;
    }
    for (long e = prev; e > 0; --e) acc *= x;
    return acc;
}

long double MonomialSum::eval(long double x) const {
    long double acc = 0.0L;
    long prev = degree();
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (prev > it->exp) acc *= std::pow(x, static_cast<long double>(prev - it->exp));
        acc += to_long_double(it->coef);
        prev = it->exp;
    }
    if (prev > 0) acc *= std::pow(x, static_cast<long double>(prev));
    return acc;
}

MonomialSum& MonomialSum::operator+=(const MonomialSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    normalize();
    return *this;
}

MonomialSum& MonomialSum::operator-=(const MonomialSum& o) {
    for (const auto& t : o.terms_) terms_.push_back({t.exp, -t.coef});
    normalize();
    return *this;
}

MonomialSum& MonomialSum::operator*=(const Rational& s) {
    if (sgn(s) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coef *= s;
    return *this;
}

MonomialSum operator*(const MonomialSum& a, const MonomialSum& b) {
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) out.push_back({s.exp + t.exp, s.coef * t.coef});
    return MonomialSum(std::move(out));
}

bool operator==(const MonomialSum& a, const MonomialSum& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].exp != b.terms_[i].exp || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
}

std::string MonomialSum::to_string(const std::string& var) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coef;
        if (!first) {
            os << (sgn(c) < 0 ? " - " : " + ");
            c = abs(c);
        }
        first = false;
        if (t.exp == 0) {
            os << c.get_str();
            continue;
        }
        if (c == -1)
            os << "-";
        else if (c != 1)
            os << c.get_str() << "*";
        os << var;
        if (t.exp != 1) os << "^" << t.exp;
    }
    return os.str();
}

MonomialSum differentiate(const MonomialSum& p) {
    std::vector<Term> out;
    for (const auto& t : p.terms())
        if (t.exp > 0) out.push_back({t.exp - 1, t.coef * t.exp});
    return MonomialSum(std::move(out));
}

MonomialSum exact_divide(const MonomialSum& num, const MonomialSum& den) {
    if (den.is_zero()) throw NumericalError("division by zero polynomial");
    MonomialSum rem = num;
    std::vector<Term> quot;
    const Term& lead = den.highest();
    while (!rem.is_zero()) {
        const Term& r = rem.highest();
        if (r.exp < lead.exp) throw NumericalError("inexact polynomial division");
        Term q{r.exp - lead.exp, r.coef / lead.coef};
        rem -= den * MonomialSum::monomial(q.exp, q.coef);
        quot.push_back(std::move(q));
    }
    return MonomialSum(std::move(quot));
}

namespace {

using Matrix = std::vector<std::vector<MonomialSum>>;

Matrix derivative_matrix(std::span<const MonomialSum> fs) {
    const size_t n = fs.size();
    Matrix m(n, std::vector<MonomialSum>(n));
    for (size_t j = 0; j < n; ++j) {
        MonomialSum d = fs[j];
        for (size_t i = 0; i < n; ++i) {
            m[i][j] = d;
            if (i + 1 < n) d = differentiate(d);
        }
    }
    return m;
}

// one Bareiss elimination step on the trailing block, pivot at (kk,kk)
void bareiss_step(Matrix& m, size_t kk, const MonomialSum& prev) {
    const size_t n = m.size();
    for (size_t i = kk + 1; i < n; ++i) {
        for (size_t j = kk + 1; j < n; ++j) {
            MonomialSum v = m[kk][kk] * m[i][j] - m[i][kk] * m[kk][j];
            m[i][j] = exact_divide(v, prev);
        }
        m[i][kk] = MonomialSum();
    }
}

}  // namespace

MonomialSum wronskian(std::span<const MonomialSum> fs) {
    if (fs.empty()) throw std::invalid_argument("wronskian of an empty list");
    Matrix m = derivative_matrix(fs);
    const size_t n = m.size();
    MonomialSum prev = MonomialSum::constant(1);
    bool negate = false;
    for (size_t kk = 0; kk + 1 < n; ++kk) {
        if (m[kk][kk].is_zero()) {
            size_t r = kk + 1;
            while (r < n && m[r][kk].is_zero()) ++r;
            if (r == n) return MonomialSum();
            std::swap(m[kk], m[r]);
            negate = !negate;
        }
        bareiss_step(m, kk, prev);
        prev = m[kk][kk];
    }
    MonomialSum det = m[n - 1][n - 1];
    return negate ? det * Rational(-1) : det;
}

std::vector<MonomialSum> leading_wronskians(std::span<const MonomialSum> fs) {
    Matrix m = derivative_matrix(fs);
    const size_t n = m.size();
    std::vector<MonomialSum> out;
    out.reserve(n);
    MonomialSum prev = MonomialSum::constant(1);
    for (size_t kk = 0; kk < n; ++kk) {
        if (m[kk][kk].is_zero()) {
            // a vanishing leading minor stops the pivot-free pass
            for (size_t l = kk + 1; l <= n; ++l) out.push_back(wronskian(fs.subspan(0, l)));
            return out;
        }
        out.push_back(m[kk][kk]);
        if (kk + 1 < n) bareiss_step(m, kk, prev);
        prev = m[kk][kk];
    }
    return out;
}

MonomialWronskian monomial_wronskian_closed_form(std::span<const Rational> a) {
    if (a.empty()) throw std::invalid_argument("empty exponent list");
    Rational coef = 1, sum = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        sum += a[i];
        for (size_t j = i + 1; j < a.size(); ++j) {
            if (a[j] == a[i]) throw std::invalid_argument("duplicate exponents in monomial Wronskian");
            coef *= a[j] - a[i];
        }
    }
    const long l = static_cast<long>(a.size());
    return {coef, sum - frac(l * (l - 1), 2)};
}

// ---------------------------------------------------------------------------

namespace {

struct BisectResult {
    Rational lo, hi;
    bool exact = false;
};

BisectResult bisect_bracket(const SignFn& sign, Rational lo, Rational hi, int slo, const Rational& width) {
    while (hi - lo > width) {
        Rational mid = (lo + hi) / 2;
        const int s = sign(mid);
        if (s == kSignUnknown)
            throw NumericalError("possible multiple zero near " + std::to_string(to_double(mid)));
        if (s == 0) return {mid, mid, true};
        if (s == slo)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi, false};
}

}  // namespace

RootIsolation isolate_sign_changes(const SignFn& sign, const Rational& lo, const Rational& hi,
                                   const IsolationOptions& opts) {
    if (!(lo < hi)) throw std::invalid_argument("empty isolation interval");
    if (opts.grid_per_unit < 1 || !(opts.width > 0)) throw std::invalid_argument("bad isolation options");
    RootIsolation out{lo, hi, {}};
    const Rational width = to_rational(opts.width);
    const Rational half = width / 2;

    Rational len = (hi - lo) * opts.grid_per_unit;
    Integer cells = len.get_num() / len.get_den();
    if (Rational(cells) < len) cells += 1;
    if (cells < 2) cells = 2;
    const Rational h = (hi - lo) / Rational(cells);
    const long n = cells.get_si();

    auto check = [&](int s, const Rational& at) {
        if (s == kSignUnknown)
            throw NumericalError("possible multiple zero near " + std::to_string(to_double(at)));
        return s;
    };

    // walk interior grid points; remember the last nonzero sample
    Rational prev_x;
    int prev_s = 0;
    bool have_prev = false;
    std::vector<Rational> pending_zeros;
    for (long j = 1; j < n; ++j) {
        Rational x = lo + h * j;
        const int s = check(sign(x), x);
        if (s == 0) {
            pending_zeros.push_back(x);
            continue;
        }
        if (!pending_zeros.empty()) {
            for (const auto& z : pending_zeros) {
                Rational a = z - half, b = z + half;
                const int sa = check(sign(a), a), sb = check(sign(b), b);
                out.roots.push_back({a, b, sa * sb < 0});
            }
            pending_zeros.clear();
        } else if (have_prev && s != prev_s) {
            auto r = bisect_bracket(sign, prev_x, x, prev_s, width);
            if (r.exact) {
                r.lo = r.lo - half;
                r.hi = r.hi + half;
            }
            out.roots.push_back({r.lo, r.hi, true});
        }
        prev_x = x;
        prev_s = s;
        have_prev = true;
    }
    for (const auto& z : pending_zeros) {
        Rational a = z - half, b = z + half;
        out.roots.push_back({a, b, check(sign(a), a) * check(sign(b), b) < 0});
    }
    return out;
}

RootIsolation isolate_positive_roots(const MonomialSum& p, const Rational& lo, const Rational& hi,
                                     const IsolationOptions& opts) {
    if (p.is_zero()) throw NumericalError("zero polynomial");
    if (sgn(lo) < 0) throw std::invalid_argument("interval must lie in (0, inf)");
    ClearedPoly c(p);
    const long deg = p.degree();
    return isolate_sign_changes(
        [&](const Rational& x) { return sgn(c.scaled_value(x.get_num(), x.get_den(), deg)); }, lo, hi,
        opts);
}

// ---------------------------------------------------------------------------

std::vector<ClearedPoly> ClearedPoly::clear_together(std::span<const MonomialSum> ps) {
    Integer l = 1;
    for (const auto& p : ps)
        for (const auto& t : p.terms()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coef.get_den_mpz_t());
    std::vector<ClearedPoly> out;
    for (const auto& p : ps) {
        ClearedPoly c;
        if (!p.is_zero()) {
            c.valuation_ = p.valuation();
            c.degree_ = p.degree();
            c.dense_.assign(c.degree_ - c.valuation_ + 1, Integer(0));
            for (const auto& t : p.terms()) {
                Rational v = t.coef * Rational(l);
                c.dense_[t.exp - c.valuation_] = v.get_num();
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

ClearedPoly::ClearedPoly(const MonomialSum& p) {
    MonomialSum one[1] = {p};
    *this = std::move(clear_together(one)[0]);
}

Integer ClearedPoly::scaled_value(const Integer& n, const Integer& d, long degree_bound) const {
    if (degree_ < 0) return 0;
    // sum c_e n^e d^(D-e)
    Integer acc = 0, dpow = 1;
    for (long e = degree_; e >= valuation_; --e) {
        acc = acc * n + dense_[e - valuation_] * dpow;
        dpow *= d;
    }
    Integer np, dp;
    mpz_pow_ui(np.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(valuation_));
    mpz_pow_ui(dp.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(degree_bound - degree_));
    return acc * np * dp;
}

}  // namespace plc
