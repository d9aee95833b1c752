#include "plcycles/ect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "plcycles/errors.hpp"

namespace plc {

long rho(int k, const std::vector<int>& p, int i) {
    long s = 0;
    for (int j = 0; j < i; ++j) s += p.at(j);
    return 2 * s + (3L + i) * 2 * k + 2 - (i + 3L) * (i + 2) / 2;
}

ECTCertificate certify_ect(int k, const std::vector<int>& p, const CertifyOptions& opts) {
    const auto basis = cheb_basis(k, p);
    const auto ws = leading_wronskians(basis);
    ECTCertificate cert;
    cert.k = k;
    cert.p = p;
    cert.b0_exact = 1;
    IsolationOptions iso;
    iso.grid_per_unit = opts.grid;
    iso.width = opts.width;
    for (size_t l = 0; l < ws.size(); ++l) {
        if (ws[l].is_zero()) throw NumericalError("basis degenerate: W_" + std::to_string(l + 1) + " vanishes");
        WronskianRecord rec;
        rec.order = static_cast<int>(l + 1);
        rec.coefficient = ws[l].lowest().coef;
        rec.exponent = ws[l].lowest().exp;
        rec.w = ws[l];
        auto roots = isolate_positive_roots(ws[l], Rational(0), Rational(1), iso);
        if (!roots.roots.empty()) cert.b0_exact = std::min(cert.b0_exact, roots.roots.front().lo);
        cert.records.push_back(std::move(rec));
    }
    // every W_l keeps its sign on (0, b0]: no bracket starts below b0
    for (auto& rec : cert.records) {
        auto roots = isolate_positive_roots(rec.w, Rational(0), cert.b0_exact, iso);
        rec.nonvanishing = roots.roots.empty() && sgn(rec.w.eval(cert.b0_exact)) != 0;
    }
    cert.b0 = to_double(cert.b0_exact);
    return cert;
}

std::string ECTCertificate::self_check() const {
    std::ostringstream os;
    if (records.size() != p.size() + 3) return "wrong number of Wronskian records";
    const long K = k;
    std::vector<Rational> lows = {1, 2 * K, 4 * K + 1};
    for (int q : p) lows.push_back(2 * (K + q));
    for (const auto& r : records) {
        const auto cf = monomial_wronskian_closed_form(std::span<const Rational>(lows.data(), r.order));
        if (cf.coefficient != r.coefficient || cf.exponent != Rational(r.exponent)) {
            os << "W_" << r.order << " lowest term " << r.coefficient.get_str() << " u^" << r.exponent
               << " differs from the monomial closed form";
            return os.str();
        }
        if (!r.nonvanishing) {
            os << "W_" << r.order << " not certified on (0, b0]";
            return os.str();
        }
    }
    if (records[0].coefficient != 1 || records[0].exponent != 1) return "W_1 lowest term is not u";
    if (records[1].coefficient != 2 * K - 1 || records[1].exponent != 2 * K) return "W_2 lowest term mismatch";
    if (records[2].coefficient != 4 * K * (4 * K * K - 1) || records[2].exponent != 6 * K - 1)
        return "W_3 lowest term mismatch";
    for (size_t i = 1; i <= p.size(); ++i) {
        const long r = rho(k, p, static_cast<int>(i));
        if (r <= 0 || records[i + 2].exponent != r) {
            os << "W_" << i + 3 << " exponent " << records[i + 2].exponent << " != rho_" << i << " = " << r;
            return os.str();
        }
    }
    if (!(b0 > 0)) return "b0 not positive";
    return "";
}

// ---------------------------------------------------------------------------

namespace {

// one kernel vector of an n x (n+1) matrix of full row rank
std::vector<Rational> kernel_vector(std::vector<std::vector<Rational>> a, size_t cols) {
    const size_t rows = a.size();
    std::vector<size_t> pivcol;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[r], a[piv]);
        const Rational inv = 1 / a[r][c];
        for (size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || sgn(a[i][c]) == 0) continue;
            const Rational f = a[i][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivcol.push_back(c);
        ++r;
    }
    if (cols - r != 1) throw NumericalError("degenerate configuration: kernel dimension " + std::to_string(cols - r));
    size_t free = 0;
    for (size_t c = 0, q = 0; c < cols; ++c) {
        if (q < pivcol.size() && pivcol[q] == c) {
            ++q;
            continue;
        }
        free = c;
    }
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (size_t i = 0; i < r; ++i) v[pivcol[i]] = -a[i][free];
    return v;
}

PiPolynomial derivative(const PiPolynomial& p) { return {differentiate(p.rational_part), differentiate(p.pi_part)}; }

}  // namespace

Realization realize_zeros(int k, const std::vector<int>& p, const std::vector<double>& targets,
                          const RealizeOptions& opts) {
    MelnikovForm form(k, p);
    const size_t m = p.size();
    Realization out;
    out.k = k;
    out.p = p;
    out.targets = targets;
    if (targets.size() > m + 2)
        throw UsageError("at most m+2 = " + std::to_string(m + 2) + " targets can be realized");
    std::vector<double> sorted = targets;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i] > 0)) throw UsageError("targets must be positive");
        if (opts.b0 && !(sorted[i] < *opts.b0)) throw UsageError("target outside (0, b0)");
        if (i > 0 && sorted[i] == sorted[i - 1]) throw UsageError("targets must be distinct");
    }
    out.targets = sorted;
    for (double t : sorted) out.targets_exact.push_back(to_rational(t));

    if (sorted.empty()) {
        out.lambda_star = opts.seed;
        out.lambda_star.c.resize(m, 0.0);
        out.exact.alpha = to_rational(opts.seed.alpha);
        out.exact.pi_beta = to_rational(opts.seed.beta * std::numbers::pi);
        out.exact.pi_gamma = to_rational(opts.seed.gamma * std::numbers::pi);
        for (double v : out.lambda_star.c) out.exact.c.push_back(to_rational(v));
        out.g = g_from_lambda(k, out.exact);
        out.basis_used = 0;
        return out;
    }

    const auto basis = cheb_basis(k, p);
    const size_t n = sorted.size(), cols = n + 1;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(cols));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < cols; ++j) a[i][j] = basis[j].eval(out.targets_exact[i]);
    auto v = kernel_vector(std::move(a), cols);

    // largest-magnitude entry becomes +1
    size_t big = 0;
    for (size_t j = 1; j < cols; ++j)
        if (abs(v[j]) > abs(v[big])) big = j;
    const Rational s = 1 / v[big];
    for (auto& x : v) x *= s;
    v.resize(m + 3, Rational(0));
    out.g = v;
    out.basis_used = static_cast<int>(cols);
    out.exact = lambda_from_g(k, v);
    out.lambda_star = out.exact.to_double();

    const PiPolynomial P = form.numerator(out.lambda_star);
    const PiPolynomial dP = derivative(P);
    out.residual = 0.0;
    out.margin = INFINITY;
    out.relative_margin = INFINITY;
    for (double t : sorted) {
        const long double u = t;
        out.residual = std::max(out.residual, static_cast<double>(std::fabs(P.eval(u))));
        const double d = static_cast<double>(std::fabs(dP.eval(u)));
        out.margin = std::min(out.margin, d);
        long double scale = 0.0L;
        for (size_t j = 0; j < m + 3; ++j)
            scale = std::max(scale, std::fabs(to_long_double(v[j]) * basis[j].eval(u)));
        out.relative_margin = std::min(out.relative_margin, static_cast<double>(u * d / scale));
    }

    // exact sign just between consecutive targets
    const MonomialSum Pex = form.numerator(out.exact);
    int prev = 0;
    for (size_t i = 0; i + 1 < n; ++i) {
        const int sg = sgn(Pex.eval((out.targets_exact[i] + out.targets_exact[i + 1]) / 2));
        if (sg == 0 || (prev != 0 && sg == prev)) out.alternates = false;
        prev = sg;
    }
    // |P'| alone scales with |Lambda| and with u^rho; the relative margin does not
    if (!(out.relative_margin >= opts.min_margin) || !(out.margin > 0)) {
        std::ostringstream os;
        os << "non-simple zero: min |P'(u*)| = " << out.margin << ", relative " << out.relative_margin;
        throw NumericalError(os.str());
    }
    return out;
}

ZeroCount count_zeros(const MelnikovForm& form, const Lambda& lam, double lo, double hi, const IsolationOptions& opts) {
    const PiPolynomial P = form.numerator(lam);
    if (P.rational_part.is_zero() && P.pi_part.is_zero()) throw NumericalError("zero polynomial");
    ZeroCount z;
    z.isolation = isolate_sign_changes([&](const Rational& u) { return P.sign(u); }, to_rational(lo), to_rational(hi), opts);
    for (const auto& b : z.isolation.roots) {
        if (!b.simple) throw NumericalError("possible multiple zero");
        ++z.count;
    }
    return z;
}

ZeroCount count_zeros(const MelnikovForm& form, const ExactLambda& lam, double lo, double hi,
                      const IsolationOptions& opts) {
    ZeroCount z;
    z.isolation = isolate_positive_roots(form.numerator(lam), to_rational(lo), to_rational(hi), opts);
    for (const auto& b : z.isolation.roots) {
        if (!b.simple) throw NumericalError("possible multiple zero");
        ++z.count;
    }
    return z;
}

std::vector<double> default_targets(int n, double b0, double frac) {
    // spacing rounded down to 1e-4 so the targets read cleanly
    const double top = frac * b0;
    const double step = std::floor(top / (n + 1) * 1e4) / 1e4;
    std::vector<double> t;
    for (int i = 1; i <= n; ++i) t.push_back(step * i);
    return t;
}

}  // namespace plc
