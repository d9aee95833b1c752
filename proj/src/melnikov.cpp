#include "plcycles/melnikov.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "plcycles/errors.hpp"

namespace plc {

using std::numbers::pi;

Lambda Lambda::scaled(double s) const {
    Lambda o{alpha * s, beta * s, gamma * s, c};
    for (auto& v : o.c) v *= s;
    return o;
}

double Lambda::norm() const {
    double s = alpha * alpha + beta * beta + gamma * gamma;
    for (double v : c) s += v * v;
    return std::sqrt(s);
}

Lambda ExactLambda::to_double() const {
    const long double p = std::numbers::pi_v<long double>;
    Lambda l;
    l.alpha = plc::to_double(alpha);
    l.beta = static_cast<double>(to_long_double(pi_beta) / p);
    l.gamma = static_cast<double>(to_long_double(pi_gamma) / p);
    for (const auto& v : c) l.c.push_back(plc::to_double(v));
    return l;
}

double r_of_u(double u, int k) { return u * std::sqrt(1.0 + std::pow(u, 4 * k)); }

double u_of_r(double r, int k) {
    if (!(r > 0)) throw std::invalid_argument("u_of_r needs r > 0");
    // r(u) is increasing and r(u) <= u sqrt(2) for u <= 1, >= u
    double u = r;
    for (int it = 0; it < 100; ++it) {
        const double q = std::pow(u, 4 * k);
        const double f = u * u * (1.0 + q) - r * r;
        const double df = 2.0 * u + (4.0 * k + 2.0) * u * q;
        const double du = f / df;
        u -= du;
        if (std::fabs(du) <= 1e-17 * u) break;
    }
    return u;
}

double theta1(double u, int k) {
    if (!(u > 0)) throw std::invalid_argument("theta1 needs u > 0");
    return std::atan(std::pow(u, 2 * k));
}

double theta1_prime(double u, int k) {
    if (!(u > 0)) throw std::invalid_argument("theta1_prime needs u > 0");
    const double q = std::pow(u, 4 * k);
    return 2.0 * k * std::pow(u, 2 * k - 1) / ((1.0 + (1.0 + 2.0 * k) * q) * std::sqrt(1.0 + q));
}

// ---------------------------------------------------------------------------

PolarField::PolarField(int k, MonomialSum h, double alpha, double beta, double gamma)
    : k_(k), hpoly_(std::move(h)), alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    for (const auto& t : hpoly_.terms()) h_.push_back({static_cast<int>(t.exp), plc::to_double(t.coef)});
}

PolarField PolarField::from_lambda(int k, const std::vector<int>& p, const Lambda& lam) {
    if (p.size() != lam.c.size()) throw UsageError("p-list and c-list lengths differ");
    std::vector<Term> terms;
    for (size_t i = 0; i < p.size(); ++i) terms.push_back({2L * p[i], to_rational(lam.c[i])});
    return PolarField(k, MonomialSum(std::move(terms)), lam.alpha, lam.beta, lam.gamma);
}

PolarField PolarField::negated() const {
    return PolarField(k_, hpoly_ * Rational(-1), -alpha_, -beta_, -gamma_);
}

void PolarField::derivs(double x, double& h, double& hp, double& hpp) const {
    h = hp = hpp = 0.0;
    for (const auto& [e, c] : h_) {
        const double xe2 = e >= 2 ? std::pow(x, e - 2) : 0.0;
        h += c * std::pow(x, e);
        hp += c * e * std::pow(x, e - 1);
        hpp += c * e * (e - 1) * xe2;
    }
}

double PolarField::F1_plus(double th, double r) const {
    const double C = std::cos(th), S = std::sin(th);
    double h, hp, hpp;
    derivs(r * C, h, hp, hpp);
    return r * hp * S * S - h * C + r * (beta_ * S - C) * S;
}

double PolarField::F1_minus(double th, double r) const {
    const double C = std::cos(th), S = std::sin(th);
    double h, hp, hpp;
    derivs(r * C, h, hp, hpp);
    return r * hp * S * S - h * C - r * beta_ * C * C;
}

double PolarField::dF1_plus(double th, double r) const {
    const double C = std::cos(th), S = std::sin(th);
    double h, hp, hpp;
    derivs(r * C, h, hp, hpp);
    return hp * S * S + r * C * hpp * S * S - hp * C * C + (beta_ * S - C) * S;
}

double PolarField::dF1_minus(double th, double r) const {
    const double C = std::cos(th), S = std::sin(th);
    double h, hp, hpp;
    derivs(r * C, h, hp, hpp);
    return hp * S * S + r * C * hpp * S * S - hp * C * C - beta_ * C * C;
}

double PolarField::F2_plus(double th, double r) const {
    const double C = std::cos(th), S = std::sin(th);
    double h, hp, hpp;
    derivs(r * C, h, hp, hpp);
    return 2.0 * r * C * C * S * S * hp - 0.5 * (C + std::cos(3.0 * th)) * h + r * C * S * S * S - alpha_ * C +
           beta_ * r * std::cos(2.0 * th) * S * S - gamma_ * r * S * S;
}

// ---------------------------------------------------------------------------

namespace {

struct Segments {
    double t1, t2;
};

Segments segments(double r, int k) {
    const double u = u_of_r(r, k);
    const double t1 = theta1(u, k);
    return {t1, t1 + pi};
}

template <class F>
double checked(F&& f, double a, double b, double tol, double& err, const char* what) {
    QuadOptions o;
    o.abs_tol = tol;
    QuadResult q = integrate_gk(f, a, b, o);
    if (!q.converged) {
        std::ostringstream os;
        os << what << ": quadrature did not converge (estimate " << q.error << ")";
        throw NumericalError(os.str());
    }
    err += q.error;
    return q.value;
}

}  // namespace

M1Result M1_quadrature(double r, const PolarField& f, const MelnikovOptions& opts) {
    if (!(r > 0)) throw std::invalid_argument("M1_quadrature needs r > 0");
    const auto [t1, t2] = segments(r, f.k());
    M1Result out;
    auto fm = [&](double t) { return f.F1_minus(t, r); };
    auto fp = [&](double t) { return f.F1_plus(t, r); };
    out.value = checked(fm, 0.0, t1, opts.m1_tol, out.error, "M1") + checked(fp, t1, t2, opts.m1_tol, out.error, "M1") +
                checked(fm, t2, 2 * pi, opts.m1_tol, out.error, "M1");
    return out;
}

double M2_raw(double r, const PolarField& f, const MelnikovOptions& opts, double* error) {
    if (!(r > 0)) throw std::invalid_argument("M2_quadrature needs r > 0");
    const int k = f.k();
    const double u = u_of_r(r, k);
    const double t1 = theta1(u, k), t2 = t1 + pi;
    double err = 0.0, inner_err = 0.0;
    auto fm = [&](double t) { return f.F1_minus(t, r); };
    auto fp = [&](double t) { return f.F1_plus(t, r); };

    const double I1 = checked(fm, 0.0, t1, opts.inner_tol, inner_err, "M2 inner");
    const double I2 = I1 + checked(fp, t1, t2, opts.inner_tol, inner_err, "M2 inner");

    // y_1(theta) = int_0^theta F_1
    auto y1 = [&](double t) {
        double e = 0.0;
        if (t <= t1) return checked(fm, 0.0, t, opts.inner_tol, e, "M2 inner");
        if (t <= t2) return I1 + checked(fp, t1, t, opts.inner_tol, e, "M2 inner");
        return I2 + checked(fm, t2, t, opts.inner_tol, e, "M2 inner");
    };
    auto seg_minus = [&](double t) { return f.dF1_minus(t, r) * y1(t); };
    auto seg_plus = [&](double t) { return f.dF1_plus(t, r) * y1(t) + f.F2_plus(t, r); };

    double f2 = checked(seg_minus, 0.0, t1, opts.outer_tol, err, "M2 outer");
    f2 += checked(seg_plus, t1, t2, opts.outer_tol, err, "M2 outer");
    f2 += checked(seg_minus, t2, 2 * pi, opts.outer_tol, err, "M2 outer");

    // jumps of F_1 across the switching angles
    const double d1 = theta1_prime(u, k);
    const double fstar = (f.F1_minus(t1, r) - f.F1_plus(t1, r)) * d1 * I1 + (f.F1_plus(t2, r) - f.F1_minus(t2, r)) * d1 * I2;
    if (error) *error = err + inner_err;
    return f2 + fstar;
}

M2Result M2_quadrature(double r, const PolarField& f, const MelnikovOptions& opts) {
    M2Result out;
    double e1 = 0.0, e2 = 0.0;
    out.full = M2_raw(r, f, opts, &e1);
    // M2 is quadratic in Lambda with M2(0) = 0, so the odd part is the linear part
    const double neg = M2_raw(r, f.negated(), opts, &e2);
    out.linear = 0.5 * (out.full - neg);
    out.error = 0.5 * (e1 + e2);
    return out;
}

// ---------------------------------------------------------------------------

long double PiPolynomial::eval(long double u) const {
    return rational_part.eval(u) + std::numbers::pi_v<long double> * pi_part.eval(u);
}

int PiPolynomial::sign(const Rational& u) const {
    MonomialSum both[2] = {rational_part, pi_part};
    auto cl = ClearedPoly::clear_together(both);
    const long deg = std::max(rational_part.degree(), pi_part.degree());
    if (deg < 0) return 0;
    const Integer a = cl[0].scaled_value(u.get_num(), u.get_den(), deg);
    const Integer b = cl[1].scaled_value(u.get_num(), u.get_den(), deg);
    if (sgn(b) == 0) return sgn(a);
    const Rational lo = Rational(a) + Rational(b) * pi_lower();
    const Rational hi = Rational(a) + Rational(b) * pi_upper();
    if (sgn(lo) == sgn(hi)) return sgn(lo);
    return kSignUnknown;
}

MelnikovForm::MelnikovForm(int k, std::vector<int> p) : k_(k), p_(std::move(p)) {
    if (k < 1) throw UsageError("k must be >= 1");
    for (size_t i = 0; i < p_.size(); ++i) {
        if (p_[i] < 1) throw UsageError("p-list entries must be positive");
        if (i > 0 && p_[i] <= p_[i - 1]) throw UsageError("p-list must be strictly increasing");
    }
}

double MelnikovForm::B_alpha(double u) const {
    return 8.0 * std::pow(u, 2 * k_) + 8.0 * (2 * k_ + 1) * std::pow(u, 6 * k_);
}

double MelnikovForm::B_beta(double u) const {
    return -pi * u - 2.0 * pi * (3 * k_ + 1) * std::pow(u, 4 * k_ + 1) - pi * (2 * k_ + 1) * std::pow(u, 8 * k_ + 1);
}

double MelnikovForm::B_gamma(double u) const {
    return -2.0 * pi * u - 4.0 * pi * (k_ + 1) * std::pow(u, 4 * k_ + 1) -
           2.0 * pi * (2 * k_ + 1) * std::pow(u, 8 * k_ + 1);
}

double MelnikovForm::G(int i, double u) const { return 8.0 * std::pow(u, 2 * (k_ + p_.at(i))); }

double MelnikovForm::Q(double u) const {
    const double q = std::pow(u, 4 * k_);
    return 4.0 * (1.0 + (1.0 + 2.0 * k_) * q) * std::sqrt(1.0 + q);
}

double MelnikovForm::P(double u, const Lambda& lam) const {
    if (lam.c.size() != p_.size()) throw UsageError("Lambda has the wrong number of c coefficients");
    double s = lam.alpha * B_alpha(u) + lam.beta * B_beta(u) + lam.gamma * B_gamma(u);
    for (int i = 0; i < m(); ++i) s += lam.c[i] * G(i, u);
    return s;
}

MonomialSum MelnikovForm::B_alpha_poly() const {
    return MonomialSum({{2L * k_, 8}, {6L * k_, Rational(8 * (2 * k_ + 1))}});
}

MonomialSum MelnikovForm::B_beta_over_pi() const {
    return MonomialSum({{1, -1}, {4L * k_ + 1, Rational(-2 * (3 * k_ + 1))}, {8L * k_ + 1, Rational(-(2 * k_ + 1))}});
}

MonomialSum MelnikovForm::B_gamma_over_pi() const {
    return MonomialSum(
        {{1, -2}, {4L * k_ + 1, Rational(-4 * (k_ + 1))}, {8L * k_ + 1, Rational(-2 * (2 * k_ + 1))}});
}

MonomialSum MelnikovForm::G_poly(int i) const { return MonomialSum::monomial(2L * (k_ + p_.at(i)), 8); }

PiPolynomial MelnikovForm::numerator(const Lambda& lam) const {
    if (lam.c.size() != p_.size()) throw UsageError("Lambda has the wrong number of c coefficients");
    PiPolynomial out;
    out.rational_part = B_alpha_poly() * to_rational(lam.alpha);
    for (int i = 0; i < m(); ++i) out.rational_part += G_poly(i) * to_rational(lam.c[i]);
    out.pi_part = B_beta_over_pi() * to_rational(lam.beta) + B_gamma_over_pi() * to_rational(lam.gamma);
    return out;
}

MonomialSum MelnikovForm::numerator(const ExactLambda& lam) const {
    if (lam.c.size() != p_.size()) throw UsageError("Lambda has the wrong number of c coefficients");
    MonomialSum out = B_alpha_poly() * lam.alpha + B_beta_over_pi() * lam.pi_beta + B_gamma_over_pi() * lam.pi_gamma;
    for (int i = 0; i < m(); ++i) out += G_poly(i) * lam.c[i];
    return out;
}

double closed_form_M2(double u, const MelnikovForm& form, double alpha, double beta, double gamma,
                      const std::vector<double>& c) {
    return closed_form_M2(u, form, Lambda{alpha, beta, gamma, c});
}

double closed_form_M2(double u, const MelnikovForm& form, const Lambda& lam) {
    if (!(u > 0)) throw std::invalid_argument("closed_form_M2 needs u > 0");
    return form.P(u, lam) / form.Q(u);
}

double mu_i_closed_form(double u, int k, int p_i) {
    if (!(u > 0) || p_i < 1) throw std::invalid_argument("mu_i needs u > 0 and p_i >= 1");
    const double q = std::pow(u, 4 * k);
    const double uform = 8.0 * std::pow(u, 2 * (k + p_i)) / (4.0 * (1.0 + (1.0 + 2.0 * k) * q) * std::sqrt(1.0 + q));
    const double r = r_of_u(u, k), t = theta1(u, k), C = std::cos(t), S = std::sin(t);
    const double rform =
        std::pow(r, 2 * p_i) * 2.0 * std::pow(C, 2 * p_i + 1) * S * (C - r * theta1_prime(u, k) * S);
    if (std::fabs(uform - rform) > 1e-9 * std::max(1.0, std::fabs(uform)))
        throw NumericalError("mu_i: u-form and r-form disagree");
    return uform;
}

std::pair<double, double> appendix_identity_check(int p, double theta) {
    if (p < 1) throw std::invalid_argument("appendix identity needs p >= 1");
    auto f = [p](double phi) {
        const double C = std::cos(phi), S = std::sin(phi);
        return std::pow(C, 2 * p - 1) * (C * C - 2.0 * p * S * S);
    };
    QuadOptions o;
    o.abs_tol = 1e-14;
    const double lhs = integrate_gk(f, 0.0, theta, o).value;
    const double rhs = std::pow(std::cos(theta), 2 * p) * std::sin(theta);
    return {lhs, rhs};
}

std::vector<MonomialSum> cheb_basis(int k, const std::vector<int>& p) {
    MelnikovForm form(k, p);  // validates p
    const long K = k;
    std::vector<MonomialSum> b;
    b.push_back(MonomialSum({{1, 1}, {8 * K + 1, Rational(2 * K + 1)}}));
    b.push_back(MonomialSum({{2 * K, 1}, {6 * K, Rational(2 * K + 1)}}));
    b.push_back(MonomialSum::monomial(4 * K + 1));
    for (int q : p) b.push_back(MonomialSum::monomial(2 * (K + q)));
    return b;
}

ExactLambda lambda_from_g(int k, const std::vector<Rational>& a) {
    if (a.size() < 3) throw std::invalid_argument("need at least the three leading G-coefficients");
    ExactLambda l;
    l.alpha = a[1] / 8;
    l.pi_beta = a[0] * frac(2 * (k + 1), 4 * k) - a[2] * frac(2, 8 * k);
    l.pi_gamma = -a[0] * frac(3 * k + 1, 4 * k) + a[2] * frac(1, 8 * k);
    for (size_t i = 3; i < a.size(); ++i) l.c.push_back(a[i] / 8);
    return l;
}

std::vector<Rational> g_from_lambda(int k, const ExactLambda& l) {
    std::vector<Rational> a(3 + l.c.size());
    a[0] = -l.pi_beta - 2 * l.pi_gamma;
    a[1] = 8 * l.alpha;
    a[2] = Rational(-2 * (3 * k + 1)) * l.pi_beta - Rational(4 * (k + 1)) * l.pi_gamma;
    for (size_t i = 0; i < l.c.size(); ++i) a[3 + i] = 8 * l.c[i];
    return a;
}

}  // namespace plc
