#pragma once

#include <utility>
#include <vector>

#include "plcycles/poly.hpp"
#include "plcycles/quadrature.hpp"

namespace plc {

// Lambda = (alpha, beta, gamma, c_1..c_m); c_i multiplies x^(2 p_i) in h_m.
struct Lambda {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    std::vector<double> c;

    Lambda scaled(double s) const;
    double norm() const;
};

// Exact parameters with the pi factors of beta and gamma split off:
// beta = pi_beta / pi, gamma = pi_gamma / pi. This keeps P rational.
struct ExactLambda {
    Rational alpha = 0, pi_beta = 0, pi_gamma = 0;
    std::vector<Rational> c;

    Lambda to_double() const;
};

double r_of_u(double u, int k);
double u_of_r(double r, int k);
double theta1(double u, int k);
double theta1_prime(double u, int k);

class PolarField {
public:
    PolarField(int k, MonomialSum h, double alpha, double beta, double gamma);
    static PolarField from_lambda(int k, const std::vector<int>& p, const Lambda& lam);

    int k() const { return k_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    const MonomialSum& h_poly() const { return hpoly_; }

    // same field with Lambda -> -Lambda
    PolarField negated() const;

    double F1_plus(double th, double r) const;
    double F1_minus(double th, double r) const;
    double F2_plus(double th, double r) const;
    double F2_minus(double, double) const { return 0.0; }
    double dF1_plus(double th, double r) const;
    double dF1_minus(double th, double r) const;

private:
    void derivs(double x, double& h, double& hp, double& hpp) const;

    int k_;
    MonomialSum hpoly_;
    std::vector<std::pair<int, double>> h_;
    double alpha_, beta_, gamma_;
};

struct MelnikovOptions {
    double m1_tol = 1e-12;   // per segment
    double inner_tol = 1e-12;
    double outer_tol = 1e-10;
};

struct M1Result {
    double value = 0.0;
    double error = 0.0;
};

struct M2Result {
    double linear = 0.0;  // part linear in Lambda, comparable with P/Q
    double full = 0.0;    // f2 + f2* with the full fields
    double error = 0.0;
};

M1Result M1_quadrature(double r, const PolarField& field, const MelnikovOptions& opts = {});
M2Result M2_quadrature(double r, const PolarField& field, const MelnikovOptions& opts = {});
// f2 + f2* of one field (no linear-part extraction)
double M2_raw(double r, const PolarField& field, const MelnikovOptions& opts, double* error = nullptr);

// P = rational_part + pi * pi_part
struct PiPolynomial {
    MonomialSum rational_part, pi_part;

    long double eval(long double u) const;
    // exact sign at a rational point, kSignUnknown if the pi enclosure cannot decide
    int sign(const Rational& u) const;
};

class MelnikovForm {
public:
    MelnikovForm(int k, std::vector<int> p);

    int k() const { return k_; }
    int m() const { return static_cast<int>(p_.size()); }
    const std::vector<int>& p() const { return p_; }

    double B_alpha(double u) const;
    double B_beta(double u) const;
    double B_gamma(double u) const;
    double G(int i, double u) const;  // i is 0-based
    double Q(double u) const;
    double P(double u, const Lambda& lam) const;

    MonomialSum B_alpha_poly() const;
    MonomialSum B_beta_over_pi() const;
    MonomialSum B_gamma_over_pi() const;
    MonomialSum G_poly(int i) const;

    PiPolynomial numerator(const Lambda& lam) const;
    MonomialSum numerator(const ExactLambda& lam) const;

private:
    int k_;
    std::vector<int> p_;
};

double closed_form_M2(double u, const MelnikovForm& form, double alpha, double beta, double gamma,
                      const std::vector<double>& c);
double closed_form_M2(double u, const MelnikovForm& form, const Lambda& lam);

double mu_i_closed_form(double u, int k, int p_i);

std::pair<double, double> appendix_identity_check(int p, double theta);

// h_1..h_{m+3}
std::vector<MonomialSum> cheb_basis(int k, const std::vector<int>& p);

// G-coordinates a (P = sum a_i h_i) <-> Lambda, exactly
ExactLambda lambda_from_g(int k, const std::vector<Rational>& a);
std::vector<Rational> g_from_lambda(int k, const ExactLambda& lam);

}  // namespace plc
