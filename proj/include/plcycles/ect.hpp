#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plcycles/melnikov.hpp"
#include "plcycles/poly.hpp"

namespace plc {

struct WronskianRecord {
    int order = 0;            // l: W(h_1..h_l)
    Rational coefficient;     // of the lowest-order term
    long exponent = 0;        // its exponent
    bool nonvanishing = false;  // on (0, b0]
    std::string method = "exact-sign-scan";
    MonomialSum w;
};

struct ECTCertificate {
    int k = 1;
    std::vector<int> p;
    double b0 = 0.0;
    Rational b0_exact;
    std::vector<WronskianRecord> records;

    // checks the closed-form leading terms; returns "" or the first failure
    std::string self_check() const;
};

struct CertifyOptions {
    long grid = 4096;  // points on (0,1]
    double width = 1e-12;
};

ECTCertificate certify_ect(int k, const std::vector<int>& p, const CertifyOptions& opts = {});

// lowest exponent of W_{i+3}, i >= 1
long rho(int k, const std::vector<int>& p, int i);

struct Realization {
    int k = 1;
    std::vector<int> p;
    std::vector<double> targets;
    std::vector<Rational> targets_exact;
    int basis_used = 0;         // leading basis functions in the solve
    std::vector<Rational> g;    // P = sum g_i h_i (length m+3)
    ExactLambda exact;
    Lambda lambda_star;
    double residual = 0.0;      // max |P(u*)| with the double Lambda
    double margin = 0.0;        // min |P'(u*)|
    double relative_margin = 0.0;  // min |u* P'(u*)| / max_j |g_j h_j(u*)|
    bool alternates = true;
};

struct RealizeOptions {
    std::optional<double> b0;     // if set, targets must lie in (0, b0)
    Lambda seed{1.0, 0.0, 0.0, {}};  // returned for an empty target list
    double min_margin = 1e-10;  // on relative_margin
};

Realization realize_zeros(int k, const std::vector<int>& p, const std::vector<double>& targets,
                          const RealizeOptions& opts = {});

struct ZeroCount {
    int count = 0;
    RootIsolation isolation;
};

ZeroCount count_zeros(const MelnikovForm& form, const Lambda& lam, double lo, double hi,
                      const IsolationOptions& opts = {});
ZeroCount count_zeros(const MelnikovForm& form, const ExactLambda& lam, double lo, double hi,
                      const IsolationOptions& opts = {});

// m+2 evenly spaced rationals in (0, frac * b0)
std::vector<double> default_targets(int n, double b0, double frac = 0.9);

}  // namespace plc
