#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plcycles/curve.hpp"
#include "plcycles/melnikov.hpp"

namespace plc {

// lo:hi:count; a single point is written x:x:1
struct GridSpec {
    double lo = 0.0, hi = 1.0;
    int count = 2;

    std::vector<double> points() const;
};

GridSpec parse_grid(const std::string& text, const std::string& field);

struct Tolerances {
    double quadrature = 1e-12;  // per segment, absolute
    double root = 1e-12;        // bracket width
    double integrator = 1e-17;  // relative local error of the return map
    double bisect = 1e-10;      // cycle location on the section
};

struct ExperimentConfig {
    int k = 1;
    Parity parity = Parity::Odd;
    std::optional<std::vector<int>> p;  // default: the lattice p-list
    std::vector<double> c;              // aligned with the p-list
    std::map<CoeffKey, double> c_map;   // alternative: raw H_k coefficients
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    std::optional<std::vector<double>> targets;  // if set, Lambda comes from realize_zeros
    double lambda_scale = 1.0;  // Lambda_0 = lambda_scale * Lambda
    std::vector<double> eps{0.05};
    std::vector<double> mu{0.0};
    GridSpec u_grid{0.05, 0.9, 100};
    GridSpec v_grid{0.05, 0.75, 70};
    Tolerances tol;
    std::uint64_t seed = 0;

    std::vector<int> p_list() const;
    // unscaled Lambda aligned with p_list()
    Lambda lambda() const;
    SystemParams system(double eps, double mu) const;
};

// Throws UsageError naming the offending field (and line for JSON syntax errors).
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

}  // namespace plc
