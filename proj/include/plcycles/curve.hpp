#pragma once

#include <map>
#include <utility>
#include <vector>

#include "plcycles/poly.hpp"

namespace plc {

enum class Parity { Odd, Even };

const char* to_string(Parity p);
Parity parse_parity(const std::string& s);

using CoeffKey = std::pair<int, int>;  // (i, j) of x^i y^(2j-i)

struct SystemParams {
    int k = 1;
    Parity parity = Parity::Odd;
    double eps = 0.0;
    double mu = 0.0;
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
    std::map<CoeffKey, double> c;

    int max_j() const { return parity == Parity::Odd ? k : k + 1; }
    // throws UsageError on k < 1 or out-of-range keys
    void validate() const;
};

// number of admissible (i,j) keys: k^2+2k or (k+1)^2+2(k+1)
int coefficient_count(int k, Parity parity);
// number of distinct exponents after merging
int expected_m(int k, Parity parity);

long exponent(int i, int j, int k);

struct LatticeEntry {
    int i, j;
    long p;
};

struct ExponentLattice {
    int k = 1;
    Parity parity = Parity::Odd;
    std::vector<LatticeEntry> entries;
    std::map<long, std::vector<CoeffKey>> merged;

    std::vector<long> exponents() const;
    // the Melnikov p-list: exponents / 2, increasing
    std::vector<int> p_list() const;
    std::vector<std::vector<CoeffKey>> collisions() const;
    CoeffKey representative(long p) const;
    // checks every invariant; returns a description of the first violation or ""
    std::string check() const;
};

ExponentLattice build_lattice(int k, Parity parity);

// Pairwise comparison of all keys, independent of build_lattice.
std::vector<std::pair<CoeffKey, CoeffKey>> brute_force_collisions(int k, Parity parity);

// h_m(x) = H_k(x, x^(2k+1)) with colliding exponents summed
MonomialSum reduce_to_h(const SystemParams& params);

// c-map realizing h(x) = sum_i c_i x^(2 p_i), using one lattice key per exponent
std::map<CoeffKey, double> c_map_for(const ExponentLattice& lat, const std::vector<int>& p,
                                     const std::vector<double>& c);

struct BranchOptions {
    double eps0 = 0.1;
    double window = 1.2;
    double tol = 1e-14;
    int max_iter = 50;
};

// Evaluates the switching function y - x^(2k+1) - eps H_k(x,y).
class Curve {
public:
    Curve(const SystemParams& params, double eps);

    long double residual(long double x, long double y) const;
    void gradient(long double x, long double y, long double& hx, long double& hy) const;
    long double H(long double x, long double y) const;
    // h_m(x) for the standard-form coordinates
    long double h(long double x) const;
    // y on the branch through the origin
    long double branch(long double x, const BranchOptions& opts = {}) const;
    double eps() const { return static_cast<double>(eps_); }
    int k() const { return k_; }

private:
    struct Mono {
        int i, e;
        long double c;
    };
    int k_;
    long double eps_;
    std::vector<Mono> H_;
    std::vector<std::pair<int, long double>> h_;
};

double curve_residual(double x, double y, const SystemParams& params);
double implicit_branch(double x, const SystemParams& params, double eps, const BranchOptions& opts = {});

}  // namespace plc
