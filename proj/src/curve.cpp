#include "plcycles/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plcycles/errors.hpp"

namespace plc {

const char* to_string(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

Parity parse_parity(const std::string& s) {
    if (s == "odd") return Parity::Odd;
    if (s == "even") return Parity::Even;
    throw UsageError("parity must be 'odd' or 'even', got '" + s + "'");
}

int coefficient_count(int k, Parity parity) {
    const int n = parity == Parity::Odd ? k : k + 1;
    return n * n + 2 * n;
}

int expected_m(int k, Parity parity) {
    return parity == Parity::Odd ? k * k + 2 * k : (k + 1) * (k + 1) + 2 * (k + 1) - 2;
}

void SystemParams::validate() const {
    if (k < 1) throw UsageError("k must be >= 1");
    for (const auto& [key, v] : c) {
        const auto [i, j] = key;
        if (j < 1 || j > max_j() || i < 0 || i > 2 * j) {
            std::ostringstream os;
            os << "coefficient key (" << i << "," << j << ") outside the " << to_string(parity)
               << " range for k=" << k;
            throw UsageError(os.str());
        }
        if (!std::isfinite(v)) throw UsageError("non-finite coefficient");
    }
}

long exponent(int i, int j, int k) {
    if (k < 1 || j < 1 || i < 0 || i > 2 * j) throw std::invalid_argument("exponent(i,j,k): need 0<=i<=2j, j>=1, k>=1");
    return i + static_cast<long>(2 * k + 1) * (2 * j - i);
}

ExponentLattice build_lattice(int k, Parity parity) {
    if (k < 1) throw UsageError("k must be >= 1");
    ExponentLattice lat;
    lat.k = k;
    lat.parity = parity;
    const int jmax = parity == Parity::Odd ? k : k + 1;
    for (int j = 1; j <= jmax; ++j)
        for (int i = 0; i <= 2 * j; ++i) {
            const long p = exponent(i, j, k);
            lat.entries.push_back({i, j, p});
            lat.merged[p].push_back({i, j});
        }
    return lat;
}

std::vector<long> ExponentLattice::exponents() const {
    std::vector<long> out;
    for (const auto& [p, keys] : merged) out.push_back(p);
    return out;
}

std::vector<int> ExponentLattice::p_list() const {
    std::vector<int> out;
    for (const auto& [p, keys] : merged) out.push_back(static_cast<int>(p / 2));
    return out;
}

std::vector<std::vector<CoeffKey>> ExponentLattice::collisions() const {
    std::vector<std::vector<CoeffKey>> out;
    for (const auto& [p, keys] : merged)
        if (keys.size() > 1) out.push_back(keys);
    return out;
}

CoeffKey ExponentLattice::representative(long p) const {
    auto it = merged.find(p);
    if (it == merged.end()) throw UsageError("exponent " + std::to_string(p) + " is not in the lattice");
    return it->second.front();
}

std::string ExponentLattice::check() const {
    for (const auto& e : entries) {
        if (e.p != 2L * (2 * k + 1) * e.j - 2L * k * e.i) return "exponent formula mismatch";
        if (e.p % 2 != 0 || e.p <= 0) return "exponent not even and positive";
    }
    const auto cls = collisions();
    if (parity == Parity::Odd) {
        if (!cls.empty()) return "odd lattice has collisions";
    } else {
        std::vector<std::vector<CoeffKey>> want = {{{0, 1}, {2 * k + 1, k + 1}}, {{1, 1}, {2 * k + 2, k + 1}}};
        auto norm = [](std::vector<std::vector<CoeffKey>> v) {
            for (auto& c : v) std::sort(c.begin(), c.end());
            std::sort(v.begin(), v.end());
            return v;
        };
        if (norm(cls) != norm(want)) return "even lattice collision classes differ from the expected two";
    }
    if (static_cast<int>(merged.size()) != expected_m(k, parity)) return "distinct exponent count mismatch";
    return "";
}

std::vector<std::pair<CoeffKey, CoeffKey>> brute_force_collisions(int k, Parity parity) {
    const int jmax = parity == Parity::Odd ? k : k + 1;
    std::vector<CoeffKey> keys;
    for (int j = 1; j <= jmax; ++j)
        for (int i = 0; i <= 2 * j; ++i) keys.push_back({i, j});
    std::vector<std::pair<CoeffKey, CoeffKey>> out;
    for (size_t a = 0; a < keys.size(); ++a)
        for (size_t b = a + 1; b < keys.size(); ++b) {
            // x^i (x^(2k+1))^(2j-i), compared directly
            const long pa = keys[a].first + static_cast<long>(2 * k + 1) * (2 * keys[a].second - keys[a].first);
            const long pb = keys[b].first + static_cast<long>(2 * k + 1) * (2 * keys[b].second - keys[b].first);
            if (pa == pb) out.push_back({keys[a], keys[b]});
        }
    return out;
}

MonomialSum reduce_to_h(const SystemParams& params) {
    params.validate();
    std::vector<Term> terms;
    for (const auto& [key, v] : params.c)
        terms.push_back({exponent(key.first, key.second, params.k), to_rational(v)});
    return MonomialSum(std::move(terms));
}

std::map<CoeffKey, double> c_map_for(const ExponentLattice& lat, const std::vector<int>& p,
                                     const std::vector<double>& c) {
    if (p.size() != c.size()) throw UsageError("p-list and c-list lengths differ");
    std::map<CoeffKey, double> out;
    for (size_t i = 0; i < p.size(); ++i) out[lat.representative(2L * p[i])] += c[i];
    return out;
}

// ---------------------------------------------------------------------------

Curve::Curve(const SystemParams& params, double eps) : k_(params.k), eps_(eps) {
    params.validate();
    for (const auto& [key, v] : params.c) {
        if (v == 0.0) continue;
        H_.push_back({key.first, 2 * key.second - key.first, static_cast<long double>(v)});
    }
    std::map<int, long double> hm;
    for (const auto& m : H_) hm[m.i + (2 * k_ + 1) * m.e] += m.c;
    for (const auto& [e, c] : hm) h_.push_back({e, c});
}

namespace {
inline long double ipow(long double x, int n) {
    long double r = 1.0L;
    while (n > 0) {
        if (n & 1) r *= x;
        x *= x;
        n >>= 1;
    }
    return r;
}
}  // namespace

long double Curve::H(long double x, long double y) const {
    long double s = 0.0L;
    for (const auto& m : H_) s += m.c * ipow(x, m.i) * ipow(y, m.e);
    return s;
}

long double Curve::h(long double x) const {
    long double s = 0.0L;
    for (const auto& [e, c] : h_) s += c * ipow(x, e);
    return s;
}

long double Curve::residual(long double x, long double y) const {
    return y - ipow(x, 2 * k_ + 1) - eps_ * H(x, y);
}

void Curve::gradient(long double x, long double y, long double& hx, long double& hy) const {
    long double Hx = 0.0L, Hy = 0.0L;
    for (const auto& m : H_) {
        if (m.i > 0) Hx += m.c * m.i * ipow(x, m.i - 1) * ipow(y, m.e);
        if (m.e > 0) Hy += m.c * m.e * ipow(x, m.i) * ipow(y, m.e - 1);
    }
    hx = -(2 * k_ + 1) * ipow(x, 2 * k_) - eps_ * Hx;
    hy = 1.0L - eps_ * Hy;
}

long double Curve::branch(long double x, const BranchOptions& opts) const {
    if (std::fabs(static_cast<double>(eps_)) > opts.eps0)
        throw NumericalError("branch solve failed: |eps| above eps0");
    if (std::fabs(static_cast<double>(x)) > opts.window)
        throw NumericalError("branch solve failed: x outside the working window");
    long double y = ipow(x, 2 * k_ + 1) + eps_ * h(x);
    if (H_.empty()) return y;
    int extra = 2;  // polish past the tolerance; Newton is cheap here
    for (int it = 0; it < opts.max_iter; ++it) {
        const long double r = residual(x, y);
        if (std::fabs(r) <= opts.tol && extra-- <= 0) return y;
        if (r == 0.0L) return y;
        long double hx, hy;
        gradient(x, y, hx, hy);
        if (hy == 0.0L) break;
        y -= r / hy;
    }
    if (std::fabs(residual(x, y)) <= opts.tol) return y;
    throw NumericalError("branch solve failed");
}

double curve_residual(double x, double y, const SystemParams& params) {
    return static_cast<double>(Curve(params, params.eps).residual(x, y));
}

double implicit_branch(double x, const SystemParams& params, double eps, const BranchOptions& opts) {
    return static_cast<double>(Curve(params, eps).branch(x, opts));
}

}  // namespace plc
