#include "plcycles/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "plcycles/ect.hpp"
#include "plcycles/errors.hpp"

namespace plc {

using nlohmann::json;

std::vector<double> GridSpec::points() const {
    if (count == 1) return {lo};
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
}

namespace {

void check_grid(const GridSpec& g, const std::string& field) {
    if (g.count == 1 && g.lo == g.hi) return;
    if (!(g.lo < g.hi)) throw UsageError(field + ": need lo < hi");
    if (g.count < 2) throw UsageError(field + ": need count >= 2");
}

}  // namespace

GridSpec parse_grid(const std::string& text, const std::string& field) {
    std::istringstream is(text);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') || !std::getline(is, c))
        throw UsageError(field + ": expected lo:hi:count, got '" + text + "'");
    GridSpec g;
    try {
        size_t pos = 0;
        g.lo = std::stod(a, &pos);
        if (pos != a.size()) throw std::invalid_argument(a);
        g.hi = std::stod(b, &pos);
        if (pos != b.size()) throw std::invalid_argument(b);
        g.count = std::stoi(c, &pos);
        if (pos != c.size()) throw std::invalid_argument(c);
    } catch (const std::logic_error&) {
        throw UsageError(field + ": expected lo:hi:count, got '" + text + "'");
    }
    check_grid(g, field);
    return g;
}

std::vector<int> ExperimentConfig::p_list() const {
    if (p) return *p;
    return build_lattice(k, parity).p_list();
}

Lambda ExperimentConfig::lambda() const {
    const auto pl = p_list();
    if (targets) return realize_zeros(k, pl, *targets).lambda_star;
    Lambda l{alpha, beta, gamma, c};
    if (!c_map.empty()) {
        SystemParams sp;
        sp.k = k;
        sp.parity = parity;
        sp.c = c_map;
        l.c.assign(pl.size(), 0.0);
        const MonomialSum h = reduce_to_h(sp);
        for (const auto& t : h.terms()) {
            const auto it = std::find(pl.begin(), pl.end(), t.exp / 2);
            if (it == pl.end()) throw UsageError("c: exponent " + std::to_string(t.exp) + " not in the p-list");
            l.c[it - pl.begin()] = to_double(t.coef);
        }
    }
    if (l.c.empty()) l.c.assign(pl.size(), 0.0);
    if (l.c.size() != pl.size()) throw UsageError("c: length differs from the p-list");
    return l;
}

SystemParams ExperimentConfig::system(double e, double m) const {
    const Lambda l = lambda().scaled(lambda_scale);
    SystemParams sp;
    sp.k = k;
    sp.parity = parity;
    sp.eps = e;
    sp.mu = m;
    sp.alpha = l.alpha;
    sp.beta = l.beta;
    sp.gamma = l.gamma;
    sp.c = c_map_for(build_lattice(k, parity), p_list(), l.c);
    sp.validate();
    return sp;
}

namespace {

template <class T>
T get(const json& j, const char* field) {
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        throw UsageError(std::string(field) + ": wrong type");
    }
}

template <class T>
std::vector<T> get_list(const json& j, const char* field) {
    const json& v = j.at(field);
    if (v.is_number()) return {get<T>(j, field)};
    return get<std::vector<T>>(j, field);
}

GridSpec grid_field(const json& j, const char* field) {
    const json& v = j.at(field);
    if (v.is_string()) return parse_grid(v.get<std::string>(), field);
    if (!v.is_object()) throw UsageError(std::string(field) + ": expected \"lo:hi:count\" or {lo,hi,count}");
    GridSpec g;
    g.lo = get<double>(v, "lo");
    g.hi = get<double>(v, "hi");
    g.count = get<int>(v, "count");
    check_grid(g, field);
    return g;
}

void positive(double v, const std::string& field) {
    if (!(v > 0)) throw UsageError(field + ": must be positive");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // byte offset -> line
        const size_t off = std::min<size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(off), '\n');
        throw UsageError("config line " + std::to_string(line) + ": " + e.what());
    }
    if (!j.is_object()) throw UsageError("config: expected a JSON object");
    static const char* known[] = {"k",  "parity", "p",      "c",      "alpha",  "beta",       "gamma",
                                  "targets", "lambda_scale", "eps", "mu", "u_grid", "v_grid", "tolerances",
                                  "seed"};
    for (const auto& [key, _] : j.items())
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw UsageError("config: unknown field '" + key + "'");

    ExperimentConfig c;
    if (j.contains("k")) c.k = get<int>(j, "k");
    if (c.k < 1) throw UsageError("k: must be >= 1");
    if (j.contains("parity")) {
        try {
            c.parity = parse_parity(get<std::string>(j, "parity"));
        } catch (const std::invalid_argument&) {
            throw UsageError("parity: expected odd or even");
        }
    }
    if (j.contains("p")) {
        c.p = get_list<int>(j, "p");
        for (size_t i = 0; i < c.p->size(); ++i)
            if ((*c.p)[i] < 1 || (i > 0 && (*c.p)[i] <= (*c.p)[i - 1]))
                throw UsageError("p: must be strictly increasing positive integers");
    }
    if (j.contains("c")) {
        const json& v = j.at("c");
        if (v.is_object()) {
            for (const auto& [key, val] : v.items()) {
                int ii, jj;
                char comma;
                std::istringstream is(key);
                if (!(is >> ii >> comma >> jj) || comma != ',' || !val.is_number())
                    throw UsageError("c: keys must look like \"i,j\" with numeric values");
                c.c_map[{ii, jj}] = val.get<double>();
            }
        } else {
            c.c = get_list<double>(j, "c");
        }
    }
    if (j.contains("alpha")) c.alpha = get<double>(j, "alpha");
    if (j.contains("beta")) c.beta = get<double>(j, "beta");
    if (j.contains("gamma")) c.gamma = get<double>(j, "gamma");
    if (j.contains("targets")) c.targets = get_list<double>(j, "targets");
    if (j.contains("lambda_scale")) c.lambda_scale = get<double>(j, "lambda_scale");
    if (j.contains("eps")) c.eps = get_list<double>(j, "eps");
    if (j.contains("mu")) c.mu = get_list<double>(j, "mu");
    if (c.eps.empty()) throw UsageError("eps: empty list");
    if (c.mu.empty()) throw UsageError("mu: empty list");
    if (j.contains("u_grid")) c.u_grid = grid_field(j, "u_grid");
    if (j.contains("v_grid")) c.v_grid = grid_field(j, "v_grid");
    positive(c.u_grid.lo, "u_grid");
    positive(c.v_grid.lo, "v_grid");
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw UsageError("tolerances: expected an object");
        for (const auto& [key, _] : t.items()) {
            double* dst = key == "quadrature" ? &c.tol.quadrature
                          : key == "root"     ? &c.tol.root
                          : key == "integrator" ? &c.tol.integrator
                          : key == "bisect"   ? &c.tol.bisect
                                              : nullptr;
            if (!dst) throw UsageError("tolerances: unknown field '" + key + "'");
            *dst = get<double>(t, key.c_str());
            positive(*dst, "tolerances." + key);
        }
    }
    if (j.contains("seed")) c.seed = get<std::uint64_t>(j, "seed");
    if (!c.c.empty() && !c.c_map.empty()) throw UsageError("c: give either a list or a map");
    if (!c.c.empty() && c.c.size() != c.p_list().size()) throw UsageError("c: length differs from the p-list");
    if (!c.c_map.empty()) {
        SystemParams sp;
        sp.k = c.k;
        sp.parity = c.parity;
        sp.c = c.c_map;
        sp.validate();
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace plc
