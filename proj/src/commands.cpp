#include "plcycles/commands.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "plcycles/ect.hpp"
#include "plcycles/errors.hpp"
#include "plcycles/filippov.hpp"
#include "plcycles/parallel.hpp"

namespace plc {

using nlohmann::json;

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CommandResult::render(Format f) const {
    if (f == Format::Csv) return csv;
    return doc.dump(2) + "\n";
}

namespace {

// JSON has no NaN; missing values become null
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json envelope(const char* command) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    return j;
}

json lambda_json(const Lambda& l) {
    json c = json::array();
    for (double v : l.c) c.push_back(v);
    return {{"alpha", l.alpha}, {"beta", l.beta}, {"gamma", l.gamma}, {"c", c}};
}

json exact_json(const ExactLambda& l) {
    json c = json::array();
    for (const auto& v : l.c) c.push_back(to_string(v));
    return {{"alpha", to_string(l.alpha)}, {"pi_beta", to_string(l.pi_beta)}, {"pi_gamma", to_string(l.pi_gamma)},
            {"c", c}};
}

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            if (!first) os_ << ',';
            os_ << h;
            first = false;
        }
        os_ << '\n';
    }
    Csv& operator<<(double v) { return cell(fmt17(v)); }
    Csv& operator<<(int v) { return cell(std::to_string(v)); }
    Csv& operator<<(long v) { return cell(std::to_string(v)); }
    Csv& operator<<(const std::string& s) { return cell(s); }
    Csv& operator<<(const char* s) { return cell(s); }
    void end() {
        os_ << '\n';
        fresh_ = true;
    }
    std::string str() const { return os_.str(); }

private:
    Csv& cell(const std::string& s) {
        if (!fresh_) os_ << ',';
        os_ << s;
        fresh_ = false;
        return *this;
    }
    std::ostringstream os_;
    bool fresh_ = true;
};

json certificate_json(const ECTCertificate& cert) {
    json recs = json::array();
    for (const auto& r : cert.records)
        recs.push_back({{"order", r.order},
                        {"coefficient", to_string(r.coefficient)},
                        {"exponent", r.exponent},
                        {"nonvanishing", r.nonvanishing},
                        {"method", r.method},
                        {"terms", r.w.terms().size()}});
    const std::string sc = cert.self_check();
    return {{"k", cert.k},     {"p", cert.p},        {"b0", cert.b0},
            {"b0_exact", to_string(cert.b0_exact)}, {"records", recs},
            {"self_check", sc.empty() ? json("ok") : json(sc)}};
}

json realization_json(const Realization& r) {
    json g = json::array();
    for (const auto& v : r.g) g.push_back(to_string(v));
    return {{"k", r.k},
            {"p", r.p},
            {"targets", r.targets},
            {"basis_used", r.basis_used},
            {"g", g},
            {"lambda_star", lambda_json(r.lambda_star)},
            {"lambda_exact", exact_json(r.exact)},
            {"residual", r.residual},
            {"margin", r.margin},
            {"relative_margin", r.relative_margin},
            {"alternates", r.alternates}};
}

json cycle_json(const Cycle& c) {
    return {{"v", num(c.v)},
            {"standard_radius", num(c.standard_radius)},
            {"mean_radius", num(c.mean_radius)},
            {"period", num(c.period)},
            {"lambda", num(c.lambda)},
            {"lambda_minus_1", num(c.lambda - 1)},
            {"fd_step", num(c.fd_step)},
            {"stability", c.stability}};
}

json segment_json(const SlidingSegment& s) {
    return {{"x_lo", s.x_lo}, {"x_hi", s.x_hi}, {"stability", s.stability}};
}

json report_json(const CycleReport& r) {
    json cyc = json::array(), sl = json::array(), pr = json::array();
    for (const auto& c : r.cycles) cyc.push_back(cycle_json(c));
    for (const auto& s : r.sliding) sl.push_back(segment_json(s));
    for (const auto& p : r.predicted)
        pr.push_back({{"u", p.u},
                      {"radius", p.radius},
                      {"cycle", p.cycle},
                      {"rel_error", num(p.rel_error)},
                      {"matched", p.matched}});
    return {{"eps", r.eps},         {"mu", r.mu},
            {"cycles", cyc},        {"sliding_segments", sl},
            {"predicted", pr},      {"degenerate_center", r.degenerate_center},
            {"failed_points", r.failed_points}};
}

IntegratorOptions integrator_for(const ExperimentConfig& cfg) {
    IntegratorOptions o = return_map_options();
    o.rtol = cfg.tol.integrator;
    o.atol = cfg.tol.integrator * 1e-2;
    return o;
}

}  // namespace

CommandResult cmd_mel_eval(const ExperimentConfig& cfg, const RunContext& ctx) {
    const auto p = cfg.p_list();
    const Lambda lam = cfg.lambda().scaled(cfg.lambda_scale);
    const MelnikovForm form(cfg.k, p);
    const PolarField field = PolarField::from_lambda(cfg.k, p, lam);
    MelnikovOptions mo;
    mo.m1_tol = mo.inner_tol = cfg.tol.quadrature;
    const auto us = cfg.u_grid.points();
    const int n = static_cast<int>(us.size());
    std::vector<std::array<double, 5>> rows(n);
    parallel_for(n, ctx.threads, [&](int i) {
        const double u = us[i];
        const double P = form.P(u, lam), Q = form.Q(u);
        const double closed = closed_form_M2(u, form, lam);
        const double quad = M2_quadrature(r_of_u(u, cfg.k), field, mo).linear;
        rows[i] = {P, Q, closed, quad, std::fabs(closed - quad)};
    });
    CommandResult out;
    Csv csv{"u", "P", "Q", "M2_closed", "M2_quadrature", "abs_diff"};
    json jr = json::array();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& r = rows[i];
        csv << us[i] << r[0] << r[1] << r[2] << r[3] << r[4];
        csv.end();
        jr.push_back({{"u", us[i]}, {"P", r[0]}, {"Q", r[1]}, {"M2_closed", r[2]}, {"M2_quadrature", r[3]},
                      {"abs_diff", r[4]}});
        worst = std::max(worst, r[4]);
    }
    out.csv = csv.str();
    out.doc = envelope("mel-eval");
    out.doc["k"] = cfg.k;
    out.doc["p"] = p;
    out.doc["lambda"] = lambda_json(lam);
    out.doc["rows"] = jr;
    out.doc["max_abs_diff"] = worst;
    return out;
}

CommandResult cmd_lemma_exponents(int k, Parity parity) {
    if (k < 1 || k > 50) throw UsageError("k must be in 1..50");
    const auto lat = build_lattice(k, parity);
    const std::string violation = lat.check();
    const auto brute = brute_force_collisions(k, parity);
    CommandResult out;
    out.doc = envelope("lemma-exponents");
    out.doc["k"] = k;
    out.doc["parity"] = to_string(parity);
    json entries = json::array();
    Csv csv{"i", "j", "p", "class_size"};
    for (const auto& e : lat.entries) {
        const long cls = static_cast<long>(lat.merged.at(e.p).size());
        entries.push_back({{"i", e.i}, {"j", e.j}, {"p", e.p}});
        csv << e.i << e.j << e.p << cls;
        csv.end();
    }
    json merged = json::array();
    for (const auto& [p, keys] : lat.merged) {
        json ks = json::array();
        for (const auto& [i, j] : keys) ks.push_back({i, j});
        merged.push_back({{"p", p}, {"keys", ks}});
    }
    json coll = json::array();
    for (const auto& cls : lat.collisions()) {
        json ks = json::array();
        for (const auto& [i, j] : cls) ks.push_back({i, j});
        coll.push_back(ks);
    }
    // each collision class of size s contributes s(s-1)/2 brute-force pairs
    size_t pairs = 0;
    for (const auto& cls : lat.collisions()) pairs += cls.size() * (cls.size() - 1) / 2;
    const bool brute_ok = pairs == brute.size();
    out.doc["coefficient_count"] = lat.entries.size();
    out.doc["distinct_exponents"] = lat.merged.size();
    out.doc["expected_m"] = expected_m(k, parity);
    out.doc["entries"] = entries;
    out.doc["merged"] = merged;
    out.doc["collisions"] = coll;
    out.doc["p_list"] = lat.p_list();
    out.doc["brute_force_pairs"] = brute.size();
    out.doc["invariants"] = violation.empty() && brute_ok ? json("ok") : json(violation.empty() ? "brute-force mismatch" : violation);
    out.csv = csv.str();
    out.status = violation.empty() && brute_ok ? 0 : 3;
    return out;
}

CommandResult cmd_certify_ect(int k, const std::vector<int>& p) {
    const auto cert = certify_ect(k, p);
    CommandResult out;
    out.doc = envelope("certify-ect");
    out.doc["certificate"] = certificate_json(cert);
    Csv csv{"order", "coefficient", "exponent", "nonvanishing"};
    for (const auto& r : cert.records) {
        csv << r.order << to_string(r.coefficient) << r.exponent << (r.nonvanishing ? "true" : "false");
        csv.end();
    }
    out.csv = csv.str();
    out.status = cert.self_check().empty() ? 0 : 3;
    return out;
}

CommandResult cmd_realize(int k, const std::vector<int>& p, const std::vector<double>& targets) {
    const auto cert = certify_ect(k, p);
    RealizeOptions ro;
    ro.b0 = cert.b0;
    const auto r = realize_zeros(k, p, targets, ro);
    const MelnikovForm form(k, p);
    const auto z = count_zeros(form, r.exact, 0.0, cert.b0);
    CommandResult out;
    out.doc = envelope("realize");
    out.doc["b0"] = cert.b0;
    out.doc["realization"] = realization_json(r);
    out.doc["zero_count"] = z.count;
    const bool ok = z.count == static_cast<int>(targets.size()) && r.alternates && r.residual <= 1e-10;
    out.doc["verified"] = ok;
    Csv csv{"target", "P"};
    const auto P = form.numerator(r.lambda_star);
    for (double t : r.targets) {
        csv << t << static_cast<double>(P.eval(t));
        csv.end();
    }
    out.csv = csv.str();
    out.status = ok ? 0 : 3;
    return out;
}

namespace {

// Melnikov zeros of the configured Lambda, as simulation predictions
std::vector<double> predicted_zeros(const ExperimentConfig& cfg) {
    if (cfg.targets) return *cfg.targets;
    const auto p = cfg.p_list();
    const Lambda lam = cfg.lambda();
    if (lam.norm() == 0.0) return {};
    const MelnikovForm form(cfg.k, p);
    const double hi = std::max(cfg.u_grid.hi, 1e-3);
    std::vector<double> out;
    for (const auto& b : count_zeros(form, lam, 0.0, hi).isolation.roots)
        out.push_back(to_double((b.lo + b.hi) / 2));
    return out;
}

}  // namespace

CommandResult cmd_simulate(const ExperimentConfig& cfg, const RunContext& ctx) {
    const auto predicted = predicted_zeros(cfg);
    CommandResult out;
    out.doc = envelope("simulate");
    out.doc["k"] = cfg.k;
    out.doc["p"] = cfg.p_list();
    out.doc["lambda"] = lambda_json(cfg.lambda().scaled(cfg.lambda_scale));
    out.doc["predicted_u"] = predicted;
    json reports = json::array();
    Csv csv{"eps", "mu", "v", "displacement"};
    bool all_match = true;
    std::vector<CycleReport> reps;
    for (double e : cfg.eps)
        for (double m : cfg.mu) {
            CycleOptions co;
            co.grid = cfg.v_grid.count;
            co.bisect_tol = cfg.tol.bisect;
            co.threads = ctx.threads;
            co.predicted_u = predicted;
            co.integ = integrator_for(cfg);
            const auto rep = find_cycles(cfg.system(e, m), e, cfg.v_grid.lo, cfg.v_grid.hi, co);
            for (const auto& row : rep.table) {
                csv << e << m << row[0] << row[1];
                csv.end();
            }
            json jr = report_json(rep);
            bool match = rep.cycles.size() == predicted.size();
            for (const auto& p : rep.predicted) match = match && p.matched;
            jr["count_matches_prediction"] = match;
            if (!predicted.empty()) all_match = all_match && match;
            reports.push_back(jr);
            reps.push_back(rep);
        }
    // |lambda - 1| ratio between consecutive eps at equal mu, cycle by cycle
    json scaling = json::array();
    const size_t nm = cfg.mu.size();
    for (size_t i = 0; i + nm < reps.size(); ++i) {
        const auto& a = reps[i];
        const auto& b = reps[i + nm];
        if (a.cycles.size() != b.cycles.size()) continue;
        for (size_t c = 0; c < a.cycles.size(); ++c)
            scaling.push_back({{"eps_a", a.eps},
                               {"eps_b", b.eps},
                               {"mu", a.mu},
                               {"cycle", c},
                               {"ratio", num(std::fabs(a.cycles[c].lambda - 1) / std::fabs(b.cycles[c].lambda - 1))},
                               {"expected", (a.eps / b.eps) * (a.eps / b.eps)}});
    }
    out.doc["reports"] = reports;
    out.doc["lambda_scaling"] = scaling;
    out.doc["all_counts_match"] = all_match;
    out.csv = csv.str();
    out.status = all_match ? 0 : 3;
    return out;
}

CommandResult cmd_pseudo_hopf(const ExperimentConfig& cfg, const RunContext& ctx) {
    const double e = cfg.eps.front();
    PseudoHopfOptions po;
    po.threads = ctx.threads;
    po.integ = integrator_for(cfg);
    const auto rows = pseudo_hopf_sweep(cfg.system(e, 0.0), e, cfg.mu, po);
    CommandResult out;
    out.doc = envelope("pseudo-hopf");
    out.doc["eps"] = e;
    out.doc["lambda"] = lambda_json(cfg.lambda().scaled(cfg.lambda_scale));
    json jr = json::array();
    Csv csv{"mu", "has_sliding", "x_lo", "x_hi", "width", "h2", "cycle", "v", "standard_radius", "lambda"};
    for (const auto& r : rows) {
        json cyc = json::array();
        for (const auto& c : r.cycles) cyc.push_back(cycle_json(c));
        jr.push_back({{"mu", r.mu},
                      {"has_sliding", r.has_sliding},
                      {"segment", r.has_sliding ? segment_json(r.segment) : json(nullptr)},
                      {"width", r.width},
                      {"h2", r.h2},
                      {"cycle", r.cycle},
                      {"cycles", cyc}});
        const Cycle c = r.cycles.empty() ? Cycle{NAN, NAN, NAN, NAN, NAN, NAN, ""} : r.cycles.front();
        csv << r.mu << (r.has_sliding ? "true" : "false") << (r.has_sliding ? r.segment.x_lo : NAN)
            << (r.has_sliding ? r.segment.x_hi : NAN) << r.width << (r.h2 ? "true" : "false")
            << (r.cycle ? "true" : "false") << c.v << c.standard_radius << c.lambda;
        csv.end();
    }
    const bool os = one_sided(rows);
    out.doc["rows"] = jr;
    out.doc["one_sided"] = os;
    out.csv = csv.str();
    out.status = os ? 0 : 3;
    return out;
}

CommandResult cmd_theorem_check(int k, Parity parity, const RunContext& ctx, const TheoremCheckOptions& opts) {
    if (k < 1 || (parity == Parity::Even && k < 2)) throw UsageError("theorem-check needs k >= 1 (odd) or k >= 2 (even)");
    // even degree 2k is the lattice of the even family with k' = k - 1
    const int kk = parity == Parity::Odd ? k : k - 1;
    const int expected = parity == Parity::Odd ? k * k + 2 * k + 3 : k * k + 2 * k + 1;
    CommandResult out;
    out.doc = envelope("theorem-check");
    out.doc["k"] = k;
    out.doc["parity"] = to_string(parity);
    out.doc["degree"] = parity == Parity::Odd ? 2 * k + 1 : 2 * k;
    out.doc["internal_k"] = kk;
    out.doc["expected_cycles"] = expected;
    std::string stage = "lattice";
    try {
        const auto lat = build_lattice(kk, parity);
        const std::string viol = lat.check();
        if (!viol.empty()) throw VerificationError(viol);
        const auto p = lat.p_list();
        const int m = static_cast<int>(p.size());
        out.doc["m"] = m;
        out.doc["p"] = p;

        stage = "certificate";
        const auto cert = certify_ect(kk, p);
        const std::string sc = cert.self_check();
        if (!sc.empty()) throw VerificationError(sc);
        out.doc["b0"] = cert.b0;

        stage = "realization";
        const auto targets = default_targets(m + 2, cert.b0, opts.target_fraction);
        RealizeOptions ro;
        ro.b0 = cert.b0;
        const auto r = realize_zeros(kk, p, targets, ro);
        out.doc["realization"] = realization_json(r);

        stage = "zero count";
        const MelnikovForm form(kk, p);
        const auto z = count_zeros(form, r.exact, 0.0, cert.b0);
        bool bracketed = z.count == static_cast<int>(targets.size());
        for (size_t i = 0; bracketed && i < targets.size(); ++i) {
            const Rational t = to_rational(r.targets[i]);
            bracketed = z.isolation.roots[i].lo <= t && t <= z.isolation.roots[i].hi;
        }
        int zd = -1;
        try {
            zd = count_zeros(form, r.lambda_star, 0.0, cert.b0).count;
        } catch (const NumericalError&) {
        }
        out.doc["zero_count"] = z.count;
        out.doc["zero_count_double_lambda"] = zd;
        out.doc["zeros_at_targets"] = bracketed;

        stage = "pseudo-hopf";
        SystemParams sp;
        sp.k = kk;
        sp.parity = parity;
        sp.eps = opts.hopf_eps;
        sp.gamma = opts.hopf_gamma;
        PseudoHopfOptions po;
        po.threads = ctx.threads;
        const auto rows = pseudo_hopf_sweep(sp, opts.hopf_eps, opts.hopf_mu, po);
        const bool os = one_sided(rows);
        out.doc["pseudo_hopf"] = {{"eps", opts.hopf_eps}, {"gamma", opts.hopf_gamma}, {"mu", opts.hopf_mu}, {"one_sided", os}};

        const int cycles = z.count + (os ? 1 : 0);
        out.doc["cycle_count"] = cycles;
        const bool pass = z.count == m + 2 && bracketed && r.alternates && r.residual <= 1e-10 && os &&
                          cycles == expected;
        out.doc["pass"] = pass;
        out.status = pass ? 0 : 3;
    } catch (const UsageError& e) {
        throw UsageError(stage + ": " + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(stage + ": " + e.what());
    } catch (const VerificationError& e) {
        throw VerificationError(stage + ": " + e.what());
    }
    Csv csv{"field", "value"};
    for (const char* key : {"k", "parity", "m", "expected_cycles", "zero_count", "cycle_count", "pass"}) {
        csv << key << out.doc[key].dump();
        csv.end();
    }
    out.csv = csv.str();
    return out;
}

}  // namespace plc
