#include "plcycles/filippov.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "plcycles/errors.hpp"
#include "plcycles/melnikov.hpp"
#include "plcycles/parallel.hpp"

namespace plc {

const char* to_string(Zone z) {
    switch (z) {
        case Zone::X: return "X";
        case Zone::Y: return "Y";
        default: return "sliding";
    }
}

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::Crossing: return "crossing";
        case EventKind::Tangency: return "tangency";
        case EventKind::SlidingEntry: return "sliding-entry";
        case EventKind::SlidingExit: return "sliding-exit";
        case EventKind::SectionHit: return "section-hit";
        default: return "ray-hit";
    }
}

const char* to_string(BoundaryType b) {
    switch (b) {
        case BoundaryType::Crossing: return "crossing";
        case BoundaryType::Sliding: return "sliding";
        default: return "tangency";
    }
}

IntegratorOptions return_map_options() {
    IntegratorOptions o;
    o.rtol = 1e-17;
    o.atol = 1e-19;
    o.h0 = 1e-3;
    o.hmax = 0.05;
    return o;
}

namespace {

using S2 = std::array<long double, 2>;
using Stepper = boost::numeric::odeint::runge_kutta_fehlberg78<S2, long double, S2, long double>;
using ld = long double;

class Engine {
public:
    Engine(const SystemParams& p, double eps, const IntegratorOptions& o)
        : curve_(p, eps), opts_(o), e_(eps), a_(p.alpha), b_(p.beta), g_(p.gamma), mu_(p.mu) {
        bopts_.window = std::max(bopts_.window, o.window);
        bopts_.eps0 = std::max(bopts_.eps0, std::fabs(eps));
    }

    const Curve& curve() const { return curve_; }

    void X(ld x, ld y, ld& dx, ld& dy) const {
        dx = (1 + e_) * y + e_ * e_ * a_;
        dy = -x - e_ * b_ * y + e_ * e_ * g_ * y;
    }
    void Y(ld x, ld y, ld& dx, ld& dy) const {
        dx = y + e_ * b_ * x;
        dy = mu_ - x;
    }
    void lie(ld x, ld y, ld& LX, ld& LY) const {
        ld hx, hy, dx, dy;
        curve_.gradient(x, y, hx, hy);
        X(x, y, dx, dy);
        LX = hx * dx + hy * dy;
        Y(x, y, dx, dy);
        LY = hx * dx + hy * dy;
    }
    ld branch(ld x) const { return curve_.branch(x, bopts_); }

    // sliding dynamics on the branch, state (x, -)
    ld sliding_speed(ld x) const {
        const ld y = branch(x);
        ld LX, LY, xd, yd, xs, ys;
        lie(x, y, LX, LY);
        X(x, y, xd, yd);
        Y(x, y, xs, ys);
        const ld lam = LY / (LY - LX);
        return lam * xd + (1 - lam) * xs;
    }

    void deriv(Zone z, const S2& s, S2& d) const {
        switch (z) {
            case Zone::X: X(s[0], s[1], d[0], d[1]); break;
            case Zone::Y: Y(s[0], s[1], d[0], d[1]); break;
            default:
                d[0] = sliding_speed(s[0]);
                d[1] = 0;
        }
    }

    void step(Zone z, const S2& in, ld h, S2& out, S2& err) const {
        Stepper st;
        auto sys = [this, z](const S2& s, S2& d, ld) { deriv(z, s, d); };
        st.do_step(sys, in, ld(0), out, h, err);
    }
    S2 step(Zone z, const S2& in, ld h) const {
        S2 out, err;
        step(z, in, h, out, err);
        return out;
    }
    ld error_norm(const S2& a, const S2& b, const S2& err) const {
        ld n = 0;
        for (int i = 0; i < 2; ++i) {
            const ld sc = opts_.atol + opts_.rtol * std::max(std::fabs(a[i]), std::fabs(b[i]));
            n = std::max(n, std::fabs(err[i]) / sc);
        }
        return n;
    }

    // tau in (0, h] where g(step(s0, tau)) reaches sign(g(step(s0, h)))
    template <class G>
    ld locate(Zone z, const S2& s0, ld h, G&& g) const {
        auto f = [&](ld tau) { return g(step(z, s0, tau)); };
        const ld fh = f(h);
        const int sh = fh > 0 ? 1 : (fh < 0 ? -1 : 0);
        if (sh == 0) return h;
        ld lo = 0, flo = g(s0);
        if (!(flo * sh < 0)) {
            // start sits on the surface (just switched); walk in until the old sign shows
            ld t = h;
            bool found = false;
            for (int i = 0; i < 60; ++i) {
                t *= 0.5L;
                const ld ft = f(t);
                if (ft * sh < 0) {
                    lo = t;
                    flo = ft;
                    found = true;
                    break;
                }
            }
            if (!found) return 0;
        }
        boost::uintmax_t iters = 200;
        auto tol = boost::math::tools::eps_tolerance<ld>(std::numeric_limits<ld>::digits - 3);
        auto r = boost::math::tools::toms748_solve(f, lo, h, flo, fh, tol, iters);
        const ld fa = f(r.first);
        return (fa * sh >= 0) ? r.first : r.second;
    }

    const IntegratorOptions& opts() const { return opts_; }
    double eps() const { return static_cast<double>(e_); }

private:
    Curve curve_;
    IntegratorOptions opts_;
    BranchOptions bopts_;
    ld e_, a_, b_, g_, mu_;
};

struct RunConfig {
    ld t_end = 0;
    bool stop_at_section = false;
    bool record_ray = false;
};

struct RunState {
    S2 s{};
    Zone zone = Zone::X;
    ld t = 0;
    ld r_integral = 0;  // int sqrt(x^2+y^2) dt
    bool ray_seen = false;
    ld ray_x = 0;
    int crossings = 0, slides = 0;
};

Zone zone_of(const Engine& en, ld x, ld y) {
    const ld h = en.curve().residual(x, y);
    return h >= 0 ? Zone::X : Zone::Y;
}

void push_event(Trajectory& tr, const Engine& en, const RunState& st, EventKind k, Zone before, Zone after) {
    TrajectoryEvent ev;
    ev.time = static_cast<double>(st.t);
    ev.x = static_cast<double>(st.s[0]);
    ev.y = static_cast<double>(st.s[1]);
    ev.kind = k;
    ev.before = before;
    ev.after = after;
    ld LX, LY;
    en.lie(st.s[0], st.s[1], LX, LY);
    ev.LX = static_cast<double>(LX);
    ev.LY = static_cast<double>(LY);
    tr.events.push_back(ev);
}

// Drives one trajectory until t_end, the section, or a failure.
void run(const Engine& en, RunState& st, const RunConfig& cfg, Trajectory& tr) {
    const auto& o = en.opts();
    ld h = o.h0;
    long steps = 0;
    auto store = [&] {
        if (o.store_points)
            tr.points.push_back({static_cast<double>(st.t), static_cast<double>(st.s[0]), static_cast<double>(st.s[1])});
    };
    store();
    const ld eps = en.eps();
    auto ray_g = [&](const S2& s) { return s[1] - eps * en.curve().h(s[0]); };

    while (true) {
        if (++steps > o.max_steps) {
            tr.stop_reason = "step-limit";
            return;
        }
        if (static_cast<int>(tr.events.size()) > o.max_events) {
            tr.stop_reason = "event-limit";
            return;
        }
        const ld remaining = cfg.t_end - st.t;
        if (remaining <= 0) {
            tr.stop_reason = "time";
            return;
        }
        ld hh = std::min({h, static_cast<ld>(o.hmax), remaining});
        S2 s1, err;
        en.step(st.zone, st.s, hh, s1, err);
        const ld en_norm = en.error_norm(st.s, s1, err);
        if (!(en_norm <= 1)) {
            h = hh * std::max(ld(0.2), ld(0.9) * std::pow(std::max(en_norm, ld(1e-30)), ld(-1) / 8));
            if (!(h >= o.hmin)) {
                std::ostringstream os;
                os << "step-size collapse near (" << static_cast<double>(st.s[0]) << ", "
                   << static_cast<double>(st.s[1]) << ")";
                throw NumericalError(os.str());
            }
            continue;
        }
        const ld grow = std::min(ld(5), ld(0.9) * std::pow(std::max(en_norm, ld(1e-30)), ld(-1) / 8));

        if (st.zone == Zone::Sliding) {
            // exit when the X or Y normal component changes sign
            auto LXf = [&](const S2& s) {
                ld LX, LY;
                en.lie(s[0], en.branch(s[0]), LX, LY);
                return LX;
            };
            auto LYf = [&](const S2& s) {
                ld LX, LY;
                en.lie(s[0], en.branch(s[0]), LX, LY);
                return LY;
            };
            const ld lx1 = LXf(s1), ly1 = LYf(s1);
            ld tau = hh;
            Zone next = Zone::Sliding;
            if (lx1 >= 0) {
                tau = en.locate(Zone::Sliding, st.s, hh, LXf);
                next = Zone::X;
            }
            if (ly1 <= 0) {
                const ld t2 = en.locate(Zone::Sliding, st.s, hh, LYf);
                if (next == Zone::Sliding || t2 < tau) {
                    tau = t2;
                    next = Zone::Y;
                }
            }
            const S2 sn = next == Zone::Sliding ? s1 : en.step(Zone::Sliding, st.s, tau);
            const ld yb0 = en.branch(st.s[0]), yb1 = en.branch(sn[0]);
            st.r_integral += tau * 0.5L * (std::hypot(st.s[0], yb0) + std::hypot(sn[0], yb1));
            st.s = sn;
            st.t += tau;
            if (next != Zone::Sliding) {
                st.s[1] = en.branch(st.s[0]);
                st.zone = next;
                push_event(tr, en, st, EventKind::SlidingExit, Zone::Sliding, next);
                h = o.h0;
            } else {
                if (std::fabs(en.sliding_speed(st.s[0])) < 1e-15L) {
                    st.s[1] = en.branch(st.s[0]);
                    tr.stop_reason = "pseudo-equilibrium";
                    return;
                }
                h = hh * grow;
            }
            if (std::fabs(st.s[0]) > o.window) {
                tr.stop_reason = "escaped";
                return;
            }
            store();
            continue;
        }

        // crossing / section / ray events inside [0, hh]
        enum class Ev { None, Boundary, Section } kind = Ev::None;
        ld tau = hh;
        const int zs = st.zone == Zone::X ? 1 : -1;
        const ld H1 = en.curve().residual(s1[0], s1[1]);
        if (H1 * zs < 0) {
            tau = en.locate(st.zone, st.s, hh, [&](const S2& s) { return en.curve().residual(s[0], s[1]); });
            kind = Ev::Boundary;
        }
        if (cfg.stop_at_section && st.s[0] < 0 && s1[0] >= 0 && s1[1] > 0) {
            const ld ts = en.locate(st.zone, st.s, hh, [](const S2& s) { return s[0]; });
            if (kind == Ev::None || ts < tau) {
                tau = ts;
                kind = Ev::Section;
            }
        }
        if (cfg.record_ray && !st.ray_seen && s1[0] > 0 && ray_g(st.s) > 0 && ray_g(s1) <= 0) {
            const ld tr_ = en.locate(st.zone, st.s, hh, ray_g);
            if (tr_ <= tau) {
                st.ray_seen = true;
                st.ray_x = en.step(st.zone, st.s, tr_)[0];
            }
        }
        const S2 sn = kind == Ev::None ? s1 : en.step(st.zone, st.s, tau);
        st.r_integral += tau * 0.5L * (std::hypot(st.s[0], st.s[1]) + std::hypot(sn[0], sn[1]));
        st.s = sn;
        st.t += tau;
        store();
        if (std::fabs(st.s[0]) > o.window || std::fabs(st.s[1]) > o.window) {
            tr.stop_reason = "escaped";
            return;
        }
        if (kind == Ev::None) {
            h = hh * grow;
            continue;
        }
        if (kind == Ev::Section) {
            push_event(tr, en, st, EventKind::SectionHit, st.zone, st.zone);
            tr.stop_reason = "section";
            return;
        }
        // on the switching curve: classify with the one-sided normal components
        ld LX, LY;
        en.lie(st.s[0], st.s[1], LX, LY);
        const ld prod = LX * LY;
        const Zone before = st.zone;
        if (prod < -o.tangency_tol && LX < 0 && LY > 0) {
            st.zone = Zone::Sliding;
            st.s[1] = en.branch(st.s[0]);
            ++st.slides;
            push_event(tr, en, st, EventKind::SlidingEntry, before, Zone::Sliding);
        } else {
            st.zone = before == Zone::X ? Zone::Y : Zone::X;
            ++st.crossings;
            push_event(tr, en, st, prod > o.tangency_tol ? EventKind::Crossing : EventKind::Tangency, before,
                       st.zone);
        }
        h = std::max(tau, ld(o.h0));
    }
}

}  // namespace

LieDerivatives lie_derivatives(double x, const SystemParams& params, double eps) {
    Engine en(params, eps, IntegratorOptions{});
    const ld y = en.branch(x);
    ld LX, LY, hx, hy;
    en.lie(x, y, LX, LY);
    en.curve().gradient(x, y, hx, hy);
    return {static_cast<double>(LX / hy), static_cast<double>(LY / hy)};
}

BoundaryType classify_boundary(double x, const SystemParams& params, double eps, double tol) {
    const auto L = lie_derivatives(x, params, eps);
    const double p = L.LX * L.LY;
    if (p > tol) return BoundaryType::Crossing;
    if (p < -tol) return BoundaryType::Sliding;
    return BoundaryType::Tangency;
}

Trajectory integrate(double x0, double y0, const SystemParams& params, double eps, double t_end,
                     const IntegratorOptions& opts) {
    Engine en(params, eps, opts);
    if (std::fabs(x0) > opts.window || std::fabs(y0) > opts.window)
        throw UsageError("initial state outside the working window");
    RunState st;
    st.s = {x0, y0};
    st.zone = zone_of(en, x0, y0);
    RunConfig cfg;
    cfg.t_end = t_end;
    Trajectory tr;
    run(en, st, cfg, tr);
    tr.t_final = static_cast<double>(st.t);
    tr.x = static_cast<double>(st.s[0]);
    tr.y = static_cast<double>(st.s[1]);
    tr.zone = st.zone;
    return tr;
}

ReturnResult poincare_return(double v, const SystemParams& params, double eps, const IntegratorOptions& opts,
                             double t_max) {
    Engine en(params, eps, opts);
    ReturnResult out;
    if (!(v > 0)) throw UsageError("section coordinate must be positive");
    RunState st;
    st.s = {0.0L, static_cast<ld>(v)};
    st.zone = zone_of(en, 0, v);
    RunConfig cfg;
    cfg.t_end = t_max;
    cfg.stop_at_section = true;
    cfg.record_ray = true;
    Trajectory tr;
    try {
        run(en, st, cfg, tr);
    } catch (const NumericalError& e) {
        out.status = ReturnStatus::NoReturn;
        out.detail = e.what();
        return out;
    }
    out.crossings = st.crossings;
    out.slides = st.slides;
    out.period = static_cast<double>(st.t);
    out.detail = tr.stop_reason;
    if (tr.stop_reason == "section") {
        out.status = ReturnStatus::Returned;
        out.v_next = static_cast<double>(st.s[1]);
        out.standard_radius = st.ray_seen ? static_cast<double>(st.ray_x) : NAN;
        out.mean_radius = static_cast<double>(st.r_integral / st.t);
    } else if (tr.stop_reason == "escaped") {
        out.status = ReturnStatus::Escaped;
    }
    return out;
}

double poincare_map(double v, const SystemParams& params, double eps, const IntegratorOptions& opts) {
    const auto r = poincare_return(v, params, eps, opts);
    if (r.status == ReturnStatus::Escaped) throw NumericalError("escaped");
    if (r.status != ReturnStatus::Returned) throw NumericalError("no return: " + r.detail);
    return r.v_next;
}

namespace {

std::vector<SlidingSegment> scan_sliding(const SystemParams& params, double eps, double lo, double hi, int n) {
    std::vector<SlidingSegment> out;
    auto prod = [&](double x) {
        const auto L = lie_derivatives(x, params, eps);
        return L.LX * L.LY;
    };
    auto refine = [&](double a, double b) {  // a crossing-ish, b sliding
        for (int i = 0; i < 200 && std::fabs(b - a) > 1e-16 * std::max(1.0, std::fabs(a)); ++i) {
            const double m = 0.5 * (a + b);
            if (m == a || m == b) break;
            if (prod(m) < 0)
                b = m;
            else
                a = m;
        }
        return b;
    };
    std::vector<double> xs(n);
    std::vector<char> sl(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = lo + (hi - lo) * i / (n - 1);
        sl[i] = prod(xs[i]) < 0;
    }
    for (int i = 0; i < n;) {
        if (!sl[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && sl[j + 1]) ++j;
        SlidingSegment seg;
        seg.x_lo = i > 0 ? refine(xs[i - 1], xs[i]) : xs[i];
        seg.x_hi = j + 1 < n ? refine(xs[j + 1], xs[j]) : xs[j];
        const auto L = lie_derivatives(0.5 * (seg.x_lo + seg.x_hi), params, eps);
        seg.stability = L.LX < 0 ? "attracting" : "repelling";
        out.push_back(seg);
        i = j + 1;
    }
    return out;
}

}  // namespace

CycleReport find_cycles(const SystemParams& params, double eps, double v_lo, double v_hi, const CycleOptions& opts) {
    if (!(v_lo > 0 && v_hi > v_lo) || opts.grid < 2) throw UsageError("bad cycle search interval");
    CycleReport rep;
    rep.eps = eps;
    rep.mu = params.mu;
    const int n = opts.grid;
    std::vector<double> vs(n), D(n, NAN);
    for (int i = 0; i < n; ++i) vs[i] = v_lo + (v_hi - v_lo) * i / (n - 1);
    parallel_for(n, opts.threads, [&](int i) {
        const auto r = poincare_return(vs[i], params, eps, opts.integ);
        if (r.status == ReturnStatus::Returned) D[i] = r.v_next - vs[i];
    });
    double dmax = 0.0;
    for (int i = 0; i < n; ++i) {
        rep.table.push_back({vs[i], D[i]});
        if (std::isnan(D[i]))
            ++rep.failed_points;
        else
            dmax = std::max(dmax, std::fabs(D[i]));
    }
    const double xr = std::max(4.0 * std::fabs(params.mu), 1e-3);
    rep.sliding = scan_sliding(params, eps, -xr, xr, 801);

    if (rep.failed_points < n && dmax <= opts.degenerate_tol) {
        rep.degenerate_center = true;
    } else {
        std::vector<std::pair<double, double>> brackets;
        for (int i = 0; i + 1 < n; ++i)
            if (!std::isnan(D[i]) && !std::isnan(D[i + 1]) && D[i] * D[i + 1] < 0) brackets.push_back({vs[i], vs[i + 1]});
        std::vector<Cycle> found(brackets.size());
        std::vector<char> ok(brackets.size(), 0);
        parallel_for(static_cast<int>(brackets.size()), opts.threads, [&](int b) {
            auto disp = [&](double v) {
                const auto r = poincare_return(v, params, eps, opts.integ);
                if (r.status != ReturnStatus::Returned) throw NumericalError("no return inside a bracket");
                return r.v_next - v;
            };
            try {
                double a = brackets[b].first, c = brackets[b].second;
                double fa = disp(a), fc = disp(c);
                boost::uintmax_t it = 200;
                auto tol = [&](double x, double y) { return std::fabs(x - y) <= opts.bisect_tol; };
                auto r = boost::math::tools::toms748_solve(disp, a, c, fa, fc, tol, it);
                const double v = 0.5 * (r.first + r.second);
                Cycle cy;
                cy.v = v;
                cy.fd_step = opts.fd_rel * v;
                const double pp = poincare_map(v + cy.fd_step, params, eps, opts.integ);
                const double pm = poincare_map(v - cy.fd_step, params, eps, opts.integ);
                cy.lambda = (pp - pm) / (2 * cy.fd_step);
                cy.stability = cy.lambda < 1 ? "attracting" : "repelling";
                const auto rr = poincare_return(v, params, eps, opts.integ);
                cy.standard_radius = rr.standard_radius;
                cy.mean_radius = rr.mean_radius;
                cy.period = rr.period;
                found[b] = cy;
                ok[b] = 1;
            } catch (const NumericalError&) {
            }
        });
        for (size_t b = 0; b < found.size(); ++b)
            if (ok[b]) rep.cycles.push_back(found[b]);
    }

    for (double u : opts.predicted_u) {
        Prediction p;
        p.u = u;
        p.radius = r_of_u(u, params.k);
        double best = INFINITY;
        for (size_t c = 0; c < rep.cycles.size(); ++c) {
            const double rel = std::fabs(rep.cycles[c].standard_radius - p.radius) / p.radius;
            if (rel < best) {
                best = rel;
                p.cycle = static_cast<int>(c);
            }
        }
        p.rel_error = best;
        p.matched = best <= opts.match_rel;
        rep.predicted.push_back(p);
    }
    return rep;
}

std::vector<PseudoHopfRow> pseudo_hopf_sweep(const SystemParams& params, double eps, const std::vector<double>& mu_values,
                                             const PseudoHopfOptions& opts) {
    std::vector<PseudoHopfRow> rows(mu_values.size());
    for (size_t i = 0; i < mu_values.size(); ++i) {
        const double mu = mu_values[i];
        PseudoHopfRow& row = rows[i];
        row.mu = mu;
        SystemParams p = params;
        p.mu = mu;
        if (mu == 0.0) continue;  // tangency at the origin only
        const double xr = 3.0 * std::fabs(mu);
        const auto segs = scan_sliding(p, eps, -xr, xr, opts.scan);
        if (segs.empty()) continue;
        // the segment touching the origin
        const SlidingSegment* best = &segs.front();
        for (const auto& s : segs)
            if (std::fabs(0.5 * (s.x_lo + s.x_hi)) < std::fabs(0.5 * (best->x_lo + best->x_hi))) best = &s;
        row.has_sliding = true;
        row.segment = *best;
        row.width = best->x_hi - best->x_lo;
        const auto L = lie_derivatives(0.5 * (best->x_lo + best->x_hi), p, eps);
        row.h2 = L.LX * L.LY < 0;
        CycleOptions co;
        co.grid = opts.grid;
        co.threads = opts.threads;
        co.integ = opts.integ;
        const auto rep = find_cycles(p, eps, row.width * 1.0001, 5.0 * row.width, co);
        row.cycles = rep.cycles;
        row.cycle = !rep.cycles.empty();
    }
    return rows;
}

bool one_sided(const std::vector<PseudoHopfRow>& rows) {
    int pos_yes = 0, pos_no = 0, neg_yes = 0, neg_no = 0;
    for (const auto& r : rows) {
        if (r.mu > 0) (r.cycle ? pos_yes : pos_no)++;
        if (r.mu < 0) (r.cycle ? neg_yes : neg_no)++;
    }
    return (pos_no == 0 && neg_yes == 0 && pos_yes > 0) || (neg_no == 0 && pos_yes == 0 && neg_yes > 0);
}

}  // namespace plc
