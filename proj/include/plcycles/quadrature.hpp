#pragma once

#include <cmath>
#include <queue>
#include <vector>

namespace plc {

struct QuadOptions {
    double abs_tol = 1e-12;
    int max_intervals = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    long evals = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                  0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        resk += kWgk[j] * s;
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    return {a, b, resk * h, std::fabs((resk - resg) * h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7,15) with an absolute error target.
template <class F>
QuadResult integrate_gk(F&& f, double a, double b, const QuadOptions& opts = {}) {
    QuadResult r;
    if (a == b) {
        r.converged = true;
        return r;
    }
    if (a > b) {
        r = integrate_gk(f, b, a, opts);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<detail::Panel> q;
    q.push(detail::gk15(f, a, b));
    r.evals = 15;
    double err = q.top().error;
    int n = 1;
    while (err > opts.abs_tol && n < opts.max_intervals) {
        detail::Panel p = q.top();
        q.pop();
        const double m = 0.5 * (p.a + p.b);
        if (!(m > p.a && m < p.b)) {  // cannot split further
            q.push(p);
            break;
        }
        detail::Panel l = detail::gk15(f, p.a, m), rr = detail::gk15(f, m, p.b);
        r.evals += 30;
        err += l.error + rr.error - p.error;
        q.push(l);
        q.push(rr);
        ++n;
    }
    // re-sum to shed the running-update rounding
    double s = 0.0, e = 0.0;
    while (!q.empty()) {
        s += q.top().value;
        e += q.top().error;
        q.pop();
    }
    r.value = s;
    r.error = e;
    r.converged = e <= opts.abs_tol;
    return r;
}

}  // namespace plc
