#pragma once

#include <array>
#include <string>
#include <vector>

#include "plcycles/curve.hpp"

namespace plc {

enum class Zone { Y = -1, Sliding = 0, X = 1 };
enum class EventKind { Crossing, Tangency, SlidingEntry, SlidingExit, SectionHit, RayHit };
enum class BoundaryType { Crossing, Sliding, Tangency };

const char* to_string(Zone z);
const char* to_string(EventKind k);
const char* to_string(BoundaryType b);

struct TrajectoryEvent {
    double time = 0.0;
    double x = 0.0, y = 0.0;
    EventKind kind = EventKind::Crossing;
    Zone before = Zone::X, after = Zone::X;
    double LX = 0.0, LY = 0.0;
};

struct IntegratorOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h0 = 1e-3;
    double hmax = 0.05;
    double hmin = 1e-16;
    double window = 1.2;
    double tangency_tol = 1e-12;
    int max_events = 2000;
    long max_steps = 2000000;
    bool store_points = false;
};

// tight settings for return maps whose displacement is O(eps^2 |Lambda|)
IntegratorOptions return_map_options();

struct LieDerivatives {
    double LX = 0.0, LY = 0.0;
};

// normal components <(-f'(x), 1), Z(x, f(x))> of both fields on the branch y = f(x)
LieDerivatives lie_derivatives(double x, const SystemParams& params, double eps);
BoundaryType classify_boundary(double x, const SystemParams& params, double eps, double tol = 1e-12);

struct Trajectory {
    std::vector<std::array<double, 3>> points;  // (t, x, y), only with store_points
    std::vector<TrajectoryEvent> events;
    double t_final = 0.0;
    double x = 0.0, y = 0.0;
    Zone zone = Zone::X;
    std::string stop_reason;  // "time", "section", "escaped", "pseudo-equilibrium", "event-limit"
};

// Filippov integration from (x0, y0) for t in [0, t_end].
Trajectory integrate(double x0, double y0, const SystemParams& params, double eps, double t_end,
                     const IntegratorOptions& opts = {});

enum class ReturnStatus { Returned, Escaped, NoReturn };

struct ReturnResult {
    ReturnStatus status = ReturnStatus::NoReturn;
    double v_next = 0.0;
    double period = 0.0;
    // first hit of the ray v = y - eps h(x) = 0, x > 0 (the theta = 0 ray of the standard form)
    double standard_radius = 0.0;
    double mean_radius = 0.0;
    int crossings = 0;
    int slides = 0;
    std::string detail;
};

ReturnResult poincare_return(double v, const SystemParams& params, double eps,
                             const IntegratorOptions& opts = return_map_options(), double t_max = 30.0);
// throws NumericalError("escaped") / ("no return")
double poincare_map(double v, const SystemParams& params, double eps,
                    const IntegratorOptions& opts = return_map_options());

struct Cycle {
    double v = 0.0;  // y-axis section coordinate
    double standard_radius = 0.0;
    double mean_radius = 0.0;
    double period = 0.0;
    double lambda = 1.0;  // return-map derivative
    double fd_step = 0.0;
    std::string stability;
};

struct SlidingSegment {
    double x_lo = 0.0, x_hi = 0.0;
    std::string stability;  // attracting | repelling
};

struct Prediction {
    double u = 0.0, radius = 0.0;
    bool matched = false;
    int cycle = -1;
    double rel_error = 0.0;
};

struct CycleReport {
    double eps = 0.0, mu = 0.0;
    std::vector<Cycle> cycles;
    std::vector<SlidingSegment> sliding;
    std::vector<Prediction> predicted;
    bool degenerate_center = false;
    std::vector<std::array<double, 2>> table;  // (v, Pi(v) - v); NaN where no return
    int failed_points = 0;
};

struct CycleOptions {
    int grid = 60;
    double bisect_tol = 1e-10;
    double fd_rel = 1e-5;
    double match_rel = 0.1;
    double degenerate_tol = 1e-14;
    int threads = 1;
    std::vector<double> predicted_u;  // Melnikov zeros u*
    IntegratorOptions integ = return_map_options();
};

CycleReport find_cycles(const SystemParams& params, double eps, double v_lo, double v_hi,
                        const CycleOptions& opts = {});

struct PseudoHopfRow {
    double mu = 0.0;
    bool has_sliding = false;
    SlidingSegment segment;
    double width = 0.0;
    bool h2 = false;  // LX * LY < 0 inside the segment
    bool cycle = false;
    std::vector<Cycle> cycles;
};

struct PseudoHopfOptions {
    int scan = 2001;
    int grid = 40;
    int threads = 1;
    IntegratorOptions integ = return_map_options();
};

std::vector<PseudoHopfRow> pseudo_hopf_sweep(const SystemParams& params, double eps, const std::vector<double>& mu_values,
                                             const PseudoHopfOptions& opts = {});

// true when the cycle shows up for every mu of one sign and for none of the other
bool one_sided(const std::vector<PseudoHopfRow>& rows);

}  // namespace plc
