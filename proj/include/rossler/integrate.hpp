#ifndef ROSSLER_INTEGRATE_HPP
#define ROSSLER_INTEGRATE_HPP

#include <optional>
#include <vector>

#include "rossler/flow.hpp"
#include "rossler/section.hpp"

namespace rossler {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = 0.1;
    double max_time = 1e4;      // per next_section_crossing call
    double event_tol = 1e-12;   // time-axis localization of events
};

enum class Termination {
    reached_end,
    blow_up,          // |state| > 1e8
    step_underflow,   // |h| < 1e-14
};

// Dense-output record of one adaptive run. States are evaluable anywhere in
// the covered time range through the per-step quartic interpolant.
class Trajectory {
public:
    std::vector<double> times;       // step endpoints, strictly monotone
    std::vector<State3> states;      // states at those times
    Termination termination = Termination::reached_end;

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    bool forward() const { return times.back() >= times.front(); }

    State3 at(double t) const;       // dense evaluation
    double arclength() const;

    // interpolation coefficients, one block of 5 per step
    std::vector<std::array<State3, 5>> dense;

private:
    std::size_t locate(double t) const;
};

// Adaptive Dormand-Prince 5(4). t1 < t0 integrates the inverse flow.
Trajectory integrate(const Params& p, const State3& s0, const IntegratorConfig& cfg,
                     double t0, double t1);

// Fixed-step RK5 using the same tableau (order studies).
State3 integrate_fixed_step(const Params& p, State3 s, double h, int n_steps);

enum class CrossKind {
    crossing,          // transverse hit of the open upper half-plane
    fixed_point_limit, // entered the 1e-6 ball of a fixed point
    blow_up,
    step_underflow,
    no_event,          // max_time exhausted
};

struct CrossingEvent {
    double t = 0.0;
    SectionPoint point;
    State3 state;
    int direction = 0;        // sign of d(x+ay)/dt at the event
    double ydot_rate = 0.0;   // d(x+ay)/dt there
    bool near_tangent = false;   // |ydot_rate| <= 1e-6 (1+|s|)
    bool near_boundary = false;  // |z - x/a| < 1e-9 at the event
};

struct CrossingResult {
    CrossKind kind = CrossKind::no_event;
    CrossingEvent event;      // valid when kind == crossing
    double t_end = 0.0;
    State3 last_state;
};

// Next transverse intersection with the open half-plane H_p after t=0,
// strictly in the future of s0 even when s0 lies on the section.
// direction_filter: -1 down-crossings, +1 up, 0 both. On H_p every crossing
// is a down-crossing, so -1 is the first-return filter.
CrossingResult next_section_crossing(const Params& p, const State3& s0,
                                     const IntegratorConfig& cfg,
                                     int direction_filter = -1,
                                     bool backward = false);

double transversality_floor(const State3& s);

// All upper-half-plane crossings found along a stored trajectory, in
// traversal order, refined on the dense interpolant.
std::vector<CrossingEvent> section_crossings(const Params& p, const Trajectory& traj,
                                             double event_tol = 1e-12);

}  // namespace rossler

#endif
