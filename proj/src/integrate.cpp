#include "rossler/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace rossler {

namespace {

constexpr double kBlowUpNorm = 1e8;
constexpr double kMinStep = 1e-14;
constexpr double kFixedPointBall = 1e-6;

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// error = y5 - y4
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output weights (Hairer's contd5)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

struct StepResult {
    State3 y_new;
    State3 k_last;               // FSAL stage
    double err = 0.0;            // scaled error norm
    std::array<State3, 5> dense; // rcont1..rcont5
};

StepResult dp5_step(const Params& p, const State3& y, const State3& k1, double h,
                    double rel_tol, double abs_tol) {
    State3 k2 = vector_field(p, y + h * (a21 * k1));
    State3 k3 = vector_field(p, y + h * (a31 * k1 + a32 * k2));
    State3 k4 = vector_field(p, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    State3 k5 = vector_field(p, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    State3 k6 = vector_field(p, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    State3 y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State3 k7 = vector_field(p, y_new);

    State3 errv = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    auto comp = [&](double e, double y0, double y1) {
        double sc = abs_tol + rel_tol * std::max(std::abs(y0), std::abs(y1));
        return (e / sc) * (e / sc);
    };
    double err = std::sqrt((comp(errv.x, y.x, y_new.x) + comp(errv.y, y.y, y_new.y) +
                            comp(errv.z, y.z, y_new.z)) / 3.0);

    StepResult r;
    r.y_new = y_new;
    r.k_last = k7;
    r.err = err;
    State3 dy = y_new - y;
    State3 bspl = h * k1 - dy;
    r.dense[0] = y;
    r.dense[1] = dy;
    r.dense[2] = bspl;
    r.dense[3] = dy - h * k7 - bspl;
    r.dense[4] = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
    return r;
}

State3 dense_eval(const std::array<State3, 5>& rc, double theta) {
    double th1 = 1.0 - theta;
    return rc[0] + theta * (rc[1] + th1 * (rc[2] + theta * (rc[3] + th1 * rc[4])));
}

double initial_step(const Params& p, const State3& y, double dir, double rel_tol,
                    double abs_tol, double max_step) {
    State3 f = vector_field(p, y);
    double d0 = norm(y) * rel_tol + abs_tol;
    double d1n = norm(f);
    double h = (d1n > 1e-10) ? 0.01 * d0 / (d1n * rel_tol + 1e-300) : 1e-6;
    h = std::clamp(h, 1e-8, max_step);
    return dir * h;
}

}  // namespace

std::size_t Trajectory::locate(double t) const {
    bool fwd = forward();
    auto cmp = [fwd](double a, double b) { return fwd ? a < b : a > b; };
    std::size_t lo = 0, hi = times.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (cmp(t, times[mid])) hi = mid; else lo = mid;
    }
    return lo;
}

State3 Trajectory::at(double t) const {
    if (times.size() < 2) return states.front();
    std::size_t i = locate(t);
    double h = times[i + 1] - times[i];
    double theta = (t - times[i]) / h;
    return dense_eval(dense[i], theta);
}

double Trajectory::arclength() const {
    double s = 0.0;
    for (std::size_t i = 1; i < states.size(); ++i) s += norm(states[i] - states[i - 1]);
    return s;
}

Trajectory integrate(const Params& p, const State3& s0, const IntegratorConfig& cfg,
                     double t0, double t1) {
    Trajectory traj;
    traj.times.push_back(t0);
    traj.states.push_back(s0);
    if (t1 == t0) return traj;

    double dir = (t1 > t0) ? 1.0 : -1.0;
    double t = t0;
    State3 y = s0;
    State3 k1 = vector_field(p, y);
    double h = initial_step(p, y, dir, cfg.rel_tol, cfg.abs_tol, cfg.max_step);

    while (dir * (t1 - t) > 0.0) {
        if (std::abs(h) > cfg.max_step) h = dir * cfg.max_step;
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        if (std::abs(h) < kMinStep) {
            traj.termination = Termination::step_underflow;
            return traj;
        }
        StepResult st = dp5_step(p, y, k1, h, cfg.rel_tol, cfg.abs_tol);
        if (st.err <= 1.0) {
            t += h;
            y = st.y_new;
            k1 = st.k_last;
            traj.times.push_back(t);
            traj.states.push_back(y);
            traj.dense.push_back(st.dense);
            if (norm(y) > kBlowUpNorm) {
                traj.termination = Termination::blow_up;
                return traj;
            }
        }
        double fac = 0.9 * std::pow(std::max(st.err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
    traj.termination = Termination::reached_end;
    return traj;
}

State3 integrate_fixed_step(const Params& p, State3 s, double h, int n_steps) {
    for (int i = 0; i < n_steps; ++i) {
        State3 k1 = vector_field(p, s);
        StepResult st = dp5_step(p, s, k1, h, 1.0, 1.0);
        s = st.y_new;
    }
    return s;
}

double transversality_floor(const State3& s) { return 1e-6 * (1.0 + norm(s)); }

namespace {

// g(t) = x + a y on the dense interpolant of one step
double g_of(const Params& p, const std::array<State3, 5>& rc, double theta) {
    State3 s = dense_eval(rc, theta);
    return s.x + p.a * s.y;
}

// Brent root localization of g on [lo, hi] (theta within a step).
double brent_theta(const Params& p, const std::array<State3, 5>& rc, double lo,
                   double hi, double glo, double ghi, double theta_tol) {
    double a = lo, b = hi, fa = glo, fb = ghi;
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * theta_tol;
        double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, pp, q;
            if (a == c) {
                pp = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                pp = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pp > 0.0) q = -q;
            pp = std::abs(pp);
            if (2.0 * pp < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = pp / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = g_of(p, rc, b);
        if ((fb > 0) == (fc > 0)) { c = a; fc = fa; d = b - a; e = d; }
    }
    return b;
}

// All roots of g on one dense step, theta in (lo, 1]. Sign scanning over 8
// probes catches transversal crossings; probe intervals whose endpoints share
// a sign but dip close to zero are checked for a crossing pair through the
// interior extremum, which keeps near-tangent crossing pairs (grazes of the
// section boundary) resolved far below the probe spacing.
std::vector<double> step_g_roots(const Params& p, const std::array<State3, 5>& rc,
                                 double g_scale, double theta_tol, double lo = 0.0) {
    constexpr int kProbe = 8;
    std::vector<double> roots;
    double guard = 0.25 * g_scale;
    double th_prev = lo;
    double gp = g_of(p, rc, lo);
    for (int j = 1; j <= kProbe; ++j) {
        double th = lo + (1.0 - lo) * j / kProbe;
        double gj = g_of(p, rc, th);
        if ((gp > 0.0) != (gj > 0.0)) {
            roots.push_back(brent_theta(p, rc, th_prev, th, gp, gj, theta_tol));
        } else if (std::min(std::abs(gp), std::abs(gj)) < guard) {
            // same-sign interval grazing zero: locate the interior extremum
            double sgn = (gp > 0.0) ? 1.0 : -1.0;
            double a = th_prev, b = th;
            double x1 = a + 0.381966 * (b - a), x2 = b - 0.381966 * (b - a);
            double f1 = sgn * g_of(p, rc, x1), f2 = sgn * g_of(p, rc, x2);
            for (int it = 0; it < 60 && (b - a) > 1e-14; ++it) {
                if (f1 < f2) {
                    b = x2; x2 = x1; f2 = f1;
                    x1 = a + 0.381966 * (b - a);
                    f1 = sgn * g_of(p, rc, x1);
                } else {
                    a = x1; x1 = x2; f1 = f2;
                    x2 = b - 0.381966 * (b - a);
                    f2 = sgn * g_of(p, rc, x2);
                }
            }
            double thm = 0.5 * (a + b);
            double gm = g_of(p, rc, thm);
            if ((gm > 0.0) != (gp > 0.0) && thm > th_prev && thm < th) {
                roots.push_back(brent_theta(p, rc, th_prev, thm, gp, gm, theta_tol));
                roots.push_back(brent_theta(p, rc, thm, th, gm, gj, theta_tol));
            }
        }
        th_prev = th;
        gp = gj;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

CrossingEvent make_event(const Params& p, const State3& se, double te) {
    State3 f = vector_field(p, se);
    CrossingEvent ev;
    ev.t = te;
    ev.state = se;
    ev.point = SectionPoint{se.x, se.z};
    ev.ydot_rate = f.x + p.a * f.y;
    ev.direction = (ev.ydot_rate > 0.0) ? 1 : -1;
    ev.near_tangent = std::abs(ev.ydot_rate) <= transversality_floor(se);
    ev.near_boundary = std::abs(se.z - se.x / p.a) < 1e-9;
    return ev;
}

}  // namespace

std::vector<CrossingEvent> section_crossings(const Params& p, const Trajectory& traj,
                                             double event_tol) {
    std::vector<CrossingEvent> out;
    for (std::size_t i = 0; i < traj.dense.size(); ++i) {
        double t0 = traj.times[i], t1 = traj.times[i + 1];
        double h = t1 - t0;
        double theta_tol = event_tol / std::max(std::abs(h), 1e-300);
        double g_scale = 1.0 + norm(traj.states[i]);
        for (double thr : step_g_roots(p, traj.dense[i], g_scale, theta_tol)) {
            State3 se = dense_eval(traj.dense[i], thr);
            double gap = se.z - se.x / p.a;
            if (gap > 0.0 || std::abs(gap) < 1e-9)
                out.push_back(make_event(p, se, t0 + thr * h));
        }
    }
    return out;
}

CrossingResult next_section_crossing(const Params& p, const State3& s0,
                                     const IntegratorConfig& cfg, int direction_filter,
                                     bool backward) {
    CrossingResult res;
    double dir = backward ? -1.0 : 1.0;
    double t = 0.0;
    State3 y = s0;
    State3 k1 = vector_field(p, y);
    double h = initial_step(p, y, dir, cfg.rel_tol, cfg.abs_tol, cfg.max_step);
    FixedPoints fp;
    bool have_fp = true;
    try {
        fp = fixed_points(p);
    } catch (const DegenerateFixedPoints&) {
        have_fp = false;
    }

    // leave the section before arming event detection when starting on it
    double g_prev = y.x + p.a * y.y;
    bool armed = std::abs(g_prev) > 1e-9 * (1.0 + norm(y));

    while (std::abs(t) < cfg.max_time) {
        if (std::abs(h) > cfg.max_step) h = dir * cfg.max_step;
        if (std::abs(h) < kMinStep) {
            res.kind = CrossKind::step_underflow;
            res.t_end = t;
            res.last_state = y;
            return res;
        }
        StepResult st = dp5_step(p, y, k1, h, cfg.rel_tol, cfg.abs_tol);
        if (st.err <= 1.0) {
            double t_new = t + h;
            double g_scale = 1.0 + norm(y);
            // arm once the trajectory has left the section plane
            double arm_lo = 0.0;
            if (!armed) {
                constexpr int kArm = 16;
                for (int j = 0; j <= kArm; ++j) {
                    double th = static_cast<double>(j) / kArm;
                    if (std::abs(g_of(p, st.dense, th)) > 1e-9 * g_scale) {
                        armed = true;
                        arm_lo = th;
                        break;
                    }
                }
            }
            if (armed) {
                double theta_tol = cfg.event_tol / std::max(std::abs(h), 1e-300);
                for (double thr : step_g_roots(p, st.dense, g_scale, theta_tol, arm_lo)) {
                    State3 se = dense_eval(st.dense, thr);
                    double te = t + thr * h;
                    double gap = se.z - se.x / p.a;
                    bool upper = gap > 0.0;
                    bool nearb = std::abs(gap) < 1e-9;
                    if (!upper && !nearb) continue;
                    CrossingEvent ev = make_event(p, se, te);
                    if (direction_filter != 0 && ev.direction != direction_filter) continue;
                    res.kind = CrossKind::crossing;
                    res.event = ev;
                    res.t_end = te;
                    res.last_state = se;
                    return res;
                }
            }
            t = t_new;
            y = st.y_new;
            k1 = st.k_last;
            if (norm(y) > kBlowUpNorm) {
                res.kind = CrossKind::blow_up;
                res.t_end = t;
                res.last_state = y;
                return res;
            }
            if (have_fp) {
                if (norm(y - fp.p_in) < kFixedPointBall || norm(y - fp.p_out) < kFixedPointBall) {
                    res.kind = CrossKind::fixed_point_limit;
                    res.t_end = t;
                    res.last_state = y;
                    return res;
                }
            }
        }
        double fac = 0.9 * std::pow(std::max(st.err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }
    res.kind = CrossKind::no_event;
    res.t_end = t;
    res.last_state = y;
    return res;
}

}  // namespace rossler
