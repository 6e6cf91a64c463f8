#include "rossler/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rossler {

namespace {

bool map_k(const Params& p, const SectionPoint& sp, int k, const IntegratorConfig& cfg,
           SectionPoint& out) {
    SectionPoint cur = sp;
    for (int i = 0; i < k; ++i) {
        ReturnResult rr = first_return(p, cur, cfg);
        if (rr.outcome != ReturnOutcome::returned) return false;
        cur = rr.point;
    }
    out = cur;
    return true;
}

constexpr double kFdStep = 1e-6;

}  // namespace

bool map_jacobian(const Params& p, const SectionPoint& sp, int k,
                  const IntegratorConfig& cfg, double J[2][2]) {
    SectionPoint pu{sp.u + kFdStep, sp.v}, mu{sp.u - kFdStep, sp.v};
    SectionPoint pv{sp.u, sp.v + kFdStep}, mv{sp.u, sp.v - kFdStep};
    SectionPoint fu, gu, fv, gv;
    if (!map_k(p, pu, k, cfg, fu) || !map_k(p, mu, k, cfg, gu) ||
        !map_k(p, pv, k, cfg, fv) || !map_k(p, mv, k, cfg, gv))
        return false;
    J[0][0] = (fu.u - gu.u) / (2 * kFdStep);
    J[1][0] = (fu.v - gu.v) / (2 * kFdStep);
    J[0][1] = (fv.u - gv.u) / (2 * kFdStep);
    J[1][1] = (fv.v - gv.v) / (2 * kFdStep);
    return true;
}

namespace {

struct NewtonResult {
    bool converged = false;
    SectionPoint x;
    double residual = 0.0;
};

NewtonResult newton_solve(const Params& p, SectionPoint x0, int k,
                          const IntegratorConfig& cfg) {
    NewtonResult nr;
    SectionPoint x = x0;
    double res_prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 40; ++it) {
        SectionPoint fx;
        if (!map_k(p, x, k, cfg, fx)) return nr;
        double gx = fx.u - x.u, gy = fx.v - x.v;
        double res = std::hypot(gx, gy);
        if (res <= 1e-9) {
            nr.converged = true;
            nr.x = x;
            nr.residual = res;
            return nr;
        }
        if (res > 4.0 * res_prev + 1.0) return nr;  // diverging
        res_prev = std::min(res, res_prev);
        double J[2][2];
        if (!map_jacobian(p, x, k, cfg, J)) return nr;
        double a = J[0][0] - 1.0, b = J[0][1], c = J[1][0], d = J[1][1] - 1.0;
        double det = a * d - b * c;
        if (std::abs(det) < 1e-14) return nr;
        double du = (d * gx - b * gy) / det;
        double dv = (-c * gx + a * gy) / det;
        double damp = 1.0;
        double step = std::hypot(du, dv);
        if (step > 0.5) damp = 0.5 / step;  // keep steps inside the window
        x = SectionPoint{x.u - damp * du, x.v - damp * dv};
        if (!in_closed_section(p, x, 1e-9)) return nr;
    }
    return nr;
}

std::vector<State3> orbit_curve(const Params& p, const std::vector<SectionPoint>& pts,
                                const IntegratorConfig& cfg) {
    std::vector<State3> curve;
    for (const SectionPoint& sp : pts) {
        State3 s0 = embed(p, sp);
        CrossingResult cr = next_section_crossing(p, s0, cfg, -1);
        if (cr.kind != CrossKind::crossing) break;
        Trajectory seg = integrate(p, s0, cfg, 0.0, cr.event.t);
        int n = std::max<int>(64, static_cast<int>(cr.event.t / 0.02));
        for (int i = 0; i < n; ++i)
            curve.push_back(seg.at(cr.event.t * i / n));
    }
    if (!curve.empty()) curve.push_back(curve.front());
    return curve;
}

}  // namespace

std::vector<PeriodicOrbit> find_periodic(const Params& p, int k,
                                         const std::vector<SectionPoint>& seeds,
                                         const IntegratorConfig& cfg) {
    std::vector<PeriodicOrbit> out;
    for (const SectionPoint& seed : seeds) {
        NewtonResult nr = newton_solve(p, seed, k, cfg);
        if (!nr.converged) continue;
        // orbit points
        std::vector<SectionPoint> pts{nr.x};
        bool ok = true;
        SectionPoint cur = nr.x;
        for (int i = 1; i < k; ++i) {
            ReturnResult rr = first_return(p, cur, cfg);
            if (rr.outcome != ReturnOutcome::returned) { ok = false; break; }
            cur = rr.point;
            pts.push_back(cur);
        }
        if (!ok) continue;
        // minimality: no divisor d < k closes the orbit to 1e-4
        bool minimal = true;
        for (int d = 1; d < k; ++d) {
            if (k % d != 0) continue;
            SectionPoint fd;
            if (map_k(p, pts[0], d, cfg, fd) && chart_dist(fd, pts[0]) < 1e-4) {
                minimal = false;
                break;
            }
        }
        if (!minimal) continue;
        // duplicate merge under cyclic shift
        bool dup = false;
        for (const PeriodicOrbit& o : out) {
            for (int shift = 0; shift < k && !dup; ++shift) {
                double dmax = 0.0;
                for (int i = 0; i < k; ++i)
                    dmax = std::max(dmax, chart_dist(pts[i], o.points[(i + shift) % k]));
                if (dmax < 1e-6) dup = true;
            }
            if (dup) break;
        }
        if (dup) continue;

        PeriodicOrbit orb;
        orb.params = p;
        orb.k = k;
        orb.points = pts;
        orb.residual = nr.residual;
        double J[2][2];
        orb.floquet_ratio =
            map_jacobian(p, pts[0], k, cfg, J) ? (J[0][0] * J[1][1] - J[0][1] * J[1][0]) : 0.0;
        orb.curve3d = orbit_curve(p, pts, cfg);
        out.push_back(std::move(orb));
    }
    return out;
}

std::vector<SectionPoint> orbit_seeds(const Params& p, int k, const IntegratorConfig& cfg,
                                      int n_returns) {
    std::vector<SectionPoint> seeds;
    // settle onto the attractor first
    State3 s{1.0, 1.0, 0.0};
    Trajectory settle = integrate(p, s, cfg, 0.0, 80.0);
    s = settle.states.back();
    CrossingResult cr = next_section_crossing(p, s, cfg, -1);
    if (cr.kind != CrossKind::crossing) return seeds;
    std::vector<SectionPoint> trace{cr.event.point};
    for (int i = 0; i < n_returns; ++i) {
        ReturnResult rr = first_return(p, trace.back(), cfg);
        if (rr.outcome != ReturnOutcome::returned) break;
        trace.push_back(rr.point);
    }
    if (static_cast<int>(trace.size()) <= k + 2) return seeds;

    // lag-k recurrence minima
    std::vector<std::pair<double, std::size_t>> rec;
    for (std::size_t i = 0; i + k < trace.size(); ++i)
        rec.emplace_back(chart_dist(trace[i], trace[i + k]), i);
    std::sort(rec.begin(), rec.end());
    for (std::size_t r = 0; r < std::min<std::size_t>(rec.size(), 8); ++r)
        seeds.push_back(trace[rec[r].second]);

    // diagonal crossings of the lag-k displacement along the u-sorted trace
    std::vector<std::size_t> order(trace.size() - k);
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return trace[a].u < trace[b].u; });
    for (std::size_t r = 0; r + 1 < order.size(); ++r) {
        std::size_t i = order[r], j = order[r + 1];
        double di = trace[i + k].u - trace[i].u;
        double dj = trace[j + k].u - trace[j].u;
        if ((di > 0) == (dj > 0)) continue;
        double lam = di / (di - dj);
        seeds.push_back(SectionPoint{trace[i].u + lam * (trace[j].u - trace[i].u),
                                     trace[i].v + lam * (trace[j].v - trace[i].v)});
    }
    return seeds;
}

IndexReport winding_on_loop(const Params& p, const SectionPoint& center, int k,
                            double loop_radius, int n_loop, const IntegratorConfig& cfg) {
    IndexReport rep;
    rep.center = center;
    rep.k = k;
    rep.loop_radius = loop_radius;
    double min_disp = std::numeric_limits<double>::infinity();
    while (n_loop <= 4096) {
        std::vector<double> ang(n_loop);
        min_disp = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_loop; ++i) {
            double th = 2.0 * M_PI * i / n_loop;
            SectionPoint x{center.u + loop_radius * std::cos(th),
                           center.v + loop_radius * std::sin(th)};
            SectionPoint cur = x;
            for (int j = 0; j < k; ++j) {
                ReturnResult rr = first_return(p, cur, cfg);
                if (rr.outcome != ReturnOutcome::returned) {
                    rep.error = "LoopHitsDiscontinuity: non-returned iterate on the loop";
                    rep.n_loop = n_loop;
                    return rep;
                }
                cur = rr.point;
            }
            double dx = cur.u - x.u, dy = cur.v - x.v;
            double disp = std::hypot(dx, dy);
            min_disp = std::min(min_disp, disp);
            if (disp == 0.0) {
                rep.error = "fixed point on the loop";
                rep.n_loop = n_loop;
                return rep;
            }
            ang[i] = std::atan2(dy, dx);
        }
        double total = 0.0;
        bool coarse = false;
        for (int i = 0; i < n_loop; ++i) {
            double dth = ang[(i + 1) % n_loop] - ang[i];
            while (dth > M_PI) dth -= 2.0 * M_PI;
            while (dth < -M_PI) dth += 2.0 * M_PI;
            if (std::abs(dth) > M_PI - 1e-3) { coarse = true; break; }
            total += dth;
        }
        if (!coarse) {
            rep.ok = true;
            rep.winding = static_cast<int>(std::lround(total / (2.0 * M_PI)));
            rep.n_loop = n_loop;
            rep.min_displacement = min_disp;
            return rep;
        }
        n_loop *= 2;
    }
    rep.error = "LoopTooCoarse: refinement cap reached";
    rep.n_loop = 4096;
    return rep;
}

IndexReport fixed_point_index(const Params& p, const PeriodicOrbit& orbit,
                              double loop_radius, int n_loop, const IntegratorConfig& cfg) {
    IndexReport rep = winding_on_loop(p, orbit.points[0], orbit.k, loop_radius, n_loop, cfg);
    if (rep.ok && rep.min_displacement <= 10.0 * std::max(orbit.residual, 1e-12)) {
        rep.ok = false;
        rep.error = "loop displacement below 10x residual scale";
    }
    return rep;
}

std::string attach_word(const Params& p, const PeriodicOrbit& orbit, const Partition2& part) {
    std::string w;
    for (const SectionPoint& sp : orbit.points) {
        int sym = classify(p, part, sp);
        if (sym == 0)
            throw UndecidedPoint("attach_word: orbit point in the undecided band");
        w.push_back(static_cast<char>('0' + sym));
    }
    // acceptance: the word's minimal cyclic period must be k
    int k = orbit.k;
    for (int d = 1; d < k; ++d) {
        if (k % d != 0) continue;
        bool per = true;
        for (int i = 0; i < k && per; ++i) per = (w[i % d] == w[i]);
        if (per)
            throw UndecidedPoint("attach_word: word period " + std::to_string(d) +
                                 " below orbit period");
    }
    return w;
}

}  // namespace rossler
