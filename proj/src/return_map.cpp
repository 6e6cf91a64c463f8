#include "rossler/return_map.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace rossler {

ReturnResult first_return(const Params& p, const SectionPoint& sp,
                          const IntegratorConfig& cfg) {
    ReturnResult rr;
    State3 s0 = embed(p, sp);
    CrossingResult cr = next_section_crossing(p, s0, cfg, -1);
    switch (cr.kind) {
        case CrossKind::crossing:
            rr.event = cr.event;
            rr.flight_time = cr.event.t;
            rr.point = cr.event.point;
            rr.outcome = (cr.event.near_tangent || cr.event.near_boundary)
                             ? ReturnOutcome::near_tangent
                             : ReturnOutcome::returned;
            break;
        case CrossKind::fixed_point_limit:
            rr.outcome = ReturnOutcome::fixed_point_limit;
            break;
        case CrossKind::blow_up:
            rr.outcome = ReturnOutcome::blow_up;
            break;
        default:
            rr.outcome = ReturnOutcome::no_event;
            break;
    }
    return rr;
}

std::vector<ReturnResult> iterate(const Params& p, const SectionPoint& sp, int k,
                                  const IntegratorConfig& cfg) {
    std::vector<ReturnResult> out;
    SectionPoint cur = sp;
    for (int i = 0; i < k; ++i) {
        ReturnResult rr = first_return(p, cur, cfg);
        out.push_back(rr);
        if (rr.outcome != ReturnOutcome::returned) break;
        cur = rr.point;
    }
    return out;
}

namespace {

struct MapSample {
    bool ok = false;
    SectionPoint img;
    double flight = 0.0;
};

MapSample eval_map(const Params& p, const SectionPoint& sp, const IntegratorConfig& cfg,
                   int iterates) {
    MapSample out;
    SectionPoint cur = sp;
    for (int i = 0; i < iterates; ++i) {
        ReturnResult rr = first_return(p, cur, cfg);
        if (rr.outcome != ReturnOutcome::returned &&
            rr.outcome != ReturnOutcome::near_tangent)
            return {};
        cur = rr.point;
        out.flight += rr.flight_time;
    }
    out.ok = true;
    out.img = cur;
    return out;
}

double img_dist(const MapSample& a, const MapSample& b) {
    if (!a.ok || !b.ok) return std::numeric_limits<double>::infinity();
    return chart_dist(a.img, b.img);
}

// the first-return flight time jumps by a whole loop segment across a branch
// switch, which makes it the sharpest discontinuity signal
double flight_jump(const MapSample& a, const MapSample& b) {
    if (!a.ok || !b.ok) return std::numeric_limits<double>::infinity();
    return std::abs(a.flight - b.flight);
}

double dist_to_polyline(const std::vector<SectionPoint>& poly, const SectionPoint& q) {
    double best = std::numeric_limits<double>::infinity();
    if (poly.empty()) return best;
    if (poly.size() == 1) return chart_dist(poly[0], q);
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        double ax = poly[i].u, ay = poly[i].v;
        double bx = poly[i + 1].u, by = poly[i + 1].v;
        double dx = bx - ax, dy = by - ay;
        double len2 = dx * dx + dy * dy;
        double t = (len2 > 0.0) ? ((q.u - ax) * dx + (q.v - ay) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        best = std::min(best, std::hypot(q.u - (ax + t * dx), q.v - (ay + t * dy)));
    }
    return best;
}

// chain accepted points into polylines by mutual nearest neighbours;
// gaps above the cap start a new component
std::vector<std::vector<SectionPoint>> chain_points(std::vector<SectionPoint> pts,
                                                    double gap_cap) {
    std::vector<std::vector<SectionPoint>> comps;
    if (pts.empty()) return comps;
    std::vector<char> used(pts.size(), 0);
    for (std::size_t seed = 0; seed < pts.size(); ++seed) {
        if (used[seed]) continue;
        std::vector<SectionPoint> comp{pts[seed]};
        used[seed] = 1;
        // grow in both directions greedily
        for (int dir = 0; dir < 2; ++dir) {
            while (true) {
                const SectionPoint& tip = (dir == 0) ? comp.back() : comp.front();
                double best = gap_cap;
                int bi = -1;
                for (std::size_t j = 0; j < pts.size(); ++j) {
                    if (used[j]) continue;
                    double d = chart_dist(tip, pts[j]);
                    if (d < best) { best = d; bi = static_cast<int>(j); }
                }
                if (bi < 0) break;
                used[bi] = 1;
                if (dir == 0) comp.push_back(pts[bi]);
                else comp.insert(comp.begin(), pts[bi]);
            }
        }
        comps.push_back(std::move(comp));
    }
    std::sort(comps.begin(), comps.end(),
              [](const auto& a, const auto& b) { return a.size() > b.size(); });
    return comps;
}

struct AcceptedPoint {
    SectionPoint where;
    SectionPoint image;
};

struct LineScanResult {
    std::vector<AcceptedPoint> accepted;
};

// scan one grid line (a row when `along_u`, else a column) for jumps of the
// composed map; every candidate bracket is verified by bisection against the
// defining criterion (image on the section boundary, or image on the target
// polyline for the rho scan)
LineScanResult scan_line(const Params& p, const ScanGrid& grid, int line, bool along_u,
                         const IntegratorConfig& cfg, int iterates,
                         const std::vector<SectionPoint>* target_polyline,
                         double accept_tol) {
    LineScanResult out;
    int n = along_u ? grid.nu : grid.nv;
    double fixed = along_u
                       ? grid.v0 + (grid.v1 - grid.v0) * line / std::max(grid.nv - 1, 1)
                       : grid.u0 + (grid.u1 - grid.u0) * line / std::max(grid.nu - 1, 1);
    double lo = along_u ? grid.u0 : grid.v0;
    double hi = along_u ? grid.u1 : grid.v1;
    double dq = (hi - lo) / std::max(n - 1, 1);
    auto at = [&](double q) {
        return along_u ? SectionPoint{q, fixed} : SectionPoint{fixed, q};
    };
    std::vector<MapSample> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = eval_map(p, at(lo + dq * i), cfg, iterates);

    std::vector<double> gaps;
    for (int i = 0; i + 1 < n; ++i) {
        double d = img_dist(samples[i], samples[i + 1]);
        if (std::isfinite(d)) gaps.push_back(d);
    }
    if (gaps.empty()) return out;
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    double median = gaps[gaps.size() / 2];
    double jump_threshold = std::max(4.0 * median, 1e-6);

    for (int i = 0; i + 1 < n; ++i) {
        // candidates are cheap: a bracket without a genuine branch switch
        // fails the bisection certificate below and is dropped
        double d = img_dist(samples[i], samples[i + 1]);
        bool jump = d > jump_threshold || (samples[i].ok != samples[i + 1].ok) ||
                    flight_jump(samples[i], samples[i + 1]) > 0.35;
        if (!jump && samples[i].ok) {
            double b0 = std::abs(boundary_gap(p, samples[i].img));
            double b1 = std::abs(boundary_gap(p, samples[i + 1].img));
            jump = std::min(b0, b1) < 0.5;  // image grazing the boundary
        }
        if (!jump) continue;
        double qa = lo + dq * i, qb = qa + dq;
        MapSample ma = samples[i], mb = samples[i + 1];
        AcceptedPoint found;
        bool accepted = false;
        for (int it = 0; it < 80 && !accepted; ++it) {
            double qm = 0.5 * (qa + qb);
            MapSample mm = eval_map(p, at(qm), cfg, iterates);
            double crit = std::numeric_limits<double>::infinity();
            if (mm.ok)
                crit = target_polyline ? dist_to_polyline(*target_polyline, mm.img)
                                       : std::abs(boundary_gap(p, mm.img));
            if (crit < accept_tol) {
                // delta lives in the closed section; the same preimage arc
                // continues below the boundary line and is discarded there
                if (!in_closed_section(p, at(qm), 1e-9)) break;
                found = {at(qm), mm.img};
                accepted = true;
                break;
            }
            // flight time clusters tightly within a branch and separates the
            // two branches by a whole loop, so it picks the jump side
            bool keep_left;
            if (mm.ok && ma.ok && mb.ok)
                keep_left = std::abs(mm.flight - ma.flight) > std::abs(mm.flight - mb.flight);
            else if (!mm.ok)
                keep_left = ma.ok;
            else
                keep_left = !ma.ok;
            if (keep_left) {
                qb = qm;
                mb = mm;
            } else {
                qa = qm;
                ma = mm;
            }
            if (qb - qa < 1e-13 * (1.0 + std::abs(qa))) break;
        }
        if (accepted) out.accepted.push_back(found);
    }
    return out;
}

}  // namespace

DiscontinuityStructure find_discontinuities(const Params& p, const ScanGrid& grid,
                                            const IntegratorConfig& cfg,
                                            unsigned n_workers) {
    DiscontinuityStructure ds;
    if (grid.nu < 2 || grid.nv < 2) {
        ds.note = "grid too small";
        return ds;
    }
    if (n_workers == 0) n_workers = std::max(1u, std::thread::hardware_concurrency());
    double du = (grid.u1 - grid.u0) / (grid.nu - 1);
    double dv = (grid.v1 - grid.v0) / (grid.nv - 1);
    double accept_tol = 1e-6;

    auto run_scan = [&](int iterates, const std::vector<SectionPoint>* target,
                        double tol) {
        int n_lines = grid.nv + grid.nu;  // rows first, then columns
        std::vector<LineScanResult> lines(n_lines);
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        auto worker = [&]() {
            while (true) {
                int r = next.fetch_add(1);
                if (r >= n_lines) break;
                bool along_u = r < grid.nv;
                lines[r] = scan_line(p, grid, along_u ? r : r - grid.nv, along_u, cfg,
                                     iterates, target, tol);
            }
        };
        unsigned n = std::min<unsigned>(n_workers, n_lines);
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        std::vector<AcceptedPoint> pts;
        for (const auto& r : lines)
            pts.insert(pts.end(), r.accepted.begin(), r.accepted.end());
        return pts;
    };

    std::vector<AcceptedPoint> found_pts = run_scan(1, nullptr, accept_tol);
    ds.resolution = std::max(du, dv);
    if (found_pts.empty()) {
        ds.note = "NoDiscontinuityFound";
        return ds;
    }
    // The preimage of the section boundary splits at P0: the delta arc's
    // images slide along the P_In..P_Out boundary side (image v > 0) and
    // approach P_In, the continuation maps to the opposite side. Chain the
    // two families separately so delta terminates at P0.
    std::vector<SectionPoint> delta_family, other_family;
    std::vector<double> image_height;
    for (const AcceptedPoint& ap : found_pts) {
        if (ap.image.v > 0.0) {
            delta_family.push_back(ap.where);
            image_height.push_back(ap.image.v);
        } else {
            other_family.push_back(ap.where);
        }
    }
    double gap_cap = 5.0 * std::max(du, dv);
    ds.components = chain_points(delta_family, gap_cap);
    for (auto& comp : chain_points(other_family, gap_cap))
        ds.components.push_back(std::move(comp));
    ds.found = true;

    if (!delta_family.empty() && !ds.components.empty() && ds.components[0].size() >= 2) {
        ds.delta_index = 0;
        ds.delta_polyline = ds.components[0];
        // P0 is where the image reaches P_In (minimal image height along the
        // arc); delta0 is where delta itself meets the section boundary
        std::size_t i_p0 = 0, i_d0 = 0;
        double best_h = std::numeric_limits<double>::infinity();
        double best_g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < delta_family.size(); ++i) {
            if (image_height[i] < best_h) { best_h = image_height[i]; i_p0 = i; }
            double g = std::abs(boundary_gap(p, delta_family[i]));
            if (g < best_g) { best_g = g; i_d0 = i; }
        }
        ds.p0_estimate = delta_family[i_p0];
        ds.delta0 = delta_family[i_d0];
        if (best_g > 3.0 * ds.resolution)
            ds.note = "delta0 end clipped by the scan window";
    } else {
        ds.note = "no delta-side component; largest kept";
        auto comps_all = chain_points(delta_family.empty() ? other_family : delta_family,
                                      gap_cap);
        if (!comps_all.empty()) {
            ds.delta_polyline = comps_all.front();
            ds.delta0 = ds.delta_polyline.back();
            ds.p0_estimate = ds.delta_polyline.front();
        }
    }

    // rho surrogate: points mapping onto delta, found by the same scanner on
    // the twice-composed map. The acceptance tolerance tracks the delta
    // polyline's interpolation fidelity, not the scan grid.
    if (ds.delta_polyline.size() >= 2) {
        double spacing = 0.0;
        for (std::size_t i = 0; i + 1 < ds.delta_polyline.size(); ++i)
            spacing += chart_dist(ds.delta_polyline[i], ds.delta_polyline[i + 1]);
        spacing /= static_cast<double>(ds.delta_polyline.size() - 1);
        double rho_tol = std::max(1e-3, 0.5 * spacing);
        ds.resolution = rho_tol;
        std::vector<AcceptedPoint> rho_pts = run_scan(2, &ds.delta_polyline, rho_tol);
        std::vector<SectionPoint> rp;
        for (const AcceptedPoint& ap : rho_pts) rp.push_back(ap.where);
        if (!rp.empty()) {
            auto comps = chain_points(rp, gap_cap);
            // the partition needs the component separating the section trace:
            // take the one with trace points on both sides, largest minority
            std::vector<SectionPoint> trace;
            {
                Trajectory settle = integrate(p, {1, 1, 0}, cfg, 0.0, 80.0);
                CrossingResult cr = next_section_crossing(p, settle.states.back(), cfg, -1);
                if (cr.kind == CrossKind::crossing) {
                    trace.push_back(cr.event.point);
                    for (int i = 0; i < 150; ++i) {
                        ReturnResult rr = first_return(p, trace.back(), cfg);
                        if (rr.outcome != ReturnOutcome::returned) break;
                        trace.push_back(rr.point);
                    }
                }
            }
            std::size_t best_minority = 0, best_idx = 0;
            for (std::size_t ci = 0; ci < comps.size(); ++ci) {
                if (comps[ci].size() < 3) continue;
                Partition2 trial;
                trial.rho_polyline = comps[ci];
                trial.resolution = rho_tol;
                trial.side1 = 1;
                std::size_t n1 = 0, n2 = 0;
                for (const SectionPoint& q : trace) {
                    int c = classify(p, trial, q);
                    if (c == 1) ++n1;
                    else if (c == 2) ++n2;
                }
                std::size_t minority = std::min(n1, n2);
                if (minority > best_minority) {
                    best_minority = minority;
                    best_idx = ci;
                }
            }
            ds.rho_polyline = comps[best_idx];
        }
    }
    return ds;
}

Partition2 make_partition(const Params& p, const DiscontinuityStructure& ds) {
    Partition2 part;
    part.rho_polyline = ds.rho_polyline.empty() ? ds.delta_polyline : ds.rho_polyline;
    part.resolution = ds.resolution;
    part.ref2 = ds.p0_estimate;
    // tag-1 reference: next to the P_In corner of the boundary, nudged inside
    part.ref1 = SectionPoint{0.0, 0.05 * (1.0 + std::abs(ds.p0_estimate.v))};
    (void)p;

    auto side_of = [&](const SectionPoint& q) {
        // sign of the cross product against the nearest polyline segment
        const auto& poly = part.rho_polyline;
        double best = std::numeric_limits<double>::infinity();
        int bi = 0;
        for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
            SectionPoint m{0.5 * (poly[i].u + poly[i + 1].u),
                           0.5 * (poly[i].v + poly[i + 1].v)};
            double d = chart_dist(m, q);
            if (d < best) { best = d; bi = static_cast<int>(i); }
        }
        double dx = poly[bi + 1].u - poly[bi].u, dy = poly[bi + 1].v - poly[bi].v;
        double cx = q.u - poly[bi].u, cy = q.v - poly[bi].v;
        double cr = dx * cy - dy * cx;
        return (cr > 0.0) ? 1 : -1;
    };
    part.side1 = (part.rho_polyline.size() >= 2) ? side_of(part.ref1) : 1;
    return part;
}

int classify(const Params& p, const Partition2& part, const SectionPoint& sp) {
    if (std::abs(boundary_gap(p, sp)) < 1e-9) return 0;
    const auto& poly = part.rho_polyline;
    if (poly.size() < 2) return 0;
    if (dist_to_polyline(poly, sp) < part.resolution) return 0;
    double best = std::numeric_limits<double>::infinity();
    int bi = 0;
    for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
        SectionPoint m{0.5 * (poly[i].u + poly[i + 1].u), 0.5 * (poly[i].v + poly[i + 1].v)};
        double d = chart_dist(m, sp);
        if (d < best) { best = d; bi = static_cast<int>(i); }
    }
    double dx = poly[bi + 1].u - poly[bi].u, dy = poly[bi + 1].v - poly[bi].v;
    double cx = sp.u - poly[bi].u, cy = sp.v - poly[bi].v;
    double cr = dx * cy - dy * cx;
    int side = (cr > 0.0) ? 1 : -1;
    return (side == part.side1) ? 1 : 2;
}

SymbolicItinerary itinerary(const Params& p, const SectionPoint& sp, int length,
                            const IntegratorConfig& cfg, const Partition2& part) {
    SymbolicItinerary it;
    it.start = sp;
    SectionPoint cur = sp;
    for (int i = 0; i < length; ++i) {
        int sym = classify(p, part, cur);
        if (sym == 0) {
            it.stop_reason = ReturnOutcome::near_tangent;
            break;
        }
        it.word.push_back(sym);
        it.valid_length = static_cast<int>(it.word.size());
        if (i + 1 == length) break;
        ReturnResult rr = first_return(p, cur, cfg);
        if (rr.outcome != ReturnOutcome::returned) {
            it.stop_reason = rr.outcome;
            break;
        }
        cur = rr.point;
    }
    return it;
}

}  // namespace rossler
