#ifndef ROSSLER_RETURN_MAP_HPP
#define ROSSLER_RETURN_MAP_HPP

#include <string>
#include <vector>

#include "rossler/integrate.hpp"

namespace rossler {

enum class ReturnOutcome { returned, fixed_point_limit, blow_up, near_tangent, no_event };

struct ReturnResult {
    ReturnOutcome outcome = ReturnOutcome::no_event;
    SectionPoint point;        // valid when returned
    double flight_time = 0.0;
    CrossingEvent event;
};

// First return of the half-plane map f_p at sp (in closed H_p). Crossings
// below the transversality floor or within 1e-9 of the boundary come back
// as near_tangent.
ReturnResult first_return(const Params& p, const SectionPoint& sp,
                          const IntegratorConfig& cfg);

// Up to k returns; stops early on any non-returned outcome.
std::vector<ReturnResult> iterate(const Params& p, const SectionPoint& sp, int k,
                                  const IntegratorConfig& cfg);

struct ScanGrid {
    double u0 = 0.0, u1 = 0.0;
    double v0 = 0.0, v1 = 0.0;
    int nu = 0, nv = 0;
};

// Discontinuity structure of f_p in a scan window: the arc delta of points
// mapping onto the section boundary (one endpoint interior, at P0), its
// boundary endpoint delta0, and the rho surrogate f^| -1(delta) computed by
// the same scanner on the twice-composed map.
struct DiscontinuityStructure {
    bool found = false;
    std::vector<std::vector<SectionPoint>> components;  // all chained polylines
    int delta_index = -1;                  // component with an interior endpoint
    std::vector<SectionPoint> delta_polyline;
    SectionPoint delta0;                   // boundary endpoint of delta
    SectionPoint p0_estimate;              // interior endpoint of delta
    std::vector<SectionPoint> rho_polyline;
    double resolution = 0.0;               // refined bracket width in the chart
    std::string note;
};

DiscontinuityStructure find_discontinuities(const Params& p, const ScanGrid& grid,
                                            const IntegratorConfig& cfg,
                                            unsigned n_workers = 0);

// Two-piece partition carried by the rho polyline; tag 1 on the P_In side,
// tag 2 on the P0 side.
struct Partition2 {
    std::vector<SectionPoint> rho_polyline;
    double resolution = 0.0;
    SectionPoint ref1;   // known tag-1 point (near the P_In boundary corner)
    SectionPoint ref2;   // known tag-2 point (P0)
    int side1 = 0;       // side of the polyline containing ref1
};

Partition2 make_partition(const Params& p, const DiscontinuityStructure& ds);

// 1, 2, or 0 for undecided (within resolution of rho or within 1e-9 of the
// section boundary).
int classify(const Params& p, const Partition2& part, const SectionPoint& sp);

struct SymbolicItinerary {
    std::vector<int> word;
    SectionPoint start;
    int valid_length = 0;
    ReturnOutcome stop_reason = ReturnOutcome::returned;
};

SymbolicItinerary itinerary(const Params& p, const SectionPoint& sp, int length,
                            const IntegratorConfig& cfg, const Partition2& part);

}  // namespace rossler

#endif
