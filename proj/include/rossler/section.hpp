#ifndef ROSSLER_SECTION_HPP
#define ROSSLER_SECTION_HPP

#include <optional>
#include <stdexcept>

#include "rossler/flow.hpp"

namespace rossler {

class Trajectory;

// Chart point of the half-plane section H_p, the upper half of {y' = 0}.
// The plane is {(x, -x/a, z)}; the chart is (u, v) = (x, z); the open
// section is v > u/a and the boundary line l_p is v = u/a.
struct SectionPoint {
    double u = 0.0;
    double v = 0.0;

    SectionPoint() = default;
    SectionPoint(double u_, double v_) : u(u_), v(v_) {}
};

inline double chart_dist(const SectionPoint& p, const SectionPoint& q) {
    return std::hypot(p.u - q.u, p.v - q.v);
}

class OffSection : public std::runtime_error {
public:
    explicit OffSection(const std::string& what) : std::runtime_error(what) {}
};

class UndefinedAtPole : public std::runtime_error {
public:
    explicit UndefinedAtPole(const std::string& what) : std::runtime_error(what) {}
};

State3 embed(const Params& p, const SectionPoint& sp);

// Inverse chart. Throws OffSection unless |x + a y| <= 1e-8 (1 + |s|).
SectionPoint project(const Params& p, const State3& s);

// v > u/a strictly
bool in_open_section(const Params& p, const SectionPoint& sp);
// v >= u/a - tol
bool in_closed_section(const Params& p, const SectionPoint& sp, double tol = 1e-9);
// signed distance v - u/a to the boundary line in the chart
double boundary_gap(const Params& p, const SectionPoint& sp);

// Tangency curves of the flow to the planes {x'=0}, {y'=0}, {z'=0}:
//   sigma(x) = (x, -x(b+1)/(a+c-x), x(b+1)/(a+c-x)),   x != a+c
//   l_p(x)   = (x, -x/a, x/a)
//   delta(x) = (x, bx/(x-c), bx/(c-x)),                 x != c
struct TangencyCurves {
    Params params;
    State3 sigma(double x) const;
    State3 l_p(double x) const;
    State3 delta(double x) const;
};

TangencyCurves tangency_curves(const Params& p);

// Subarcs of sigma cut by P_In (x=0), P_Out (x=c-ab) and the pole x=a+c:
// sigma1: x<0, sigma3: 0<x<c-ab, sigma2: c-ab<x<a+c, sigma4: x>a+c.
enum class SigmaArc { sigma1, sigma2, sigma3, sigma4, endpoint };

SigmaArc sigma_subarc(const Params& p, double x);

// Component signs of the vector field, zero below 1e-10 in magnitude.
struct SignChamber {
    int sx = 0;
    int sy = 0;
    int sz = 0;
};

SignChamber sign_chamber(const Params& p, const State3& s);

// First time the trajectory enters {z < -b - 1e-6}, if ever. No trajectory
// should (the plane {z=-b} repels into z > -b), so a hit flags an
// integration fault.
std::optional<double> trapping_violation(const Params& p, const Trajectory& traj);

}  // namespace rossler

#endif
