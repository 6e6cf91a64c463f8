#include "rossler/section.hpp"

#include <sstream>

#include "rossler/integrate.hpp"

namespace rossler {

State3 embed(const Params& p, const SectionPoint& sp) {
    return {sp.u, -sp.u / p.a, sp.v};
}

SectionPoint project(const Params& p, const State3& s) {
    double g = s.x + p.a * s.y;
    if (std::abs(g) > 1e-8 * (1.0 + norm(s))) {
        std::ostringstream os;
        os << "project: state off the plane {x + ay = 0}, residual " << g;
        throw OffSection(os.str());
    }
    return {s.x, s.z};
}

bool in_open_section(const Params& p, const SectionPoint& sp) {
    return sp.v > sp.u / p.a;
}

bool in_closed_section(const Params& p, const SectionPoint& sp, double tol) {
    return sp.v >= sp.u / p.a - tol;
}

double boundary_gap(const Params& p, const SectionPoint& sp) {
    return sp.v - sp.u / p.a;
}

State3 TangencyCurves::sigma(double x) const {
    double den = params.a + params.c - x;
    if (den == 0.0) throw UndefinedAtPole("sigma: x = a + c");
    double w = x * (params.b + 1.0) / den;
    return {x, -w, w};
}

State3 TangencyCurves::l_p(double x) const {
    return {x, -x / params.a, x / params.a};
}

State3 TangencyCurves::delta(double x) const {
    if (x == params.c) throw UndefinedAtPole("delta: x = c");
    double w = params.b * x / (x - params.c);
    return {x, w, -w};
}

TangencyCurves tangency_curves(const Params& p) { return TangencyCurves{p}; }

SigmaArc sigma_subarc(const Params& p, double x) {
    double x_out = p.c - p.a * p.b;
    double pole = p.a + p.c;
    if (x == pole) throw UndefinedAtPole("sigma_subarc: x = a + c");
    if (x == 0.0 || x == x_out) return SigmaArc::endpoint;
    if (x < 0.0) return SigmaArc::sigma1;
    if (x < x_out) return SigmaArc::sigma3;
    if (x < pole) return SigmaArc::sigma2;
    return SigmaArc::sigma4;
}

SignChamber sign_chamber(const Params& p, const State3& s) {
    State3 f = vector_field(p, s);
    auto sgn = [](double v) { return (std::abs(v) < 1e-10) ? 0 : (v > 0.0 ? 1 : -1); };
    return {sgn(f.x), sgn(f.y), sgn(f.z)};
}

std::optional<double> trapping_violation(const Params& p, const Trajectory& traj) {
    double floor_z = -p.b - 1e-6;
    if (traj.times.size() < 2) {
        if (traj.states.front().z < floor_z) return traj.times.front();
        return std::nullopt;
    }
    for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
        double t0 = traj.times[i], t1 = traj.times[i + 1];
        for (int j = 0; j <= 4; ++j) {
            double t = t0 + (t1 - t0) * j / 4.0;
            State3 s = (j == 0) ? traj.states[i] : (j == 4 ? traj.states[i + 1] : traj.at(t));
            if (s.z < floor_z) return t;
        }
    }
    return std::nullopt;
}

}  // namespace rossler
