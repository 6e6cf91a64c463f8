#ifndef ROSSLER_PERIODIC_HPP
#define ROSSLER_PERIODIC_HPP

#include <string>
#include <vector>

#include "rossler/return_map.hpp"

namespace rossler {

struct PeriodicOrbit {
    Params params;
    int k = 0;                        // minimal period in section returns
    std::vector<SectionPoint> points; // k points, cyclically mapped by f
    double residual = 0.0;            // |f^k(points[0]) - points[0]|
    double floquet_ratio = 0.0;       // det of the FD Jacobian of f^k (diagnostic)
    std::string word;                 // attached symbol word, may be empty
    std::vector<State3> curve3d;      // closed orbit curve in phase space
};

class UndecidedPoint : public std::runtime_error {
public:
    explicit UndecidedPoint(const std::string& what) : std::runtime_error(what) {}
};

// Damped Newton on g(x) = f^k(x) - x in the chart, central FD Jacobian with
// step 1e-6. Accepts residual <= 1e-9, merges cyclic-shift duplicates at
// 1e-6, rejects non-minimal periods (divisor residual < 1e-4).
std::vector<PeriodicOrbit> find_periodic(const Params& p, int k,
                                         const std::vector<SectionPoint>& seeds,
                                         const IntegratorConfig& cfg);

// Seed generator: lag-k near-recurrences of a long section run plus
// diagonal-crossing interpolants of the (u_n, u_{n+k}) graph.
std::vector<SectionPoint> orbit_seeds(const Params& p, int k,
                                      const IntegratorConfig& cfg,
                                      int n_returns = 400);

struct IndexReport {
    bool ok = false;
    std::string error;
    SectionPoint center;
    int k = 0;
    double loop_radius = 0.0;
    int winding = 0;
    int n_loop = 0;
    double min_displacement = 0.0;
};

// Brouwer degree of x -> f^k(x) - x along the circle of radius loop_radius
// around `center`: summed angle increments over n_loop points, refined up to
// 4096 until each increment stays below pi. Loops through discontinuities or
// with non-returned iterates come back with ok=false.
IndexReport winding_on_loop(const Params& p, const SectionPoint& center, int k,
                            double loop_radius, int n_loop,
                            const IntegratorConfig& cfg);

IndexReport fixed_point_index(const Params& p, const PeriodicOrbit& orbit,
                              double loop_radius, int n_loop,
                              const IntegratorConfig& cfg);

// word[i] = classify(points[i]); throws UndecidedPoint inside the tolerance
// band. The word is accepted only when its minimal cyclic period equals k.
std::string attach_word(const Params& p, const PeriodicOrbit& orbit,
                        const Partition2& part);

// Central FD Jacobian of f^k in the chart (step 1e-6).
bool map_jacobian(const Params& p, const SectionPoint& sp, int k,
                  const IntegratorConfig& cfg, double J[2][2]);

}  // namespace rossler

#endif
