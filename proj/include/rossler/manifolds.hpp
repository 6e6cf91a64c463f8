#ifndef ROSSLER_MANIFOLDS_HPP
#define ROSSLER_MANIFOLDS_HPP

#include <string>
#include <vector>

#include "rossler/integrate.hpp"
#include "rossler/spectral.hpp"

namespace rossler {

enum class SepSource { stable_in, unstable_out };

// One branch of a one-dimensional separatrix, seeded a small offset along the
// real eigenvector and traced backward (W^s_In) or forward (W^u_Out) in time.
struct Separatrix {
    SepSource source = SepSource::stable_in;
    int branch = +1;
    double seed_offset = 0.0;
    Trajectory curve;
    std::vector<CrossingEvent> section_crossings;  // upper half-plane hits, in order
    bool blew_up = false;
    bool hit_opposite_fixed_point = false;
};

// seed_offset < 0 selects the default 1e-7 (1 + |fixed point|); zero is
// rejected (the seed would sit exactly at the fixed point).
Separatrix trace_separatrix(const Params& p, SepSource which, int branch,
                            const IntegratorConfig& cfg, double arclength_cap,
                            double bound_cap = 100.0, double seed_offset = -1.0);

struct HeteroMismatch {
    bool valid = false;
    std::string failure;          // NoCrossing cause when invalid
    double value = 0.0;           // min pairwise chart distance
    CrossingEvent witness_unstable;
    CrossingEvent witness_stable;
    int branch_unstable = 0;
    int branch_stable = 0;
    int index_unstable = -1;      // crossing index along each separatrix
    int index_stable = -1;
};

// Minimum chart distance between the section crossings of the bounded branch
// of W^u_Out (forward) and of W^s_In (backward).
HeteroMismatch hetero_mismatch(const Params& p, const IntegratorConfig& cfg);

struct SearchStep {
    Params params;
    double value = 0.0;
};

struct TrefoilSearchResult {
    bool found = false;           // mismatch < 1e-3 reached
    Params best;
    double best_value = 0.0;
    std::vector<SearchStep> improvements;  // accepted best-so-far sequence
    int evaluations = 0;
};

// Derivative-free (Nelder-Mead) minimization of hetero_mismatch over two of
// the three parameters inside a box around the seed.
TrefoilSearchResult trefoil_search(const Params& seed, char free1, char free2,
                                   double box_halfwidth, const IntegratorConfig& cfg,
                                   int max_evals = 400);

struct TrefoilCertificate {
    bool valid = false;
    std::vector<std::string> failures;
    Params params;
    double mismatch = 0.0;
    SectionPoint p0;
    int crossing_count_on_section = 0;
    bool transverse = false;
    std::vector<State3> theta_curve;       // closed loop: Theta plus closure arc
    std::vector<long long> knot_poly;      // Alexander coefficients, degree 0 first
    std::string closure_convention;
};

// Builds the candidate heteroclinic loop at p, counts its section crossings,
// closes it through the fixed points and types the knot. Preconditions:
// hetero_mismatch(p).value < 1e-3; violations come back as refutations.
TrefoilCertificate certify_trefoil(const Params& p, const IntegratorConfig& cfg);

}  // namespace rossler

#endif
