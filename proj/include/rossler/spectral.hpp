#ifndef ROSSLER_SPECTRAL_HPP
#define ROSSLER_SPECTRAL_HPP

#include <string>

#include "rossler/flow.hpp"

namespace rossler {

// Roots of the characteristic cubic of a 3x3 matrix. Either three real
// eigenvalues, or one real (gamma) plus a conjugate pair rho +- i omega.
struct Eigen3Result {
    bool complex_pair = false;
    bool borderline = false;          // discriminant within noise of zero
    double gamma = 0.0;               // the real eigenvalue (pair case)
    double rho = 0.0;                 // real part of the pair
    double omega = 0.0;               // positive imaginary part of the pair
    std::array<double, 3> reals{};    // all three, when complex_pair is false
};

struct Spectrum {
    double gamma = 0.0;
    double rho = 0.0;
    double omega = 0.0;
    bool is_complex_pair = false;
};

struct SaddleFocusReport {
    Spectrum spectrum_in;
    Spectrum spectrum_out;
    double nu_in = 0.0;    // |rho_in / gamma_in|
    double nu_out = 0.0;   // |rho_out / gamma_out|
    bool shilnikov_in = false;
    bool shilnikov_out = false;
};

struct AssumptionCheck {
    bool pass = false;
    std::string reason;
};

// Assumptions on the parameter window:
//   a1: a,b in (0,1) and c > 1
//   a2: exactly two fixed points, both saddle-foci
//   a3: P_In has 1D stable / 2D unstable (gamma_in < 0 < rho_in),
//       P_Out has 1D unstable / 2D stable (gamma_out > 0 > rho_out)
//   a4: min(nu_in, nu_out) < 1
struct AssumptionStatus {
    AssumptionCheck a1, a2, a3, a4;
    bool all() const { return a1.pass && a2.pass && a3.pass && a4.pass; }
};

class NotSaddleFocus : public std::runtime_error {
public:
    explicit NotSaddleFocus(const std::string& what) : std::runtime_error(what) {}
};

// Closed-form cubic solve (trigonometric / Cardano on the depressed cubic),
// one Newton polish per root.
Eigen3Result eigen3(const Mat3& m);

// Spectra and saddle indices at both fixed points. Throws NotSaddleFocus when
// a spectrum lacks a complex pair or the sign pattern violates the manifold
// dimensions of a3.
SaddleFocusReport saddle_report(const Params& p);

// Never throws; failures are recorded in the returned flags.
AssumptionStatus check_assumptions(const Params& p);

// Real eigenvector for a real eigenvalue of m (unit norm).
State3 real_eigenvector(const Mat3& m, double lambda);

// Orthonormal basis {u1, u2} of the invariant plane of the complex pair,
// computed as the image of (m - gamma I).
void complex_plane_basis(const Mat3& m, double gamma, State3& u1, State3& u2);

}  // namespace rossler

#endif
