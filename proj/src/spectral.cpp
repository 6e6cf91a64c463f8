#include "rossler/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rossler {

namespace {

double matrix_scale(const Mat3& m) {
    double s = 0.0;
    for (const auto& row : m)
        for (double v : row) s = std::max(s, std::abs(v));
    return 1.0 + s;
}

// chi(lambda) = lambda^3 - tr lambda^2 + m2 lambda - det
struct CharPoly {
    double tr, m2, det;
    double eval(double x) const { return ((x - tr) * x + m2) * x - det; }
    double deriv(double x) const { return (3.0 * x - 2.0 * tr) * x + m2; }
};

CharPoly char_poly(const Mat3& m) {
    double m2 = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    return {trace3(m), m2, det3(m)};
}

double polish_root(const CharPoly& p, double x) {
    for (int i = 0; i < 2; ++i) {
        double d = p.deriv(x);
        if (d == 0.0) break;
        double step = p.eval(x) / d;
        if (!std::isfinite(step)) break;
        x -= step;
    }
    return x;
}

}  // namespace

Eigen3Result eigen3(const Mat3& m) {
    CharPoly cp = char_poly(m);
    double scale = matrix_scale(m);

    // depressed cubic t^3 + P t + Q via lambda = t + tr/3
    double sh = cp.tr / 3.0;
    double P = cp.m2 - cp.tr * cp.tr / 3.0;
    double Q = cp.eval(sh);
    double disc = -4.0 * P * P * P - 27.0 * Q * Q;   // > 0: three distinct reals

    Eigen3Result r;
    double thresh = 1e-12 * scale * scale * scale;
    r.borderline = std::abs(disc) < thresh;

    if (disc >= -thresh && P < -1e-14 * scale * scale) {
        // three real roots (two possibly near-equal), trigonometric form
        double amp = 2.0 * std::sqrt(-P / 3.0);
        double arg = std::clamp(3.0 * Q / (amp * P), -1.0, 1.0);
        double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            r.reals[k] = polish_root(cp, sh + amp * std::cos(phi - 2.0 * M_PI * k / 3.0));
        std::sort(r.reals.begin(), r.reals.end());
        r.complex_pair = false;
    } else if (disc >= -thresh) {
        // near-triple root
        r.reals = {polish_root(cp, sh), polish_root(cp, sh), polish_root(cp, sh)};
        r.complex_pair = false;
    } else {
        // Cardano: one real root
        double t;
        double half_q = Q / 2.0;
        double rad = std::sqrt(half_q * half_q + P * P * P / 27.0);
        double u = std::cbrt(-half_q + rad);
        double v = std::cbrt(-half_q - rad);
        t = u + v;
        r.gamma = polish_root(cp, sh + t);
        // remaining quadratic: lambda^2 + (gamma - tr) lambda + det/gamma-ish;
        // use sum/product identities instead of deflation for stability
        r.rho = (cp.tr - r.gamma) / 2.0;
        double prod = (std::abs(r.gamma) > 1e-300) ? cp.det / r.gamma
                                                   : cp.m2 - r.rho * r.rho;
        double w2 = prod - r.rho * r.rho;
        r.omega = std::sqrt(std::max(w2, 0.0));
        r.complex_pair = true;
        r.reals = {r.gamma, r.rho, r.rho};
    }
    return r;
}

State3 real_eigenvector(const Mat3& m, double lambda) {
    Mat3 a = m;
    for (int i = 0; i < 3; ++i) a[i][i] -= lambda;
    State3 r0{a[0][0], a[0][1], a[0][2]};
    State3 r1{a[1][0], a[1][1], a[1][2]};
    State3 r2{a[2][0], a[2][1], a[2][2]};
    State3 cand[3] = {cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    State3 best = cand[0];
    for (const State3& c : cand)
        if (norm(c) > norm(best)) best = c;
    double n = norm(best);
    if (n < 1e-300) throw std::runtime_error("real_eigenvector: defective matrix");
    return best * (1.0 / n);
}

void complex_plane_basis(const Mat3& m, double gamma, State3& u1, State3& u2) {
    Mat3 a = m;
    for (int i = 0; i < 3; ++i) a[i][i] -= gamma;
    State3 c0{a[0][0], a[1][0], a[2][0]};
    State3 c1{a[0][1], a[1][1], a[2][1]};
    State3 c2{a[0][2], a[1][2], a[2][2]};
    State3 cols[3] = {c0, c1, c2};
    std::sort(cols, cols + 3, [](const State3& x, const State3& y) { return norm(x) > norm(y); });
    u1 = cols[0] * (1.0 / norm(cols[0]));
    State3 w = cols[1] - u1 * dot(u1, cols[1]);
    if (norm(w) < 1e-10) w = cols[2] - u1 * dot(u1, cols[2]);
    u2 = w * (1.0 / norm(w));
}

namespace {

Spectrum to_spectrum(const Eigen3Result& e) {
    Spectrum s;
    s.is_complex_pair = e.complex_pair;
    if (e.complex_pair) {
        s.gamma = e.gamma;
        s.rho = e.rho;
        s.omega = e.omega;
    } else {
        s.gamma = e.reals[0];
        s.rho = e.reals[1];
        s.omega = 0.0;
    }
    return s;
}

}  // namespace

SaddleFocusReport saddle_report(const Params& p) {
    FixedPoints fp = fixed_points(p);
    Eigen3Result ein = eigen3(jacobian(p, fp.p_in));
    Eigen3Result eout = eigen3(jacobian(p, fp.p_out));
    if (!ein.complex_pair)
        throw NotSaddleFocus("saddle_report: P_In spectrum has no complex pair");
    if (!eout.complex_pair)
        throw NotSaddleFocus("saddle_report: P_Out spectrum has no complex pair");
    if (!(ein.gamma < 0.0 && ein.rho > 0.0))
        throw NotSaddleFocus("saddle_report: P_In is not a 1D-stable/2D-unstable saddle-focus");
    if (!(eout.gamma > 0.0 && eout.rho < 0.0))
        throw NotSaddleFocus("saddle_report: P_Out is not a 1D-unstable/2D-stable saddle-focus");

    SaddleFocusReport r;
    r.spectrum_in = to_spectrum(ein);
    r.spectrum_out = to_spectrum(eout);
    r.nu_in = std::abs(r.spectrum_in.rho / r.spectrum_in.gamma);
    r.nu_out = std::abs(r.spectrum_out.rho / r.spectrum_out.gamma);
    r.shilnikov_in = r.nu_in < 1.0;
    r.shilnikov_out = r.nu_out < 1.0;
    return r;
}

AssumptionStatus check_assumptions(const Params& p) {
    AssumptionStatus st;
    {
        std::ostringstream os;
        bool ok = p.a > 0.0 && p.a < 1.0 && p.b > 0.0 && p.b < 1.0 && p.c > 1.0;
        os << "a,b in (0,1) and c > 1: a=" << p.a << " b=" << p.b << " c=" << p.c;
        st.a1 = {ok, os.str()};
    }

    FixedPoints fp;
    bool have_fp = false;
    try {
        fp = fixed_points(p);
        have_fp = true;
    } catch (const DegenerateFixedPoints& e) {
        st.a2 = {false, e.what()};
        st.a3 = {false, "fixed points degenerate"};
        st.a4 = {false, "fixed points degenerate"};
        return st;
    }
    (void)have_fp;

    Eigen3Result ein = eigen3(jacobian(p, fp.p_in));
    Eigen3Result eout = eigen3(jacobian(p, fp.p_out));
    {
        bool ok = ein.complex_pair && eout.complex_pair;
        st.a2 = {ok, ok ? "two fixed points, both saddle-foci"
                        : "a fixed point lacks a complex-conjugate pair"};
    }
    {
        bool ok = ein.complex_pair && eout.complex_pair &&
                  ein.gamma < 0.0 && ein.rho > 0.0 &&
                  eout.gamma > 0.0 && eout.rho < 0.0;
        std::ostringstream os;
        os << "manifold-dimension signs (stable pair at P_Out, rho_out < 0): "
           << "gamma_in=" << (ein.complex_pair ? ein.gamma : ein.reals[0])
           << " rho_in=" << ein.rho
           << " gamma_out=" << (eout.complex_pair ? eout.gamma : eout.reals[0])
           << " rho_out=" << eout.rho;
        st.a3 = {ok, os.str()};
    }
    {
        if (ein.complex_pair && eout.complex_pair &&
            ein.gamma != 0.0 && eout.gamma != 0.0) {
            double nu_in = std::abs(ein.rho / ein.gamma);
            double nu_out = std::abs(eout.rho / eout.gamma);
            bool ok = std::min(nu_in, nu_out) < 1.0;
            std::ostringstream os;
            os << "nu_in=" << nu_in << " nu_out=" << nu_out;
            st.a4 = {ok, os.str()};
        } else {
            st.a4 = {false, "saddle indices undefined without complex pairs"};
        }
    }
    return st;
}

}  // namespace rossler
