#include "rossler/flow.hpp"

#include <algorithm>

namespace rossler {

State3 matvec(const Mat3& m, const State3& v) {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
         - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
         + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double trace3(const Mat3& m) { return m[0][0] + m[1][1] + m[2][2]; }

State3 solve3(const Mat3& m, const State3& rhs) {
    double A[3][4] = {{m[0][0], m[0][1], m[0][2], rhs.x},
                      {m[1][0], m[1][1], m[1][2], rhs.y},
                      {m[2][0], m[2][1], m[2][2], rhs.z}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < 1e-300)
            throw std::runtime_error("solve3: singular matrix");
        if (piv != col) std::swap(A[piv], A[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            for (int k = col; k < 4; ++k) A[r][k] -= f * A[col][k];
        }
    }
    return {A[0][3] / A[0][0], A[1][3] / A[1][1], A[2][3] / A[2][2]};
}

bool in_valid_range(const Params& p) {
    return std::isfinite(p.a) && std::isfinite(p.b) && std::isfinite(p.c) &&
           p.a > 0.0 && p.a < 1.0 && p.b > 0.0 && p.b < 1.0 && p.c > 1.0 &&
           p.c > p.a * p.b;
}

State3 vector_field(const Params& p, const State3& s) {
    return {-s.y - s.z, s.x + p.a * s.y, p.b * s.x + s.z * (s.x - p.c)};
}

Mat3 jacobian(const Params& p, const State3& s) {
    return Mat3{{{0.0, -1.0, -1.0},
                 {1.0, p.a, 0.0},
                 {p.b + s.z, 0.0, s.x - p.c}}};
}

double divergence(const Params& p, const State3& s) {
    // written as the jacobian trace sum so the two agree bit-for-bit
    return (0.0 + p.a) + (s.x - p.c);
}

static State3 newton_polish_fixed_point(const Params& p, State3 s) {
    State3 f = vector_field(p, s);
    if (std::abs(f.x) + std::abs(f.y) + std::abs(f.z) == 0.0) return s;
    try {
        State3 d = solve3(jacobian(p, s), f);
        return s - d;
    } catch (const std::runtime_error&) {
        return s;
    }
}

FixedPoints fixed_points(const Params& p) {
    if (p.a == 0.0 || !std::isfinite(p.a))
        throw DegenerateFixedPoints("fixed_points: a must be nonzero");
    if (std::abs(p.c - p.a * p.b) < 1e-10)
        throw DegenerateFixedPoints("fixed_points: c = ab, fixed points coincide");
    FixedPoints fp;
    fp.p_in = {0.0, 0.0, 0.0};
    double coa = p.c / p.a;
    fp.p_out = newton_polish_fixed_point(p, {p.c - p.a * p.b, p.b - coa, coa - p.b});
    return fp;
}

double shift_root_p1(const ClassicParams& cp) {
    double disc = cp.C * cp.C - 4.0 * cp.A * cp.B;
    if (!(disc > 0.0) || cp.A == 0.0)
        throw ConversionUndefined("classic_to_paper: C^2 - 4AB must be positive");
    return (-cp.C + std::sqrt(disc)) / (2.0 * cp.A);
}

Params classic_to_paper_params(const ClassicParams& cp) {
    double p1 = shift_root_p1(cp);
    return {cp.A, -p1, cp.C + cp.A * p1};
}

State3 classic_to_paper(const ClassicParams& cp, const State3& cs) {
    double p1 = shift_root_p1(cp);
    return {cs.x + cp.A * p1, cs.y - p1, cs.z + p1};
}

State3 paper_to_classic(const ClassicParams& cp, const State3& ps) {
    double p1 = shift_root_p1(cp);
    return {ps.x - cp.A * p1, ps.y + p1, ps.z - p1};
}

}  // namespace rossler
