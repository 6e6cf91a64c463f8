#ifndef ROSSLER_FLOW_HPP
#define ROSSLER_FLOW_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace rossler {

// Phase-space point for the system
//   x' = -y - z
//   y' = x + a y
//   z' = b x + z (x - c)
struct State3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    State3() = default;
    State3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    State3 operator+(const State3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    State3 operator-(const State3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    State3 operator*(double s) const { return {x * s, y * s, z * s}; }
    State3& operator+=(const State3& o) { x += o.x; y += o.y; z += o.z; return *this; }
};

inline State3 operator*(double s, const State3& v) { return v * s; }

inline double dot(const State3& a, const State3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline State3 cross(const State3& a, const State3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const State3& v) { return std::sqrt(dot(v, v)); }

using Mat3 = std::array<std::array<double, 3>, 3>;

State3 matvec(const Mat3& m, const State3& v);
double det3(const Mat3& m);
double trace3(const Mat3& m);
// Solves m x = rhs by Gaussian elimination with partial pivoting.
State3 solve3(const Mat3& m, const State3& rhs);

// Parameters (a, b, c) of the x'-form above. The valid window used throughout
// is a, b in (0,1), c > 1, c > ab; construction does not enforce it.
struct Params {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    Params() = default;
    Params(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {}
};

bool in_valid_range(const Params& p);

// Parameters (A, B, C) of the classic form X' = -Y-Z, Y' = X+AY, Z' = B+Z(X-C).
struct ClassicParams {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

struct FixedPoints {
    State3 p_in;   // the origin
    State3 p_out;  // (c-ab, b-c/a, c/a-b)
};

class DegenerateFixedPoints : public std::runtime_error {
public:
    explicit DegenerateFixedPoints(const std::string& what) : std::runtime_error(what) {}
};

class ConversionUndefined : public std::runtime_error {
public:
    explicit ConversionUndefined(const std::string& what) : std::runtime_error(what) {}
};

State3 vector_field(const Params& p, const State3& s);
Mat3 jacobian(const Params& p, const State3& s);

// div F = a + x - c
double divergence(const Params& p, const State3& s);

// Both fixed points, closed form polished by one Newton step.
// Throws DegenerateFixedPoints when |c - ab| < 1e-10 (the points coincide).
FixedPoints fixed_points(const Params& p);

// Coordinate change between the classic form and the x'-form. Defined when
// C^2 - 4AB > 0, via p1 = (-C + sqrt(C^2 - 4AB)) / (2A); then a = A,
// b = -p1, c = C + A p1 and states shift by (A p1, -p1, p1).
double shift_root_p1(const ClassicParams& cp);
Params classic_to_paper_params(const ClassicParams& cp);
State3 classic_to_paper(const ClassicParams& cp, const State3& classic_state);
State3 paper_to_classic(const ClassicParams& cp, const State3& paper_state);

}  // namespace rossler

#endif
