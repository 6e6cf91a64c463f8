#include <cmath>
#include <random>

#include "doctest.h"
#include "rossler/spectral.hpp"

using namespace rossler;

namespace {
const Params kPaperP{0.468, 0.3, 4.615};

double char_residual(const Mat3& m, double re, double im) {
    // |chi(lambda)| for lambda = re + i im
    double tr = trace3(m);
    double m2 = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    double det = det3(m);
    // chi = l^3 - tr l^2 + m2 l - det on complex l
    double re2 = re * re - im * im, im2 = 2 * re * im;
    double re3 = re2 * re - im2 * im, im3 = re2 * im + im2 * re;
    double rr = re3 - tr * re2 + m2 * re - det;
    double ri = im3 - tr * im2 + m2 * im;
    return std::hypot(rr, ri);
}

double mat_norm(const Mat3& m) {
    double s = 0;
    for (auto& r : m)
        for (double v : r) s = std::max(s, std::abs(v));
    return 1.0 + s;
}
}  // namespace

TEST_CASE("identity matrix eigenvalues") {
    Mat3 id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Eigen3Result e = eigen3(id);
    CHECK(!e.complex_pair);
    for (double v : e.reals) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("spectra at the verified parameter point") {
    FixedPoints fp = fixed_points(kPaperP);
    Eigen3Result ein = eigen3(jacobian(kPaperP, fp.p_in));
    REQUIRE(ein.complex_pair);
    // gamma_in printed as -4.551586 in the source; the trace identity
    // gamma + 2 rho = a - c pins the digits as -4.551856
    CHECK(ein.gamma == doctest::Approx(-4.551856264826052).epsilon(1e-9));
    CHECK(ein.rho == doctest::Approx(0.202428132413026).epsilon(1e-9));
    CHECK(ein.omega == doctest::Approx(0.9705927964961998).epsilon(1e-9));
    CHECK(ein.gamma + 2 * ein.rho == doctest::Approx(0.468 - 4.615).epsilon(1e-12));

    Eigen3Result eout = eigen3(jacobian(kPaperP, fp.p_out));
    REQUIRE(eout.complex_pair);
    CHECK(eout.gamma == doctest::Approx(0.4131387734072772).epsilon(1e-9));
    CHECK(eout.rho == doctest::Approx(-0.04276938670363817).epsilon(1e-9));
    CHECK(eout.omega == doctest::Approx(3.2907315409489653).epsilon(1e-9));
}

TEST_CASE("characteristic residual and trace/determinant identities") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        Mat3 m;
        for (auto& row : m)
            for (double& v : row) v = d(rng);
        Eigen3Result e = eigen3(m);
        double nm = mat_norm(m);
        double tol = 1e-8 * nm * nm * nm;
        double sum, prod;
        if (e.complex_pair) {
            CHECK(e.omega >= 0.0);
            CHECK(char_residual(m, e.gamma, 0.0) <= tol);
            CHECK(char_residual(m, e.rho, e.omega) <= tol);
            sum = e.gamma + 2 * e.rho;
            prod = e.gamma * (e.rho * e.rho + e.omega * e.omega);
        } else {
            for (double v : e.reals) CHECK(char_residual(m, v, 0.0) <= tol);
            sum = e.reals[0] + e.reals[1] + e.reals[2];
            prod = e.reals[0] * e.reals[1] * e.reals[2];
        }
        CHECK(sum == doctest::Approx(trace3(m)).epsilon(1e-9).scale(nm));
        CHECK(prod == doctest::Approx(det3(m)).epsilon(1e-9).scale(nm * nm * nm));
    }
}

TEST_CASE("saddle report and Shilnikov indices") {
    SaddleFocusReport r = saddle_report(kPaperP);
    CHECK(r.nu_in == doctest::Approx(0.202428 / 4.551856).epsilon(1e-4));
    CHECK(r.nu_in == doctest::Approx(0.04447).epsilon(1e-3));
    CHECK(r.nu_out == doctest::Approx(0.0427694 / 0.413139).epsilon(1e-5));
    CHECK(r.nu_out == doctest::Approx(0.10352).epsilon(1e-3));
    CHECK(r.shilnikov_in);
    CHECK(r.shilnikov_out);
}

TEST_CASE("saddle report rejects three-real-eigenvalue points") {
    // small c with a,b chosen so that P_In has three real eigenvalues
    bool found = false;
    for (double a = 0.9; a < 3.0 && !found; a += 0.1) {
        Params p{a, 0.1, 3.0};
        try {
            FixedPoints fp = fixed_points(p);
            Eigen3Result e = eigen3(jacobian(p, fp.p_in));
            if (!e.complex_pair) {
                found = true;
                CHECK_THROWS_AS(saddle_report(p), NotSaddleFocus);
            }
        } catch (const DegenerateFixedPoints&) {
        }
    }
    CHECK(found);
}

TEST_CASE("similarity invariance of the spectrum") {
    // rotate the Jacobian by an orthogonal matrix; eigenvalues are unchanged
    FixedPoints fp = fixed_points(kPaperP);
    Mat3 j = jacobian(kPaperP, fp.p_in);
    double th = 0.7;
    Mat3 q{{{std::cos(th), -std::sin(th), 0}, {std::sin(th), std::cos(th), 0}, {0, 0, 1}}};
    Mat3 qt{{{q[0][0], q[1][0], q[2][0]},
             {q[0][1], q[1][1], q[2][1]},
             {q[0][2], q[1][2], q[2][2]}}};
    auto matmul = [](const Mat3& a, const Mat3& b) {
        Mat3 r{};
        for (int i = 0; i < 3; ++i)
            for (int k = 0; k < 3; ++k)
                for (int jj = 0; jj < 3; ++jj) r[i][jj] += a[i][k] * b[k][jj];
        return r;
    };
    Mat3 sim = matmul(matmul(q, j), qt);
    Eigen3Result e0 = eigen3(j), e1 = eigen3(sim);
    REQUIRE(e0.complex_pair);
    REQUIRE(e1.complex_pair);
    CHECK(e1.gamma == doctest::Approx(e0.gamma).epsilon(1e-9));
    CHECK(e1.rho == doctest::Approx(e0.rho).epsilon(1e-9));
    CHECK(e1.omega == doctest::Approx(e0.omega).epsilon(1e-9));
}

TEST_CASE("assumption gate") {
    AssumptionStatus ok = check_assumptions(kPaperP);
    CHECK(ok.a1.pass);
    CHECK(ok.a2.pass);
    CHECK(ok.a3.pass);
    CHECK(ok.a4.pass);
    CHECK(ok.all());

    AssumptionStatus bad = check_assumptions({0.5, 0.5, 0.2});
    CHECK(!bad.a1.pass);

    AssumptionStatus classic = check_assumptions({0.2, 0.2, 5.7});
    CHECK(classic.a1.pass);
    CHECK(classic.a2.pass);
    CHECK(classic.a3.pass);
    CHECK(classic.a4.pass);

    // a4 equals min(nu) < 1 exactly as computed
    SaddleFocusReport r = saddle_report(kPaperP);
    CHECK(ok.a4.pass == (std::min(r.nu_in, r.nu_out) < 1.0));
}

TEST_CASE("real eigenvector satisfies the eigen equation") {
    FixedPoints fp = fixed_points(kPaperP);
    Mat3 j = jacobian(kPaperP, fp.p_in);
    Eigen3Result e = eigen3(j);
    State3 v = real_eigenvector(j, e.gamma);
    State3 jv = matvec(j, v);
    State3 res = jv - e.gamma * v;
    CHECK(norm(res) < 1e-8);
    CHECK(norm(v) == doctest::Approx(1.0));
}

TEST_CASE("complex plane basis is invariant under the jacobian") {
    FixedPoints fp = fixed_points(kPaperP);
    Mat3 j = jacobian(kPaperP, fp.p_out);
    Eigen3Result e = eigen3(j);
    State3 u1, u2;
    complex_plane_basis(j, e.gamma, u1, u2);
    State3 n = cross(u1, u2);
    // J maps the plane into itself: J u has no component along the normal
    for (const State3& u : {u1, u2}) {
        State3 ju = matvec(j, u);
        CHECK(std::abs(dot(ju, n)) < 1e-8 * (1 + norm(ju)));
    }
}
