#include <random>

#include "doctest.h"
#include "rossler/integrate.hpp"
#include "rossler/section.hpp"

using namespace rossler;

namespace {
const Params kPaperP{0.468, 0.3, 4.615};
const Params kClassicP{0.2, 0.2, 5.7};
}

TEST_CASE("embed and project") {
    State3 s = embed(kPaperP, {0.0, 1.0});
    CHECK(s.x == 0.0);
    CHECK(s.y == 0.0);
    CHECK(s.z == 1.0);

    State3 on{1.0, -1.0 / 0.468, 3.0};
    SectionPoint sp = project(kPaperP, on);
    CHECK(sp.u == doctest::Approx(1.0));
    CHECK(sp.v == doctest::Approx(3.0));
    CHECK(in_open_section(kPaperP, sp));
    CHECK(3.0 > 1.0 / 0.468);

    CHECK_THROWS_AS(project(kPaperP, State3{1.0, 0.0, 3.0}), OffSection);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-8, 8);
    for (int i = 0; i < 200; ++i) {
        SectionPoint q{d(rng), d(rng)};
        SectionPoint r = project(kPaperP, embed(kPaperP, q));
        CHECK(std::abs(r.u - q.u) <= 1e-12 * (1 + std::abs(q.u)));
        CHECK(std::abs(r.v - q.v) <= 1e-12 * (1 + std::abs(q.v)));
    }
}

TEST_CASE("open-section membership is stable under v perturbations") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(-5, 5), eps(1e-6, 1e-2);
    for (int i = 0; i < 100; ++i) {
        double u = d(rng), e = eps(rng);
        SectionPoint inside{u, u / kPaperP.a + 2 * e};
        CHECK(in_open_section(kPaperP, inside));
        SectionPoint still{inside.u, inside.v - 0.99 * e};
        CHECK(in_open_section(kPaperP, still));
    }
}

TEST_CASE("tangency curves satisfy their defining identities") {
    TangencyCurves tc = tangency_curves(kPaperP);
    // sigma(0) = P_In, sigma(c-ab) = P_Out
    State3 s0 = tc.sigma(0.0);
    CHECK(norm(s0) == 0.0);
    double xout = kPaperP.c - kPaperP.a * kPaperP.b;
    State3 s1 = tc.sigma(xout);
    FixedPoints fp = fixed_points(kPaperP);
    CHECK(norm(s1 - fp.p_out) < 1e-12 * (1 + norm(fp.p_out)));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-1000.0, 1000.0);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        double x = d(rng);
        if (std::abs(x - (kPaperP.a + kPaperP.c)) < 1e-3) continue;
        if (std::abs(x - kPaperP.c) < 1e-3) continue;
        ++checked;
        double scale = 1.0 + std::abs(x) * 10;
        // sigma: x' = 0
        State3 fs = vector_field(kPaperP, tc.sigma(x));
        CHECK(std::abs(fs.x) <= 1e-10 * scale);
        // l_p: x' = y' = 0 and F = (0,0, bx + x^2/a - cx/a)
        State3 fl = vector_field(kPaperP, tc.l_p(x));
        CHECK(std::abs(fl.x) <= 1e-10 * scale);
        CHECK(std::abs(fl.y) <= 1e-10 * scale);
        double zdot = kPaperP.b * x + x * x / kPaperP.a - kPaperP.c * x / kPaperP.a;
        CHECK(fl.z == doctest::Approx(zdot).epsilon(1e-9));
        // delta: x' = 0 and z' = 0
        State3 fd = vector_field(kPaperP, tc.delta(x));
        CHECK(std::abs(fd.x) <= 1e-10 * scale);
        CHECK(std::abs(fd.z) <= 1e-10 * scale * scale);
    }
    CHECK(checked > 900);

    // F(l_p(x)) vanishes exactly at x = 0 and x = c-ab
    CHECK(norm(vector_field(kPaperP, tc.l_p(0.0))) == 0.0);
    CHECK(norm(vector_field(kPaperP, tc.l_p(xout))) < 1e-12);
}

TEST_CASE("sigma subarcs") {
    double xout = kPaperP.c - kPaperP.a * kPaperP.b;
    double pole = kPaperP.a + kPaperP.c;
    CHECK(sigma_subarc(kPaperP, -1.0) == SigmaArc::sigma1);
    CHECK(sigma_subarc(kPaperP, 0.5 * (xout + pole)) == SigmaArc::sigma2);
    CHECK(sigma_subarc(kPaperP, 0.5 * xout) == SigmaArc::sigma3);
    CHECK(sigma_subarc(kPaperP, pole + 1.0) == SigmaArc::sigma4);
    CHECK(sigma_subarc(kPaperP, 0.0) == SigmaArc::endpoint);
    CHECK(sigma_subarc(kPaperP, xout) == SigmaArc::endpoint);
    CHECK_THROWS_AS(sigma_subarc(kPaperP, pole), UndefinedAtPole);
}

TEST_CASE("sign pattern of the y' component along sigma") {
    // y' < 0 on sigma1 and sigma2, y' > 0 on sigma3 and sigma4
    TangencyCurves tc = tangency_curves(kPaperP);
    double xout = kPaperP.c - kPaperP.a * kPaperP.b;
    double pole = kPaperP.a + kPaperP.c;
    auto ydot = [&](double x) { return vector_field(kPaperP, tc.sigma(x)).y; };
    for (double x : {-5.0, -1.0, -0.01}) CHECK(ydot(x) < 0.0);
    for (double x : {xout + 0.01, 0.5 * (xout + pole), pole - 0.01}) CHECK(ydot(x) < 0.0);
    for (double x : {0.01, 0.5 * xout, xout - 0.01}) CHECK(ydot(x) > 0.0);
    for (double x : {pole + 0.01, pole + 5.0}) CHECK(ydot(x) > 0.0);
}

TEST_CASE("sign chamber") {
    SignChamber at_fp = sign_chamber(kPaperP, {0, 0, 0});
    CHECK(at_fp.sx == 0);
    CHECK(at_fp.sy == 0);
    CHECK(at_fp.sz == 0);

    SignChamber c = sign_chamber(kPaperP, {0.0, -1.0, 1.0});
    CHECK(c.sx == 0);       // -(-1) - 1 = 0
    CHECK(c.sy == -1);      // 0 + a(-1) < 0

    // on l_p with 0 < x < c-ab the field has z' < 0
    TangencyCurves tc = tangency_curves(kPaperP);
    double xout = kPaperP.c - kPaperP.a * kPaperP.b;
    SignChamber lp = sign_chamber(kPaperP, tc.l_p(0.5 * xout));
    CHECK(lp.sz == -1);
}

TEST_CASE("trapping set is never entered") {
    // boundary push-in: F . (0,0,1) = bc > 0 on {z = -b}
    State3 f = vector_field(kClassicP, {2.0, -1.0, -kClassicP.b});
    CHECK(f.z == doctest::Approx(kClassicP.b * kClassicP.c));

    IntegratorConfig cfg;
    Trajectory still = integrate(kClassicP, {0, 0, 0}, cfg, 0.0, 10.0);
    CHECK(!trapping_violation(kClassicP, still).has_value());

    // attractor run over a long window
    Trajectory run = integrate(kClassicP, {1, 1, 0}, cfg, 0.0, 500.0);
    REQUIRE(run.termination == Termination::reached_end);
    CHECK(!trapping_violation(kClassicP, run).has_value());
}
