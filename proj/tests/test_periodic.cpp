#include <cmath>

#include "doctest.h"
#include "rossler/periodic.hpp"

using namespace rossler;

namespace {
const Params kClassicP{0.2, 0.2, 5.7};

std::vector<PeriodicOrbit> classic_orbits(int k) {
    IntegratorConfig cfg;
    std::vector<SectionPoint> seeds = orbit_seeds(kClassicP, k, cfg, 300);
    return find_periodic(kClassicP, k, seeds, cfg);
}

int predicted_index(const Params& p, const PeriodicOrbit& orb, const IntegratorConfig& cfg) {
    double J[2][2];
    REQUIRE(map_jacobian(p, orb.points[0], orb.k, cfg, J));
    double det_im_a = (1.0 - J[0][0]) * (1.0 - J[1][1]) - J[0][1] * J[1][0];
    return det_im_a > 0 ? 1 : -1;
}
}  // namespace

TEST_CASE("period-1 orbit of the classic attractor") {
    IntegratorConfig cfg;
    std::vector<PeriodicOrbit> orbits = classic_orbits(1);
    REQUIRE(!orbits.empty());
    const PeriodicOrbit& o = orbits.front();
    CHECK(o.residual <= 1e-9);
    CHECK(o.k == 1);

    // Newton super-convergence tail: residual after one more map application
    SectionPoint img;
    {
        ReturnResult rr = first_return(kClassicP, o.points[0], cfg);
        REQUIRE(rr.outcome == ReturnOutcome::returned);
        img = rr.point;
    }
    CHECK(chart_dist(img, o.points[0]) < 1e-8);

    // winding agrees with the linear oracle sign(det(I - A))
    IndexReport rep = fixed_point_index(kClassicP, o, 1e-3, 256, cfg);
    REQUIRE(rep.ok);
    CHECK(std::abs(rep.winding) == 1);
    CHECK(rep.winding == predicted_index(kClassicP, o, cfg));

    // invariance under radius halving
    IndexReport rep2 = fixed_point_index(kClassicP, o, 5e-4, 256, cfg);
    REQUIRE(rep2.ok);
    CHECK(rep2.winding == rep.winding);
}

TEST_CASE("orbit curve closes and re-integrates") {
    IntegratorConfig cfg;
    std::vector<PeriodicOrbit> orbits = classic_orbits(1);
    REQUIRE(!orbits.empty());
    const PeriodicOrbit& o = orbits.front();
    REQUIRE(o.curve3d.size() > 10);
    CHECK(norm(o.curve3d.front() - o.curve3d.back()) < 1e-6);

    // one full period from the section point returns to it
    State3 s0 = embed(kClassicP, o.points[0]);
    CrossingResult cr = next_section_crossing(kClassicP, s0, cfg, -1);
    REQUIRE(cr.kind == CrossKind::crossing);
    CHECK(norm(cr.event.state - s0) < 1e-5);
    // transversality along the orbit
    CHECK(std::abs(cr.event.ydot_rate) > transversality_floor(cr.event.state));
}

TEST_CASE("period-2 points are swapped by the map") {
    IntegratorConfig cfg;
    std::vector<PeriodicOrbit> orbits = classic_orbits(2);
    if (orbits.empty()) return;  // the classic attractor may sit past period-2 windows
    const PeriodicOrbit& o = orbits.front();
    REQUIRE(o.points.size() == 2);
    ReturnResult a = first_return(kClassicP, o.points[0], cfg);
    ReturnResult b = first_return(kClassicP, o.points[1], cfg);
    REQUIRE(a.outcome == ReturnOutcome::returned);
    REQUIRE(b.outcome == ReturnOutcome::returned);
    CHECK(chart_dist(a.point, o.points[1]) < 1e-8);
    CHECK(chart_dist(b.point, o.points[0]) < 1e-8);
    CHECK(chart_dist(o.points[0], o.points[1]) > 1e-4);  // genuinely period 2
}

TEST_CASE("attach word accepts only full-period words") {
    Partition2 part;
    part.rho_polyline = {{-1.0, -10.0}, {-1.0, 10.0}};
    part.resolution = 1e-9;
    part.ref1 = {0.0, 0.0};
    part.side1 = -1;
    {
        double dx = 0.0, dy = 20.0;
        double cx = part.ref1.u - (-1.0), cy = part.ref1.v - (-10.0);
        part.side1 = (dx * cy - dy * cx > 0.0) ? 1 : -1;
    }
    PeriodicOrbit straddle;
    straddle.k = 2;
    straddle.points = {{0.5, 0.5}, {-2.0, 0.5}};
    std::string w = attach_word(kClassicP, straddle, part);
    CHECK((w == "12" || w == "21"));

    PeriodicOrbit same_side;
    same_side.k = 2;
    same_side.points = {{0.5, 0.5}, {0.7, 0.5}};
    CHECK_THROWS_AS(attach_word(kClassicP, same_side, part), UndecidedPoint);

    PeriodicOrbit on_band;
    on_band.k = 1;
    on_band.points = {{-1.0, 0.5}};
    CHECK_THROWS_AS(attach_word(kClassicP, on_band, part), UndecidedPoint);
}

TEST_CASE("winding of the linear-oracle construction") {
    IntegratorConfig cfg;
    std::vector<PeriodicOrbit> orbits = classic_orbits(1);
    REQUIRE(!orbits.empty());
    const PeriodicOrbit& o = orbits.front();
    double J[2][2];
    REQUIRE(map_jacobian(kClassicP, o.points[0], 1, cfg, J));
    // multipliers of the return map at the orbit
    double tr = J[0][0] + J[1][1];
    double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    double disc = tr * tr - 4 * det;
    if (disc > 0) {
        double m1 = 0.5 * (tr - std::sqrt(disc));
        double m2 = 0.5 * (tr + std::sqrt(disc));
        int oracle = ((1 - m1) * (1 - m2) > 0) ? 1 : -1;
        IndexReport rep = fixed_point_index(kClassicP, o, 1e-3, 256, cfg);
        REQUIRE(rep.ok);
        CHECK(rep.winding == oracle);
    }
}
