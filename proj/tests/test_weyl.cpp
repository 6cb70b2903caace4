#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapeig/errors.hpp"
#include "gapeig/weyl.hpp"

#include <cmath>

using namespace gapeig;

namespace {

ProblemSpec free_line() {
    return parse_problem("[problem]\nkind = sl\ninterval = (-inf, inf)\n"
                         "p = 1\nq = 0\nr = 1\nleft = lp\nright = lp\n");
}

double angle_of(double u0, double u1) {
    double a = std::atan2(u1, u0);
    if (a < 0.0) a += M_PI;
    if (a >= M_PI) a -= M_PI;
    return a;
}

double angle_dist(double a, double b) {
    double d = std::fabs(std::fmod(a - b + 2.0 * M_PI, M_PI));
    return std::min(d, M_PI - d);
}

} // namespace

TEST_CASE("init_from_bc matches the boundary condition") {
    ProblemSpec box = catalog("dirichlet_box");
    State s = init_from_bc(box, Endpoint::Left, 1.0);
    // alpha = 0: u = (0, -1), y vanishes
    CHECK(std::fabs(s.u[0]) < 1e-15);
    CHECK(s.x == doctest::Approx(0.0));

    ProblemSpec fl = free_line();
    CHECK_THROWS_AS(init_from_bc(fl, Endpoint::Left, 1.0), SchemeMismatchError);
}

TEST_CASE("free line: recessive branch is e^{-x} at lambda = -1") {
    WeylDirection w = recessive_lp(free_line(), Endpoint::Right, -1.0, 0.0);
    CHECK(w.stabilized);
    // (y, y') proportional to (1, -1)
    CHECK(angle_dist(w.state.angle(), angle_of(1.0, -1.0)) < 1e-7);
    CHECK(w.decay_rate == doctest::Approx(1.0).epsilon(0.05));

    WeylDirection l = recessive_lp(free_line(), Endpoint::Left, -1.0, 0.0);
    CHECK(angle_dist(l.state.angle(), angle_of(1.0, 1.0)) < 1e-7);
}

TEST_CASE("free line: no decaying branch inside the essential spectrum") {
    CHECK_THROWS_AS(recessive_lp(free_line(), Endpoint::Right, 1.0, 0.0),
                    NonDecayingError);
}

TEST_CASE("harmonic: recessive branch at the ground state energy") {
    // at lambda = 1 the recessive solution at +inf is e^{-x^2/2}: y'(0) = 0
    WeylDirection w = weyl_direction(catalog("harmonic"), Endpoint::Right, 1.0, 0.0);
    CHECK(w.stabilized);
    CHECK(angle_dist(w.state.angle(), angle_of(1.0, 0.0)) < 1e-6);
    CHECK(w.state.norm() == doctest::Approx(1.0));
    CHECK(w.state.sigma == doctest::Approx(0.0));
}

TEST_CASE("recessive direction is propagation consistent") {
    ProblemSpec h = catalog("harmonic");
    double lambda = 2.0; // between eigenvalues
    WeylDirection w0 = recessive_lp(h, Endpoint::Right, lambda, 0.0);
    WeylDirection w1 = recessive_lp(h, Endpoint::Right, lambda, 1.5);
    State moved = propagate(h, lambda, w0.state, 1.5);
    CHECK(angle_dist(moved.angle(), w1.state.angle()) < 1e-7);
}

TEST_CASE("recessive direction is independent of lambda only through the equation") {
    // two nearby gap energies give distinct but close directions
    ProblemSpec h = catalog("harmonic");
    WeylDirection a = recessive_lp(h, Endpoint::Right, 2.0, 0.0);
    WeylDirection b = recessive_lp(h, Endpoint::Right, 2.01, 0.0);
    CHECK(angle_dist(a.state.angle(), b.state.angle()) < 0.05);
    CHECK(angle_dist(a.state.angle(), b.state.angle()) > 0.0);
}

TEST_CASE("coulomb: recessive branch below the essential spectrum") {
    ProblemSpec c = catalog("coulomb_l1");
    WeylDirection w = recessive_lp(c, Endpoint::Right, -0.05, 10.0);
    CHECK(w.stabilized);
    // asymptotically e^{-sqrt(0.05) x}
    CHECK(w.decay_rate == doctest::Approx(std::sqrt(0.05)).epsilon(0.2));
}

TEST_CASE("weyl_direction at a regular endpoint propagates the bc solution") {
    ProblemSpec box = catalog("dirichlet_box");
    WeylDirection w = weyl_direction(box, Endpoint::Left, 4.0, 0.25);
    // y = sin(2x): direction (sin(0.5), 2 cos(0.5))
    CHECK(angle_dist(w.state.angle(), angle_of(std::sin(0.5), 2.0 * std::cos(0.5))) < 1e-8);
    CHECK(w.stabilized);
}
