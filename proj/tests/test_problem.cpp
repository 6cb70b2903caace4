#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapeig/errors.hpp"
#include "gapeig/problem.hpp"

#include <cmath>
#include <random>

using namespace gapeig;

namespace {

const char* kBox =
    "[problem]\n"
    "kind = sl\n"
    "interval = (0, pi)\n"
    "p = 1\n"
    "q = 0\n"
    "r = 1\n"
    "left = regular:0\n"
    "right = regular:0\n";

} // namespace

TEST_CASE("minimal Dirichlet box file") {
    ProblemSpec spec = parse_problem(kBox);
    CHECK(spec.kind == Kind::SturmLiouville);
    CHECK(spec.a == doctest::Approx(0.0));
    CHECK(spec.b == doctest::Approx(M_PI));
    CHECK(spec.left_class == EndpointClass::Regular);
    CHECK(*spec.left_bc_angle == doctest::Approx(0.0));
    CHECK(spec.p(1.0) == doctest::Approx(1.0));
}

TEST_CASE("infinite endpoint cannot be Regular") {
    std::string text = "[problem]\nkind = sl\ninterval = (0, inf)\n"
                       "p = 1\nq = 0\nr = 1\nleft = regular:0\nright = regular:0\n";
    CHECK_THROWS_AS(parse_problem(text), InvariantError);
}

TEST_CASE("Dirac symmetry violation is rejected") {
    std::string text = "[problem]\nkind = dirac\ninterval = (-1, 1)\n"
                       "q11 = 1\nq12 = x\nq21 = -x\nq22 = -1\n"
                       "r11 = 1\nr12 = 0\nr22 = 1\nleft = regular:0\nright = regular:0\n";
    CHECK_THROWS_AS(parse_problem(text), InvariantError);
}

TEST_CASE("negative r is rejected at a probe point") {
    std::string text = "[problem]\nkind = sl\ninterval = (0, 2)\n"
                       "p = 1\nq = 0\nr = x - 1\nleft = regular:0\nright = regular:0\n";
    CHECK_THROWS_AS(parse_problem(text), InvariantError);
}

TEST_CASE("syntax errors") {
    CHECK_THROWS_AS(parse_problem("kind = sl\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("[problem]\nkind = whatever\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("[problem]\nkind = sl\ninterval = 0..1\n"), ParseError);
    CHECK_THROWS_AS(parse_problem("[other]\nx = 1\n"), ParseError);
}

TEST_CASE("catalog entries") {
    ProblemSpec h = catalog("harmonic");
    CHECK(h.left_class == EndpointClass::LimitPoint);
    CHECK(h.right_class == EndpointClass::LimitPoint);
    CHECK(h.q(2.0) == doctest::Approx(4.0));

    ProblemSpec box = catalog("dirichlet_box");
    CHECK(box.left_class == EndpointClass::Regular);
    CHECK(*box.left_bc_angle == doctest::Approx(0.0));
    CHECK(*box.right_bc_angle == doctest::Approx(0.0));

    CHECK_THROWS_AS(catalog("nosuch"), InvariantError);
    try {
        catalog("nosuch");
    } catch (const InvariantError& e) {
        CHECK(std::string(e.what()).find("harmonic") != std::string::npos);
    }
}

TEST_CASE("every catalog entry validates on a 1000-point probe mesh") {
    for (const auto& name : catalog_names()) CHECK_NOTHROW(validate(catalog(name), 1000));
}

TEST_CASE("render/parse round trip agrees at random interior points") {
    std::mt19937 rng(11);
    for (const auto& name : catalog_names()) {
        ProblemSpec orig = catalog(name);
        ProblemSpec round = parse_problem(render(orig));
        CHECK(round.kind == orig.kind);
        CHECK(round.a == orig.a);
        CHECK(round.b == orig.b);
        auto mesh = probe_mesh(orig, 100);
        std::shuffle(mesh.begin(), mesh.end(), rng);
        for (double x : mesh) {
            if (orig.kind == Kind::SturmLiouville) {
                CHECK(std::fabs(round.p(x) - orig.p(x)) < 1e-12 * (1 + std::fabs(orig.p(x))));
                CHECK(std::fabs(round.q(x) - orig.q(x)) < 1e-12 * (1 + std::fabs(orig.q(x))));
                CHECK(std::fabs(round.r(x) - orig.r(x)) < 1e-12 * (1 + std::fabs(orig.r(x))));
            } else {
                CHECK(std::fabs(round.q11(x) - orig.q11(x)) < 1e-12);
                CHECK(std::fabs(round.q22(x) - orig.q22(x)) < 1e-12);
                CHECK(std::fabs(round.r11(x) - orig.r11(x)) < 1e-12);
            }
        }
    }
}
