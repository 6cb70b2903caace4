#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapeig/errors.hpp"
#include "gapeig/jacobi.hpp"

#include <cmath>

using namespace gapeig;

namespace {

JacobiOperator free_op() { return JacobiOperator::from_expressions("1", "0"); }

JacobiOperator impurity(double v) {
    return JacobiOperator::from_expressions("1", "0", {{0, v}});
}

} // namespace

TEST_CASE("entries, overrides, and validation") {
    JacobiOperator op = impurity(2.0);
    CHECK(op.a(0) == 1.0);
    CHECK(op.b(0) == 2.0);
    CHECK(op.b(1) == 0.0);
    CHECK(op.b(1000) == 0.0);

    JacobiOperator decay = JacobiOperator::from_expressions("1 + 1/(k+2)", "1/(k+1)");
    CHECK(decay.a(0) == doctest::Approx(1.5));
    CHECK(decay.b(3) == doctest::Approx(0.25));

    JacobiOperator bad = JacobiOperator::from_expressions("k - 5", "0");
    CHECK_THROWS_AS(bad.a(3), InvariantError);
}

TEST_CASE("essential band") {
    auto band = free_op().essential_band();
    CHECK(band.first == doctest::Approx(-2.0));
    CHECK(band.second == doctest::Approx(2.0));

    JacobiOperator decay = JacobiOperator::from_expressions("1 + 1/(k+2)", "3/(k+1)");
    auto b2 = decay.essential_band();
    CHECK(b2.first == doctest::Approx(-2.0).epsilon(1e-4));
    CHECK(b2.second == doctest::Approx(2.0).epsilon(1e-4));

    JacobiOperator wild = JacobiOperator::from_expressions("1", "sin(k)");
    CHECK_THROWS_AS(wild.essential_band(), InvariantError);
    wild.band = {{-3.0, 3.0}};
    auto b3 = wild.essential_band();
    CHECK(b3.first == -3.0);
}

TEST_CASE("free decaying ratio") {
    // u_{k+1}/u_k = (lambda - sqrt(lambda^2 - 4)) / 2 outside the band
    for (double lambda : {2.5, 3.0, -2.5, 6.0}) {
        JacobiWeylResult w = jacobi_weyl_sequence(free_op(), lambda, 10);
        double s = std::sqrt(lambda * lambda - 4.0);
        double expect = (std::fabs(lambda - s) < std::fabs(lambda + s))
                            ? (lambda - s) / 2.0
                            : (lambda + s) / 2.0;
        CHECK(w.stabilized);
        CHECK(w.ratio == doctest::Approx(expect).epsilon(1e-10));
        CHECK(std::fabs(w.ratio) < 1.0);
    }
}

TEST_CASE("the ratio is index independent for the free operator") {
    JacobiWeylResult a = jacobi_weyl_sequence(free_op(), 2.5, 0);
    JacobiWeylResult b = jacobi_weyl_sequence(free_op(), 2.5, 50);
    CHECK(a.ratio == doctest::Approx(b.ratio).epsilon(1e-12));
}

TEST_CASE("no decaying solution inside the band") {
    CHECK_THROWS_AS(jacobi_weyl_sequence(free_op(), 0.5, 10), NonDecayingError);
}

TEST_CASE("corner modification reproduces the impurity bound state") {
    // b_0 = v has the bound state lambda = v + 1/v
    JacobiOperator op = impurity(2.0);
    SpectralWindow win{2.2, 2.8};
    for (long n : {4L, 10L, 37L}) {
        Tridiag t = truncate_jacobi(op, TwoSidedWeyl{2.5, 2.5}, win, n);
        REQUIRE(t.size() == std::size_t(n + 1));
        auto eigs = tridiag_eigs_window(t, win);
        REQUIRE(eigs.size() == 1);
        CHECK(eigs[0] == doctest::Approx(2.5).epsilon(1e-13));
    }
}

TEST_CASE("dirichlet truncation leaves the corner alone") {
    JacobiOperator op = impurity(2.0);
    Tridiag t = truncate_jacobi(op, NaiveDirichlet{}, {2.2, 2.8}, 20);
    CHECK(t.diag[20] == 0.0);
    CHECK(t.off[19] == 1.0);
    // plain truncation only approaches the bound state
    auto eigs = tridiag_eigs_window(t, {2.2, 2.8});
    REQUIRE(eigs.size() == 1);
    CHECK(std::fabs(eigs[0] - 2.5) > 1e-13);
    CHECK(std::fabs(eigs[0] - 2.5) < 1e-3);
}

TEST_CASE("one-sided truncation matches a brute-force large section") {
    JacobiOperator op = impurity(2.0);
    SpectralWindow win{2.2, 2.8};
    Tridiag t = truncate_jacobi(op, OneSidedLP{2.5, WindowEdge::Lambda0}, win, 30);
    auto eigs = tridiag_eigs_window(t, win);

    Tridiag big;
    big.diag.assign(3000, 0.0);
    big.diag[0] = 2.0;
    big.off.assign(2999, 1.0);
    auto ref = tridiag_eigs_window(big, win);
    REQUIRE(ref.size() == 1);
    REQUIRE(eigs.size() == 1);
    CHECK(eigs[0] == doctest::Approx(ref[0]).epsilon(1e-8));
}

TEST_CASE("sturm cross-check of a corner-modified section") {
    JacobiOperator op = impurity(2.0);
    Tridiag t = truncate_jacobi(op, TwoSidedWeyl{2.5, 2.5}, {2.2, 2.8}, 12);
    CHECK(sturm_count(t, 2.8) - sturm_count(t, 2.2) == 1);
    CHECK_THROWS_AS(truncate_jacobi(op, NaiveDirichlet{}, {2.2, 2.8}, 1), InvariantError);
}
