#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gapeig/convergence.hpp"
#include "gapeig/errors.hpp"

#include <cmath>

using namespace gapeig;

namespace {

StudyResult study_with_counts(std::vector<int> counts) {
    StudyResult st;
    st.spec = catalog("harmonic");
    for (std::size_t i = 0; i < counts.size(); ++i)
        st.truncations.push_back({-double(i + 4), double(i + 4)});
    st.counts = std::move(counts);
    return st;
}

std::vector<Truncation> harmonic_truncations() {
    return {{-4.0, 4.0}, {-5.5, 5.5}, {-7.0, 7.0}, {-8.5, 8.5}};
}

} // namespace

TEST_CASE("accumulation verdicts") {
    CHECK(verdict_name(AccumulationVerdict::Accumulating) == "accumulating");
    CHECK(verdict_name(AccumulationVerdict::Stable) == "stable");
    CHECK(detect_accumulation(study_with_counts({2, 5, 9, 14}), 8) ==
          AccumulationVerdict::Accumulating);
    CHECK(detect_accumulation(study_with_counts({3, 3, 3, 3}), 8) ==
          AccumulationVerdict::Stable);
    CHECK(detect_accumulation(study_with_counts({2, 3, 3, 3}), 8) ==
          AccumulationVerdict::Stable);
    // grows but never passes the threshold
    CHECK(detect_accumulation(study_with_counts({1, 2, 3, 4}), 8) ==
          AccumulationVerdict::Inconclusive);
    // non-monotone
    CHECK(detect_accumulation(study_with_counts({5, 3, 9, 14}), 8) ==
          AccumulationVerdict::Inconclusive);
}

TEST_CASE("study input validation") {
    ProblemSpec h = catalog("harmonic");
    CHECK_THROWS_AS(run_study(h, NaiveDirichlet{}, {0.0, 6.5}, {{-4, 4}, {-5, 5}}),
                    InvariantError);
    CHECK_THROWS_AS(
        run_study(h, NaiveDirichlet{}, {0.0, 6.5}, {{-4, 4}, {-5, 5}, {-4.5, 6}}),
        InvariantError);
}

TEST_CASE("oscillator study converges to the odd integers") {
    ProblemSpec h = catalog("harmonic");
    StudyOptions so;
    so.tol = 1e-7;
    StudyResult st = run_study(h, TwoSidedWeyl{2.0, 2.0}, {0.0, 6.5},
                               harmonic_truncations(), so);
    REQUIRE(st.counts.size() == 4);
    for (std::size_t i = 0; i < st.counts.size(); ++i) {
        CHECK(st.counts[i] == 3);
        CHECK(st.errors[i].empty());
    }
    REQUIRE(st.trajectories.size() == 3);
    for (int k = 0; k < 3; ++k) {
        const auto& tr = st.trajectories[k];
        CHECK(tr.converged);
        CHECK(tr.limit == doctest::Approx(2.0 * k + 1.0).epsilon(1e-6));
        for (const auto& v : tr.values)
            CHECK(v.has_value());
    }
    CHECK(detect_accumulation(st, 8) == AccumulationVerdict::Stable);

    auto mono = count_monotonicity_check(st, 3);
    for (bool ok : mono) CHECK(ok);
    auto bad = count_monotonicity_check(st, 2);
    CHECK(!bad[0]);
}

TEST_CASE("per-truncation failures are annotated, not fatal") {
    ProblemSpec fl = parse_problem(
        "[problem]\nkind = sl\ninterval = (-inf, inf)\n"
        "p = 1\nq = 0\nr = 1\nleft = lp\nright = lp\n");
    // lambda_a inside the essential spectrum: every build fails
    StudyResult st = run_study(fl, TwoSidedWeyl{1.0, 1.0}, {0.5, 1.5},
                               {{-4, 4}, {-6, 6}, {-8, 8}});
    for (std::size_t i = 0; i < st.counts.size(); ++i) {
        CHECK(st.counts[i] == -1);
        CHECK(!st.errors[i].empty());
    }
    CHECK(st.trajectories.empty());
}

TEST_CASE("overlaps climb toward one") {
    ProblemSpec h = catalog("harmonic");
    StudyOptions so;
    so.with_overlaps = true;
    StudyResult st = run_study(h, TwoSidedWeyl{1.25, 1.25}, {0.5, 1.5},
                               harmonic_truncations(), so);
    REQUIRE(st.trajectories.size() == 1);
    const auto& ov = st.trajectories[0].overlaps;
    REQUIRE(ov.size() == 3);
    for (double o : ov) {
        CHECK(std::isfinite(o));
        CHECK(o > 0.9);
        CHECK(o <= 1.0 + 1e-9);
    }
    CHECK(ov.back() > 1.0 - 1e-6);
}

TEST_CASE("residual check accepts a genuine two-sided pair") {
    ProblemSpec h = catalog("harmonic");
    SpectralWindow win{0.0, 6.5};
    RegularProblem rp = build_regular_problem(h, TwoSidedWeyl{3.25, 3.25}, win, -7.0, 7.0);
    EigenList el = eigenvalues_in_window(rp, win);
    REQUIRE(!el.values.empty());
    ResidualReport rep = residual_window_check(h, rp, el.values[0].lambda, win);
    CHECK(rep.pass);
    CHECK(rep.ratio < 1.0);
    CHECK(rep.junction_defect < 1e-5);
}

TEST_CASE("residual check accepts a genuine one-sided pair") {
    ProblemSpec h = catalog("harmonic");
    SpectralWindow win{0.0, 6.5};
    RegularProblem rp =
        build_regular_problem(h, OneSidedLP{3.25, WindowEdge::Lambda0}, win, -7.0, 7.0);
    EigenList el = eigenvalues_in_window(rp, win);
    REQUIRE(el.values.size() >= 1);
    ResidualReport rep = residual_window_check(h, rp, el.values[0].lambda, win);
    CHECK(rep.pass);
    CHECK(rep.ratio < 1.0);
}

TEST_CASE("residual check rejects a truncation artifact") {
    // on [-1, 1] the lowest Dirichlet eigenvalue sits near 2.6, far from any
    // eigenvalue of the full-line oscillator
    ProblemSpec h = catalog("harmonic");
    SpectralWindow win{2.0, 2.9};
    RegularProblem rp = build_regular_problem(h, NaiveDirichlet{}, win, -1.0, 1.0);
    EigenList el = eigenvalues_in_window(rp, win);
    REQUIRE(el.values.size() == 1);
    ResidualReport rep = residual_window_check(h, rp, el.values[0].lambda, win);
    CHECK(!rep.pass);
}
