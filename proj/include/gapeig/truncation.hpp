#pragma once

#include "gapeig/problem.hpp"
#include "gapeig/weyl.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace gapeig {

/// Which boundary-condition generators to use for the truncated operators.
struct TwoSidedWeyl {
    double lambda_a;
    double lambda_b;
};
enum class WindowEdge { Lambda0, Lambda1 };
struct OneSidedLP {
    double lambda_a;
    WindowEdge edge = WindowEdge::Lambda0;
};
struct NaiveDirichlet {};

using Scheme = std::variant<TwoSidedWeyl, OneSidedLP, NaiveDirichlet>;

std::string scheme_name(const Scheme& scheme);

/// A truncated operator H_n: tau restricted to [a_n, b_n] with separated
/// boundary conditions at angles alpha_n, beta_n.
struct RegularProblem {
    ProblemSpec spec;
    double a_n, b_n;
    double alpha_n, beta_n; // in [0, pi)
    Scheme provenance;
    // Generating directions, when Weyl-generated (unit states at a_n / b_n,
    // with the lambda each solves).
    std::optional<WeylDirection> left_generator;
    std::optional<WeylDirection> right_generator;
};

/// The angle alpha in [0, pi) with cos(alpha) u1 + sin(alpha) u2 = 0, so the
/// state s itself satisfies the condition it induces. Throws on a zero state.
double bc_angle_from_state(const State& s);

struct BuildOptions {
    double tol = 1e-10;
    WeylOptions weyl{};
};

/// Build H_n on [a_n, b_n] for the given scheme and window. Throws
/// SchemeMismatchError when OneSidedLP is requested but the right endpoint
/// is not LimitPoint, and propagates NonDecayingError from the Weyl layer.
RegularProblem build_regular_problem(const ProblemSpec& spec, const Scheme& scheme,
                                     const SpectralWindow& window, double a_n, double b_n,
                                     const BuildOptions& opts = {});

/// Interval endpoints for a default truncation sequence: geometric growth
/// (factor sqrt(2)) clipped at finite endpoints.
std::vector<std::pair<double, double>> default_truncations(const ProblemSpec& spec,
                                                           double base, int count);

} // namespace gapeig
