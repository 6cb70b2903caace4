#pragma once

#include "gapeig/ode.hpp"
#include "gapeig/problem.hpp"

namespace gapeig {

/// The direction of a Weyl solution at an interior point: the recessive
/// (square-integrable) branch at a limit-point endpoint, or the
/// boundary-condition solution at a regular one.
struct WeylDirection {
    Endpoint endpoint;
    double lambda;
    double at_x;
    State state;        // unit-norm direction at at_x (sigma = 0)
    double decay_rate;  // estimated log-derivative magnitude toward the endpoint
    bool stabilized;
};

struct WeylOptions {
    double stab_tol = 1e-9;    // radians of direction-angle change between refinements
    int max_rounds = 20;       // far point doubles its distance each round
    OdeOptions ode{};
};

/// Initial State at a Regular endpoint satisfying
/// cos(alpha) y + sin(alpha) (p y') = 0: u = (sin alpha, -cos alpha).
/// Throws SchemeMismatchError when the endpoint is not Regular.
State init_from_bc(const ProblemSpec& spec, Endpoint endpoint, double lambda);

/// Direction at x_eval of the recessive solution toward a LimitPoint
/// endpoint, computed by inward propagation from a far reference point
/// pushed outward until the direction stabilizes. Throws NonDecayingError
/// when no decaying branch is found (lambda not in a spectral gap).
WeylDirection recessive_lp(const ProblemSpec& spec, Endpoint endpoint, double lambda,
                           double x_eval, const WeylOptions& opts = {});

/// Weyl direction at x_eval for either endpoint class: init_from_bc
/// propagated inward at a Regular endpoint, recessive_lp otherwise.
WeylDirection weyl_direction(const ProblemSpec& spec, Endpoint endpoint, double lambda,
                             double x_eval, const WeylOptions& opts = {});

} // namespace gapeig
