#include "gapeig/weyl.hpp"
#include "gapeig/errors.hpp"

#include <cmath>
#include <numbers>

namespace gapeig {

namespace {

/// Circular distance of two direction angles modulo pi.
double angle_dist(double a, double b) {
    double d = std::fabs(a - b);
    d = std::fmod(d, std::numbers::pi);
    return std::min(d, std::numbers::pi - d);
}

} // namespace

State init_from_bc(const ProblemSpec& spec, Endpoint endpoint, double lambda) {
    (void)lambda;
    if (spec.cls(endpoint) != EndpointClass::Regular)
        throw SchemeMismatchError("init_from_bc requires a Regular endpoint");
    double alpha = *spec.bc_angle(endpoint);
    State s;
    s.x = spec.endpoint_x(endpoint);
    s.u = {std::sin(alpha), -std::cos(alpha)};
    s.sigma = 0.0;
    return s;
}

WeylDirection recessive_lp(const ProblemSpec& spec, Endpoint endpoint, double lambda,
                           double x_eval, const WeylOptions& opts) {
    if (spec.cls(endpoint) != EndpointClass::LimitPoint)
        throw SchemeMismatchError("recessive_lp requires a LimitPoint endpoint");

    double e = spec.endpoint_x(endpoint);
    bool infinite = !std::isfinite(e);
    double sign = endpoint == Endpoint::Right ? 1.0 : -1.0;

    double prev_angle = 0.0;
    bool have_prev = false;
    WeylDirection best{endpoint, lambda, x_eval, State{}, 0.0, false};

    for (int round = 0; round < opts.max_rounds; ++round) {
        double far;
        if (infinite) {
            far = x_eval + sign * std::ldexp(1.0, round); // distance 2^round
        } else {
            // halve the distance to the finite singular endpoint each round
            far = e - sign * std::fabs(x_eval - e) / std::ldexp(1.0, round + 1);
        }

        State start;
        start.x = far;
        start.u = {0.6, 0.8}; // generic data; the recessive branch attracts inward
        start.sigma = 0.0;
        State at = propagate(spec, lambda, start, x_eval, opts.ode);

        double dist = std::fabs(x_eval - far);
        double sigma_gain = at.normalized().sigma;
        double ang = at.angle();

        if (have_prev && angle_dist(ang, prev_angle) < opts.stab_tol && sigma_gain > 5.0) {
            best.state = at.normalized();
            best.state.sigma = 0.0;
            best.decay_rate = sigma_gain / dist;
            best.stabilized = true;
            return best;
        }
        prev_angle = ang;
        have_prev = true;

        // Oscillatory solutions show no exponential scale separation; stop
        // early once the leg is long enough to have revealed any decay.
        if (infinite && dist >= 64.0 && sigma_gain < 1.0)
            throw NonDecayingError(
                "no decaying solution toward the endpoint at lambda = " +
                std::to_string(lambda) + " (lambda appears to lie in the essential spectrum)");
    }
    throw NonDecayingError("Weyl direction did not stabilize at lambda = " +
                           std::to_string(lambda));
}

WeylDirection weyl_direction(const ProblemSpec& spec, Endpoint endpoint, double lambda,
                             double x_eval, const WeylOptions& opts) {
    if (spec.cls(endpoint) == EndpointClass::LimitPoint)
        return recessive_lp(spec, endpoint, lambda, x_eval, opts);
    State s = init_from_bc(spec, endpoint, lambda);
    if (s.x != x_eval) s = propagate(spec, lambda, s, x_eval, opts.ode);
    WeylDirection w{endpoint, lambda, x_eval, s.normalized(), 0.0, true};
    w.state.sigma = 0.0;
    return w;
}

} // namespace gapeig
