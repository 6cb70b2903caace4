#include "gapeig/truncation.hpp"
#include "gapeig/errors.hpp"

#include <cmath>
#include <numbers>

namespace gapeig {

std::string scheme_name(const Scheme& scheme) {
    if (std::holds_alternative<TwoSidedWeyl>(scheme)) return "two-sided";
    if (std::holds_alternative<OneSidedLP>(scheme)) return "one-sided";
    return "dirichlet";
}

double bc_angle_from_state(const State& s) {
    if (s.u[0] == 0.0 && s.u[1] == 0.0)
        throw InvariantError("bc angle of a zero state");
    double alpha = std::atan2(-s.u[0], s.u[1]);
    alpha = std::fmod(alpha, std::numbers::pi);
    if (alpha < 0) alpha += std::numbers::pi;
    return alpha;
}

RegularProblem build_regular_problem(const ProblemSpec& spec, const Scheme& scheme,
                                     const SpectralWindow& window, double a_n, double b_n,
                                     const BuildOptions& opts) {
    if (!(window.lambda0 < window.lambda1))
        throw InvariantError("spectral window requires lambda0 < lambda1");
    if (!(std::isfinite(a_n) && std::isfinite(b_n) && a_n < b_n))
        throw InvariantError("truncation interval must be finite with a_n < b_n");
    if (a_n < spec.a || b_n > spec.b)
        throw InvariantError("truncation interval must lie within (a, b)");

    RegularProblem rp;
    rp.spec = spec;
    rp.a_n = a_n;
    rp.b_n = b_n;
    rp.provenance = scheme;

    auto in_window = [&](double l) { return l >= window.lambda0 && l <= window.lambda1; };

    if (auto* two = std::get_if<TwoSidedWeyl>(&scheme)) {
        if (!in_window(two->lambda_a) || !in_window(two->lambda_b))
            throw InvariantError("TwoSidedWeyl requires lambda_a, lambda_b in [lambda0, lambda1]");
        rp.left_generator = weyl_direction(spec, Endpoint::Left, two->lambda_a, a_n, opts.weyl);
        rp.right_generator = weyl_direction(spec, Endpoint::Right, two->lambda_b, b_n, opts.weyl);
        rp.alpha_n = bc_angle_from_state(rp.left_generator->state);
        rp.beta_n = bc_angle_from_state(rp.right_generator->state);
    } else if (auto* one = std::get_if<OneSidedLP>(&scheme)) {
        if (spec.right_class != EndpointClass::LimitPoint)
            throw SchemeMismatchError(
                "one-sided scheme requires the right endpoint to be limit point");
        if (!in_window(one->lambda_a))
            throw InvariantError("OneSidedLP requires lambda_a in [lambda0, lambda1]");
        double lambda_edge =
            one->edge == WindowEdge::Lambda0 ? window.lambda0 : window.lambda1;
        rp.left_generator = weyl_direction(spec, Endpoint::Left, one->lambda_a, a_n, opts.weyl);
        // v = psi_a(lambda_edge), carried across [a_n, b_n]; only the
        // renormalized direction matters at b_n.
        WeylDirection edge_dir =
            weyl_direction(spec, Endpoint::Left, lambda_edge, a_n, opts.weyl);
        State at_b = propagate(spec, lambda_edge, edge_dir.state, b_n, opts.weyl.ode);
        WeylDirection right{Endpoint::Left, lambda_edge, b_n, at_b.normalized(),
                            edge_dir.decay_rate, edge_dir.stabilized};
        right.state.sigma = 0.0;
        rp.right_generator = right;
        rp.alpha_n = bc_angle_from_state(rp.left_generator->state);
        rp.beta_n = bc_angle_from_state(rp.right_generator->state);
    } else {
        rp.alpha_n = 0.0;
        rp.beta_n = 0.0;
    }
    return rp;
}

std::vector<std::pair<double, double>> default_truncations(const ProblemSpec& spec,
                                                           double base, int count) {
    const double s = std::numbers::sqrt2;
    std::vector<std::pair<double, double>> out;
    for (int j = 0; j < count; ++j) {
        double grow = base * std::pow(s, j);
        double an, bn;
        if (!std::isfinite(spec.a)) {
            an = -grow;
        } else if (spec.left_class == EndpointClass::Regular) {
            an = std::max(spec.a, -grow);
        } else {
            // finite limit-point endpoint: approach it geometrically
            double d0 = std::isfinite(spec.b) ? 0.25 * (spec.b - spec.a) : 1.0;
            an = spec.a + d0 / std::pow(s, j);
        }
        if (!std::isfinite(spec.b)) {
            bn = grow;
        } else if (spec.right_class == EndpointClass::Regular) {
            bn = std::min(spec.b, grow);
        } else {
            double d0 = std::isfinite(spec.a) ? 0.25 * (spec.b - spec.a) : 1.0;
            bn = spec.b - d0 / std::pow(s, j);
        }
        out.emplace_back(an, bn);
    }
    return out;
}

} // namespace gapeig
