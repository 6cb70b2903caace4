#pragma once

#include "gapeig/problem.hpp"

#include <array>
#include <functional>
#include <vector>

namespace gapeig {

/// A point value of a solution of tau f = lambda f. The true solution
/// components are exp(sigma) * u; renormalization keeps ||u|| within
/// [2^-4, 2^4] and moves magnitude into sigma.
struct State {
    double x = 0.0;
    std::array<double, 2> u{0.0, 0.0}; // (y, p y') or (psi1, psi2)
    double sigma = 0.0;

    double norm() const;
    /// Projective direction angle in [0, pi).
    double angle() const;
    /// Rescale so ||u|| = 1, folding the magnitude into sigma.
    State normalized() const;
};

/// States recorded at requested output points, plus step statistics.
struct Trajectory {
    std::vector<State> states;
    long steps = 0;
    long rejections = 0;
};

struct OdeOptions {
    double tol = 1e-10;  // local relative error target
    double step_floor_factor = 1e-14; // floor = factor * |span|
};

/// Right-hand side of the first-order system u' = F(x) u at (x, u).
std::array<double, 2> derivative(const ProblemSpec& spec, double lambda,
                                 double x, const std::array<double, 2>& u);

/// Propagate `start` to x_target (either direction) with adaptive RK45 and
/// renormalization. Throws PropagationError on step-size underflow.
State propagate(const ProblemSpec& spec, double lambda, const State& start,
                double x_target, const OdeOptions& opts = {});

/// Propagate through an increasing or decreasing list of output points,
/// recording the State at each (start.x is not recorded).
Trajectory propagate_through(const ProblemSpec& spec, double lambda, const State& start,
                             const std::vector<double>& xs, const OdeOptions& opts = {});

/// Modified Wronskian at a common point: (f1 g2 - f2 g1) * exp(f.sigma + g.sigma).
/// For Sturm-Liouville this is f_y g_{py'} - f_{py'} g_y. Throws
/// InvariantError when f.x != g.x.
double wronskian(const State& f, const State& g);

/// Generic adaptive RK45 (Dormand-Prince 5(4)) for a scalar equation,
/// used by the Pruefer phase integration.
double integrate_scalar(const std::function<double(double, double)>& rhs,
                        double x0, double y0, double x1, const OdeOptions& opts = {});

} // namespace gapeig
