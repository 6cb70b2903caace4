#pragma once

#include "gapeig/truncation.hpp"

#include <vector>

namespace gapeig {

struct Eigenvalue {
    double lambda;
    int prufer_index;    // lattice index of the phase target
    bool edge_adjacent;  // within tol of a window edge
    double refine_tol;
};

struct EigenList {
    SpectralWindow window;
    std::vector<Eigenvalue> values; // strictly increasing, inside the open window
};

/// Normalized eigenfunction samples on a uniform grid over [a_n, b_n].
/// w holds the physical pair (y, p y') or (psi1, psi2); the samples are
/// normalized to 1 in the r-weighted L2 norm. residual is the relative
/// Wronskian mismatch of the two shooting branches at the match point.
struct EigenFunction {
    double lambda;
    std::vector<double> xs;
    std::vector<std::array<double, 2>> w;
    double residual;
};

struct SolveOptions {
    double tol = 1e-10;     // eigenvalue refinement tolerance
    int grid_points = 2000; // eigenfunction sample intervals (made even)
    OdeOptions ode{};
};

/// Continuous Pruefer phase at b_n for the shooting problem started from
/// the alpha_n condition at a_n.
double end_phase(const RegularProblem& rp, double lambda, const OdeOptions& opts = {});

/// Number of eigenvalues of H_n in the open window, by phase counting.
int count_in_window(const RegularProblem& rp, const SpectralWindow& window,
                    const OdeOptions& opts = {});

/// All eigenvalues in the open window, bracketed by the counting function
/// and refined to |dlambda| < tol. Throws when the count exceeds 10000.
EigenList eigenvalues_in_window(const RegularProblem& rp, const SpectralWindow& window,
                                const SolveOptions& opts = {});

/// Eigenfunction by two-sided shooting, matched where the smaller incoming
/// magnitude is largest. Throws InvariantError when lambda is not an
/// eigenvalue of H_n (mismatch residual above 100*tol).
EigenFunction eigenfunction(const RegularProblem& rp, double lambda,
                            const SolveOptions& opts = {});

/// Hermite evaluation of eigenfunction samples at an arbitrary x inside the
/// sample range; returns {0, 0} outside (zero extension).
std::array<double, 2> eval_eigenfunction(const ProblemSpec& spec, const EigenFunction& f,
                                         double x);

/// r-weighted inner product, integrated on f's grid with g evaluated by
/// Hermite interpolation and extended by zero outside its own domain.
double weighted_inner(const ProblemSpec& spec, const EigenFunction& f, const EigenFunction& g);

} // namespace gapeig
