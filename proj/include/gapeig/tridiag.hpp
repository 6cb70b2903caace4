#pragma once

#include "gapeig/problem.hpp"

#include <vector>

namespace gapeig {

/// Symmetric tridiagonal matrix: diag has n entries, off n-1.
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off;
    std::size_t size() const { return diag.size(); }
};

/// Number of eigenvalues strictly below x (Sturm sequence count).
int sturm_count(const Tridiag& t, double x);

/// All eigenvalues in the open window, by Sturm bisection to 1e-14 relative.
std::vector<double> tridiag_eigs_window(const Tridiag& t, const SpectralWindow& window);

struct OracleResult {
    std::vector<double> eigenvalues;   // Richardson-extrapolated over N and 2N
    std::vector<double> coarse;        // at N
    std::vector<double> fine;          // at 2N
};

/// Independent dense reference: second-order central differences for
/// -(p y')' + q y = lambda y with Dirichlet conditions on [lo, hi].
/// Restricted to Sturm-Liouville problems with r = 1. Window eigenvalues are
/// paired between the N and 2N grids by nearest value before extrapolating.
OracleResult dense_fd_oracle(const ProblemSpec& spec, double lo, double hi, int n,
                             const SpectralWindow& window);

} // namespace gapeig
