#pragma once

#include "gapeig/expr.hpp"
#include "gapeig/tridiag.hpp"
#include "gapeig/truncation.hpp"

#include <functional>
#include <map>
#include <optional>

namespace gapeig {

/// Half-line Jacobi operator on l2({0, 1, 2, ...}):
/// (H u)_k = a_{k-1} u_{k-1} + b_k u_k + a_k u_{k+1}, with a_k > 0.
struct JacobiOperator {
    std::function<double(long)> a_fn;
    std::function<double(long)> b_fn;
    // Essential-spectrum band [b_inf - 2 a_inf, b_inf + 2 a_inf] when the
    // entry limits exist; supplied by the user otherwise.
    std::optional<std::pair<double, double>> band;

    double a(long k) const;
    double b(long k) const { return b_fn(k); }

    /// Entries from expressions in the index variable k, with optional
    /// point overrides (impurities).
    static JacobiOperator from_expressions(const std::string& a_expr,
                                           const std::string& b_expr,
                                           const std::map<long, double>& b_overrides = {});

    /// Band from the entry limits probed at large k; throws when the limits
    /// do not appear to exist and no band was supplied.
    std::pair<double, double> essential_band() const;
};

struct JacobiWeylResult {
    double ratio; // u_{k_eval+1} / u_{k_eval} of the decaying solution
    long far_index;
    bool stabilized;
};

/// Decaying solution of a_{k-1}u_{k-1} + b_k u_k + a_k u_{k+1} = lambda u_k,
/// by backward recurrence from a far index, refined until the ratio at
/// k_eval stabilizes within tol. Throws NonDecayingError when lambda lies
/// in the essential band.
JacobiWeylResult jacobi_weyl_sequence(const JacobiOperator& op, double lambda, long k_eval,
                                      double tol = 1e-12);

/// (n+1)x(n+1) truncation, rows 0..n, with the last diagonal entry modified
/// to b_n + a_n * (u_{n+1}/u_n) for Weyl-generated schemes; NaiveDirichlet
/// leaves it unmodified.
Tridiag truncate_jacobi(const JacobiOperator& op, const Scheme& scheme,
                        const SpectralWindow& window, long n);

} // namespace gapeig
