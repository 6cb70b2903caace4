#include "gapeig/jacobi.hpp"
#include "gapeig/errors.hpp"

#include <cmath>

namespace gapeig {

double JacobiOperator::a(long k) const {
    double v = a_fn(k);
    if (!(v > 0.0))
        throw InvariantError("Jacobi off-diagonal a_" + std::to_string(k) +
                             " must be positive, got " + std::to_string(v));
    return v;
}

JacobiOperator JacobiOperator::from_expressions(const std::string& a_expr,
                                                const std::string& b_expr,
                                                const std::map<long, double>& b_overrides) {
    Expr a = Expr::parse(a_expr, "k");
    Expr b = Expr::parse(b_expr, "k");
    JacobiOperator op;
    op.a_fn = [a](long k) { return a(static_cast<double>(k)); };
    op.b_fn = [b, b_overrides](long k) {
        auto it = b_overrides.find(k);
        return it != b_overrides.end() ? it->second : b(static_cast<double>(k));
    };
    return op;
}

std::pair<double, double> JacobiOperator::essential_band() const {
    if (band) return *band;
    // probe at doubling indices; accept when the successive differences
    // shrink geometrically and extrapolate the tail
    auto limit_of = [this](bool off_diag) {
        const long probes[] = {1 << 20, 1 << 21, 1 << 22};
        double v1 = off_diag ? a(probes[0]) : b(probes[0]);
        double v2 = off_diag ? a(probes[1]) : b(probes[1]);
        double v3 = off_diag ? a(probes[2]) : b(probes[2]);
        double d1 = v2 - v1, d2 = v3 - v2;
        double scale = std::max({1.0, std::fabs(v1), std::fabs(v3)});
        if (std::fabs(d2) < 1e-12 * scale) return v3;
        double q = d2 / d1;
        if (!(std::fabs(q) < 0.75) || std::fabs(d2) > 0.1 * scale)
            throw InvariantError("Jacobi entries have no detectable limits; "
                                 "supply the essential band explicitly");
        return v3 + d2 * q / (1.0 - q);
    };
    double a_inf = limit_of(true);
    double b_inf = limit_of(false);
    return {b_inf - 2.0 * a_inf, b_inf + 2.0 * a_inf};
}

namespace {

/// Ratio u_{k_eval+1}/u_{k_eval} after backward recurrence from far_index.
double backward_ratio(const JacobiOperator& op, double lambda, long k_eval, long far_index) {
    // u_{far+1} = 0, u_far = 1 imposes an arbitrary condition far out; the
    // decaying branch dominates the recurrence backward.
    double up1 = 0.0; // u_{k+1}
    double uk = 1.0;  // u_k
    for (long k = far_index; k > k_eval; --k) {
        double um1 = ((lambda - op.b(k)) * uk - op.a(k) * up1) / op.a(k - 1);
        up1 = uk;
        uk = um1;
        double mag = std::max(std::fabs(uk), std::fabs(up1));
        if (mag > 1e100 || (mag < 1e-100 && mag > 0.0)) {
            uk /= mag;
            up1 /= mag;
        }
    }
    if (uk == 0.0)
        throw NonDecayingError("backward recurrence hit a node at k_eval");
    return up1 / uk;
}

} // namespace

JacobiWeylResult jacobi_weyl_sequence(const JacobiOperator& op, double lambda, long k_eval,
                                      double tol) {
    auto [band_lo, band_hi] = op.essential_band();
    if (lambda >= band_lo && lambda <= band_hi)
        throw NonDecayingError("lambda = " + std::to_string(lambda) +
                               " lies in the essential band [" + std::to_string(band_lo) +
                               ", " + std::to_string(band_hi) + "]");

    double prev = 0.0;
    bool have_prev = false;
    for (int round = 0; round < 24; ++round) {
        long far = k_eval + 32L * (1L << round);
        double ratio = backward_ratio(op, lambda, k_eval, far);
        if (have_prev && std::fabs(ratio - prev) < tol) {
            if (std::fabs(ratio) >= 1.0)
                throw NonDecayingError("stabilized ratio is not decaying (|ratio| >= 1)");
            return {ratio, far, true};
        }
        prev = ratio;
        have_prev = true;
    }
    throw NonDecayingError("Weyl ratio did not stabilize at lambda = " +
                           std::to_string(lambda));
}

Tridiag truncate_jacobi(const JacobiOperator& op, const Scheme& scheme,
                        const SpectralWindow& window, long n) {
    if (n < 2) throw InvariantError("truncate_jacobi requires n >= 2");
    Tridiag t;
    t.diag.resize(n + 1);
    t.off.resize(n);
    for (long k = 0; k <= n; ++k) {
        t.diag[k] = op.b(k);
        if (k < n) t.off[k] = op.a(k);
    }

    if (std::holds_alternative<NaiveDirichlet>(scheme)) return t;

    double ratio;
    if (auto* two = std::get_if<TwoSidedWeyl>(&scheme)) {
        ratio = jacobi_weyl_sequence(op, two->lambda_b, n).ratio;
    } else {
        // one-sided: the boundary-condition solution from k = 0 at the
        // window edge, carried to the corner by forward recurrence
        const auto& one = std::get<OneSidedLP>(scheme);
        double lambda = one.edge == WindowEdge::Lambda0 ? window.lambda0 : window.lambda1;
        double uk = 1.0;
        double up1 = (lambda - op.b(0)) / op.a(0);
        for (long k = 1; k <= n; ++k) {
            double next = ((lambda - op.b(k)) * up1 - op.a(k - 1) * uk) / op.a(k);
            uk = up1;
            up1 = next;
            double mag = std::max(std::fabs(uk), std::fabs(up1));
            if (mag > 1e100) {
                uk /= mag;
                up1 /= mag;
            }
        }
        if (uk == 0.0)
            throw NonDecayingError("boundary solution vanishes at the corner index");
        ratio = up1 / uk;
    }
    // eliminate f_{n+1} via the discrete Wronskian condition
    // W_n(u, f) = a_n (u_n f_{n+1} - u_{n+1} f_n) = 0
    t.diag[n] += op.a(n) * ratio;
    return t;
}

} // namespace gapeig
