#include "gapeig/eigensolver.hpp"
#include "gapeig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gapeig {

namespace {

constexpr double kPi = std::numbers::pi;

double mod_pi(double a) {
    a = std::fmod(a, kPi);
    if (a < 0) a += kPi;
    return a;
}

/// Initial phase at a_n for a bc angle alpha, in [0, pi).
double phase_from_bc(Kind kind, double alpha) {
    return kind == Kind::SturmLiouville ? mod_pi(-alpha) : mod_pi(alpha - kPi / 2);
}

/// Target phase at b_n, lifted into (0, pi].
double target_phase(Kind kind, double beta) {
    double t = phase_from_bc(kind, beta);
    return t == 0.0 ? kPi : t;
}

double phase_rhs(const ProblemSpec& spec, double lambda, double x, double theta) {
    double s = std::sin(theta), c = std::cos(theta);
    if (spec.kind == Kind::SturmLiouville) {
        // (y, py') = rho (sin, cos)
        return c * c / spec.p(x) + (lambda * spec.r(x) - spec.q(x)) * s * s;
    }
    // (psi1, psi2) = rho (cos, sin)
    auto qm = spec.q_matrix(x);
    auto rm = spec.r_matrix(x);
    double m11 = lambda * rm[0] - qm[0];
    double m12 = lambda * rm[1] - qm[1];
    double m22 = lambda * rm[2] - qm[2];
    return m11 * c * c + 2.0 * m12 * s * c + m22 * s * s;
}

} // namespace

double end_phase(const RegularProblem& rp, double lambda, const OdeOptions& opts) {
    double theta0 = phase_from_bc(rp.spec.kind, rp.alpha_n);
    auto rhs = [&](double x, double th) { return phase_rhs(rp.spec, lambda, x, th); };
    return integrate_scalar(rhs, rp.a_n, theta0, rp.b_n, opts);
}

namespace {

/// Lattice indices k with theta0 < target + k*pi < theta1.
std::pair<long, long> lattice_range(double theta0, double theta1, double target) {
    long k_min = static_cast<long>(std::floor((theta0 - target) / kPi)) + 1;
    long k_max = static_cast<long>(std::ceil((theta1 - target) / kPi)) - 1;
    // guard against roundoff at exact multiples
    while (target + k_min * kPi <= theta0) ++k_min;
    while (target + k_max * kPi >= theta1) --k_max;
    return {k_min, k_max};
}

} // namespace

int count_in_window(const RegularProblem& rp, const SpectralWindow& window,
                    const OdeOptions& opts) {
    double theta0 = end_phase(rp, window.lambda0, opts);
    double theta1 = end_phase(rp, window.lambda1, opts);
    double target = target_phase(rp.spec.kind, rp.beta_n);
    auto [k_min, k_max] = lattice_range(theta0, theta1, target);
    return k_max >= k_min ? static_cast<int>(k_max - k_min + 1) : 0;
}

EigenList eigenvalues_in_window(const RegularProblem& rp, const SpectralWindow& window,
                                const SolveOptions& opts) {
    double theta0 = end_phase(rp, window.lambda0, opts.ode);
    double theta1 = end_phase(rp, window.lambda1, opts.ode);
    double target = target_phase(rp.spec.kind, rp.beta_n);
    auto [k_min, k_max] = lattice_range(theta0, theta1, target);

    EigenList list;
    list.window = window;
    if (k_max < k_min) return list;
    if (k_max - k_min + 1 > 10000)
        throw InvariantError("eigenvalue budget exceeded (more than 10000 in window)");

    for (long k = k_min; k <= k_max; ++k) {
        double t = target + k * kPi;
        // theta(b; lambda) is strictly increasing in lambda, so t is
        // bracketed by [lambda0, lambda1].
        double lo = window.lambda0, hi = window.lambda1;
        double glo = theta0 - t, ghi = theta1 - t;
        int depth = 0;
        // bisection, then Illinois regula falsi once the bracket is tight
        while (hi - lo > opts.tol && depth < 200) {
            double mid;
            // interleave bisection so near-vertical phase transitions cannot
            // pin the secant step against one end of the bracket
            if (hi - lo > 1e-6 || depth % 2 == 0) {
                mid = 0.5 * (lo + hi);
            } else {
                mid = (lo * ghi - hi * glo) / (ghi - glo);
                double guard = 0.01 * (hi - lo);
                mid = std::clamp(mid, lo + guard, hi - guard);
            }
            double gm = end_phase(rp, mid, opts.ode) - t;
            if (gm < 0.0) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
                ghi = gm;
            }
            ++depth;
        }
        double lambda = 0.5 * (lo + hi);
        bool edge = (lambda - window.lambda0 < opts.tol) || (window.lambda1 - lambda < opts.tol);
        list.values.push_back({lambda, static_cast<int>(k), edge, opts.tol});
    }
    return list;
}

EigenFunction eigenfunction(const RegularProblem& rp, double lambda, const SolveOptions& opts) {
    int m = opts.grid_points + (opts.grid_points % 2); // even, for Simpson
    EigenFunction f;
    f.lambda = lambda;
    f.xs.resize(m + 1);
    for (int i = 0; i <= m; ++i)
        f.xs[i] = rp.a_n + (rp.b_n - rp.a_n) * i / m;
    f.xs.front() = rp.a_n;
    f.xs.back() = rp.b_n;

    State left;
    left.x = rp.a_n;
    left.u = {std::sin(rp.alpha_n), -std::cos(rp.alpha_n)};
    State right;
    right.x = rp.b_n;
    right.u = {std::sin(rp.beta_n), -std::cos(rp.beta_n)};

    std::vector<double> fwd(f.xs.begin() + 1, f.xs.end());
    std::vector<double> bwd(f.xs.rbegin() + 1, f.xs.rend());
    Trajectory tl = propagate_through(rp.spec, lambda, left, fwd, opts.ode);
    Trajectory tr = propagate_through(rp.spec, lambda, right, bwd, opts.ode);

    std::vector<State> L(m + 1), R(m + 1);
    L[0] = left.normalized();
    R[m] = right.normalized();
    for (int i = 1; i <= m; ++i) L[i] = tl.states[i - 1].normalized();
    for (int i = 0; i < m; ++i) R[i] = tr.states[m - 1 - i].normalized();

    // Match where the product of the two incoming magnitudes is largest.  The
    // unnormalized Wronskian of the two shooting solutions is constant in x, so
    // the normalized mismatch |L x R| = |W| exp(-sigma_L - sigma_R) is smallest
    // there; that point sits at the eigenfunction peak, where neither sweep has
    // yet been contaminated by the exponentially dominant branch.
    int match = 0;
    double best = -1e300;
    for (int i = 0; i <= m; ++i) {
        double v = L[i].sigma + R[i].sigma;
        if (v > best) {
            best = v;
            match = i;
        }
    }

    const State& Lm = L[match];
    const State& Rm = R[match];
    f.residual = std::fabs(Lm.u[0] * Rm.u[1] - Lm.u[1] * Rm.u[0]);
    if (f.residual > 100.0 * opts.tol)
        throw InvariantError("lambda = " + std::to_string(lambda) +
                             " is not an eigenvalue of H_n (shooting mismatch " +
                             std::to_string(f.residual) + ")");

    double flip = (Lm.u[0] * Rm.u[0] + Lm.u[1] * Rm.u[1]) < 0.0 ? -1.0 : 1.0;
    f.w.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        double scale, s0, s1;
        if (i <= match) {
            scale = std::exp(L[i].sigma - Lm.sigma);
            s0 = L[i].u[0];
            s1 = L[i].u[1];
        } else {
            scale = flip * std::exp(R[i].sigma - Rm.sigma);
            s0 = R[i].u[0];
            s1 = R[i].u[1];
        }
        f.w[i] = {scale * s0, scale * s1};
    }

    // r-weighted Simpson normalization
    double h = (rp.b_n - rp.a_n) / m;
    double norm2 = 0.0;
    for (int i = 0; i <= m; ++i) {
        double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        double dens;
        if (rp.spec.kind == Kind::SturmLiouville) {
            dens = rp.spec.r(f.xs[i]) * f.w[i][0] * f.w[i][0];
        } else {
            auto rm = rp.spec.r_matrix(f.xs[i]);
            dens = rm[0] * f.w[i][0] * f.w[i][0] + 2 * rm[1] * f.w[i][0] * f.w[i][1] +
                   rm[2] * f.w[i][1] * f.w[i][1];
        }
        norm2 += wgt * dens;
    }
    norm2 *= h / 3.0;
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& wv : f.w) {
        wv[0] *= inv;
        wv[1] *= inv;
    }
    return f;
}

std::array<double, 2> eval_eigenfunction(const ProblemSpec& spec, const EigenFunction& f,
                                         double x) {
    if (f.xs.empty() || x < f.xs.front() || x > f.xs.back()) return {0.0, 0.0};
    auto it = std::upper_bound(f.xs.begin(), f.xs.end(), x);
    std::size_t i = it == f.xs.begin() ? 0 : static_cast<std::size_t>(it - f.xs.begin()) - 1;
    if (i + 1 >= f.xs.size()) i = f.xs.size() - 2;
    double x0 = f.xs[i], x1 = f.xs[i + 1], h = x1 - x0;
    double t = (x - x0) / h;
    // cubic Hermite per component; derivatives from the first-order system
    auto d0 = derivative(spec, f.lambda, x0, f.w[i]);
    auto d1 = derivative(spec, f.lambda, x1, f.w[i + 1]);
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    std::array<double, 2> out;
    for (int c = 0; c < 2; ++c)
        out[c] = h00 * f.w[i][c] + h10 * h * d0[c] + h01 * f.w[i + 1][c] + h11 * h * d1[c];
    return out;
}

double weighted_inner(const ProblemSpec& spec, const EigenFunction& f, const EigenFunction& g) {
    const std::size_t m = f.xs.size() - 1;
    double h = (f.xs.back() - f.xs.front()) / static_cast<double>(m);
    double acc = 0.0;
    for (std::size_t i = 0; i <= m; ++i) {
        double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        auto gv = eval_eigenfunction(spec, g, f.xs[i]);
        double dens;
        if (spec.kind == Kind::SturmLiouville) {
            dens = spec.r(f.xs[i]) * f.w[i][0] * gv[0];
        } else {
            auto rm = spec.r_matrix(f.xs[i]);
            dens = rm[0] * f.w[i][0] * gv[0] + rm[1] * (f.w[i][0] * gv[1] + f.w[i][1] * gv[0]) +
                   rm[2] * f.w[i][1] * gv[1];
        }
        acc += wgt * dens;
    }
    return acc * h / 3.0;
}

} // namespace gapeig
