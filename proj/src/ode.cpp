#include "gapeig/ode.hpp"
#include "gapeig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gapeig {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
double vnorm(const Vec<N>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

template <std::size_t N, class Rhs>
struct Stepper {
    Rhs rhs;
    double tol;
    double step_floor;
    double scale_floor = 1e-30;
    long steps = 0;
    long rejections = 0;

    // One adaptive step from (x, y) toward x_end; h carries the direction.
    // Returns the accepted step actually taken.
    double step(double& x, Vec<N>& y, double& h, double x_end) {
        for (;;) {
            if ((h > 0 && x + h > x_end) || (h < 0 && x + h < x_end)) h = x_end - x;
            Vec<N> k1 = rhs(x, y), k2, k3, k4, k5, k6, k7, y5;
            Vec<N> t;
            for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
            k2 = rhs(x + c2 * h, t);
            for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
            k3 = rhs(x + c3 * h, t);
            for (std::size_t i = 0; i < N; ++i)
                t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
            k4 = rhs(x + c4 * h, t);
            for (std::size_t i = 0; i < N; ++i)
                t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
            k5 = rhs(x + c5 * h, t);
            for (std::size_t i = 0; i < N; ++i)
                t[i] = y[i] +
                       h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
            k6 = rhs(x + h, t);
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y[i] +
                        h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
            k7 = rhs(x + h, y5);

            double errn = 0.0, scale = std::max({vnorm(y), vnorm(y5), scale_floor});
            for (std::size_t i = 0; i < N; ++i) {
                double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                e6 * k6[i] + e7 * k7[i]);
                errn += e * e;
            }
            errn = std::sqrt(errn) / scale;

            double taken = h;
            double factor = errn > 0.0 ? 0.9 * std::pow(tol / errn, 0.2) : 5.0;
            factor = std::clamp(factor, 0.2, 5.0);
            if (errn <= tol) {
                x += h;
                y = y5;
                h *= factor;
                ++steps;
                return taken;
            }
            ++rejections;
            h *= factor;
            if (std::fabs(h) < step_floor)
                throw PropagationError("step-size underflow", x);
        }
    }
};

std::array<double, 2> sl_rhs(const ProblemSpec& spec, double lambda, double x,
                             const std::array<double, 2>& u) {
    // y' = (py')/p ; (py')' = (q - lambda r) y
    return {u[1] / spec.p(x), (spec.q(x) - lambda * spec.r(x)) * u[0]};
}

std::array<double, 2> dirac_rhs(const ProblemSpec& spec, double lambda, double x,
                                const std::array<double, 2>& u) {
    // psi' = [[0,-1],[1,0]] (lambda r - q) psi
    auto qm = spec.q_matrix(x);
    auto rm = spec.r_matrix(x);
    double m11 = lambda * rm[0] - qm[0];
    double m12 = lambda * rm[1] - qm[1];
    double m22 = lambda * rm[2] - qm[2];
    double v1 = m11 * u[0] + m12 * u[1];
    double v2 = m12 * u[0] + m22 * u[1];
    return {-v2, v1};
}

constexpr double kBandLo = 1.0 / 16.0, kBandHi = 16.0;

void renormalize(State& s) {
    double n = s.norm();
    if (n > kBandLo && n < kBandHi) return;
    if (n == 0.0) return;
    s.u[0] /= n;
    s.u[1] /= n;
    s.sigma += std::log(n);
}

} // namespace

double State::norm() const { return std::hypot(u[0], u[1]); }

double State::angle() const {
    double a = std::atan2(u[1], u[0]);
    a = std::fmod(a, std::numbers::pi);
    if (a < 0) a += std::numbers::pi;
    return a;
}

State State::normalized() const {
    State s = *this;
    double n = norm();
    if (n > 0.0) {
        s.u[0] /= n;
        s.u[1] /= n;
        s.sigma += std::log(n);
    }
    return s;
}

std::array<double, 2> derivative(const ProblemSpec& spec, double lambda, double x,
                                 const std::array<double, 2>& u) {
    return spec.kind == Kind::SturmLiouville ? sl_rhs(spec, lambda, x, u)
                                             : dirac_rhs(spec, lambda, x, u);
}

State propagate(const ProblemSpec& spec, double lambda, const State& start, double x_target,
                const OdeOptions& opts) {
    Trajectory t = propagate_through(spec, lambda, start, {x_target}, opts);
    return t.states.back();
}

Trajectory propagate_through(const ProblemSpec& spec, double lambda, const State& start,
                             const std::vector<double>& xs, const OdeOptions& opts) {
    Trajectory traj;
    if (xs.empty()) return traj;
    double span = std::fabs(xs.back() - start.x);
    if (span == 0.0) span = 1.0;

    auto rhs = [&spec, lambda](double x, const std::array<double, 2>& u) {
        return derivative(spec, lambda, x, u);
    };
    Stepper<2, decltype(rhs)> st{rhs, opts.tol, opts.step_floor_factor * span};

    State s = start;
    for (double target : xs) {
        if (target != s.x) {
            double dir = target > s.x ? 1.0 : -1.0;
            // Initial step guess from the local rate of change.
            auto k = rhs(s.x, s.u);
            double rate = vnorm<2>(k) / std::max(s.norm(), 1e-30);
            double h = dir * std::min(std::fabs(target - s.x),
                                      std::min(0.05 * span, 0.1 / (rate + 1e-3)));
            while (s.x != target) {
                st.step(s.x, s.u, h, target);
                renormalize(s);
            }
        }
        traj.states.push_back(s);
    }
    traj.steps = st.steps;
    traj.rejections = st.rejections;
    return traj;
}

double wronskian(const State& f, const State& g) {
    if (f.x != g.x)
        throw InvariantError("wronskian of states at different positions");
    return (f.u[0] * g.u[1] - f.u[1] * g.u[0]) * std::exp(f.sigma + g.sigma);
}

double integrate_scalar(const std::function<double(double, double)>& rhs, double x0, double y0,
                        double x1, const OdeOptions& opts) {
    if (x0 == x1) return y0;
    double span = std::fabs(x1 - x0);
    auto wrapped = [&rhs](double x, const std::array<double, 1>& y) {
        return std::array<double, 1>{rhs(x, y[0])};
    };
    Stepper<1, decltype(wrapped)> st{wrapped, opts.tol, opts.step_floor_factor * span};
    st.scale_floor = 1.0; // the phase passes through zero; error is per-radian
    double x = x0;
    std::array<double, 1> y{y0};
    auto k = wrapped(x, y);
    double rate = std::fabs(k[0]) / std::max(std::fabs(y0), 1.0);
    double dir = x1 > x0 ? 1.0 : -1.0;
    double h = dir * std::min(span, std::min(0.05 * span, 0.1 / (rate + 1e-3)));
    while (x != x1) st.step(x, y, h, x1);
    return y[0];
}

} // namespace gapeig
