#include "gapeig/convergence.hpp"
#include "gapeig/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <thread>

namespace gapeig {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInfty = std::numeric_limits<double>::infinity();

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("GAPEIG_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

double min_spacing(const EigenList& list) {
    if (list.values.size() < 2)
        return kInfty;
    double m = kInfty;
    for (std::size_t i = 1; i < list.values.size(); ++i)
        m = std::min(m, list.values[i].lambda - list.values[i - 1].lambda);
    return m;
}

} // namespace

std::string verdict_name(AccumulationVerdict v) {
    switch (v) {
    case AccumulationVerdict::Accumulating: return "accumulating";
    case AccumulationVerdict::Stable: return "stable";
    default: return "inconclusive";
    }
}

StudyResult run_study(const ProblemSpec& spec, const Scheme& scheme,
                      const SpectralWindow& window, const std::vector<Truncation>& truncations,
                      const StudyOptions& opts) {
    if (truncations.size() < 3)
        throw InvariantError("a study needs at least 3 truncations");
    for (std::size_t i = 1; i < truncations.size(); ++i)
        if (truncations[i].a_n > truncations[i - 1].a_n ||
            truncations[i].b_n < truncations[i - 1].b_n)
            throw InvariantError("truncations must be nested (a_n nonincreasing, "
                                 "b_n nondecreasing)");

    StudyResult study;
    study.spec = spec;
    study.scheme = scheme;
    study.window = window;
    study.truncations = truncations;
    study.tol = opts.tol;
    const std::size_t n = truncations.size();
    study.problems.resize(n);
    study.lists.resize(n);
    study.counts.assign(n, -1);
    study.errors.assign(n, "");

    auto solve_one = [&](std::size_t i) {
        try {
            RegularProblem rp = build_regular_problem(spec, scheme, window, truncations[i].a_n,
                                                      truncations[i].b_n, opts.build);
            EigenList list = eigenvalues_in_window(rp, window, opts.solve);
            study.problems[i] = std::move(rp);
            study.counts[i] = static_cast<int>(list.values.size());
            study.lists[i] = std::move(list);
        } catch (const std::exception& e) {
            study.errors[i] = e.what();
        }
    };

    int threads = resolve_threads(opts.threads);
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) solve_one(i);
    } else {
        for (std::size_t begin = 0; begin < n; begin += threads) {
            std::vector<std::future<void>> batch;
            std::size_t end = std::min(n, begin + threads);
            for (std::size_t i = begin; i < end; ++i)
                batch.push_back(std::async(std::launch::async, solve_one, i));
            for (auto& f : batch) f.get();
        }
    }

    // Nearest-neighbour trajectory matching with a guard gap.
    for (std::size_t i = 0; i < n; ++i) {
        if (!study.lists[i]) continue;
        const EigenList& list = *study.lists[i];
        double guard = 0.5 * std::min(min_spacing(list), window.lambda1 - window.lambda0);
        std::vector<bool> taken(list.values.size(), false);

        struct Cand {
            double dist;
            std::size_t traj;
            std::size_t idx;
        };
        std::vector<Cand> cands;
        for (std::size_t t = 0; t < study.trajectories.size(); ++t) {
            const auto& vals = study.trajectories[t].values;
            // last present value
            double last = kNaN;
            for (auto it = vals.rbegin(); it != vals.rend(); ++it)
                if (it->has_value()) {
                    last = **it;
                    break;
                }
            if (std::isnan(last)) continue;
            for (std::size_t j = 0; j < list.values.size(); ++j) {
                double d = std::fabs(list.values[j].lambda - last);
                if (d < guard) cands.push_back({d, t, j});
            }
        }
        std::sort(cands.begin(), cands.end(),
                  [](const Cand& a, const Cand& b) { return a.dist < b.dist; });
        std::vector<bool> traj_matched(study.trajectories.size(), false);
        for (const Cand& c : cands) {
            if (taken[c.idx] || traj_matched[c.traj]) continue;
            taken[c.idx] = true;
            traj_matched[c.traj] = true;
            study.trajectories[c.traj].values.resize(i + 1);
            study.trajectories[c.traj].values[i] = list.values[c.idx].lambda;
        }
        for (std::size_t j = 0; j < list.values.size(); ++j) {
            if (taken[j]) continue;
            EigenTrajectory t;
            t.values.resize(i + 1);
            t.values[i] = list.values[j].lambda;
            study.trajectories.push_back(std::move(t));
        }
        for (auto& t : study.trajectories) t.values.resize(i + 1);
    }
    for (auto& t : study.trajectories) t.values.resize(n);

    for (auto& t : study.trajectories) {
        std::vector<double> present;
        for (const auto& v : t.values)
            if (v) present.push_back(*v);
        if (!present.empty()) t.limit = present.back();
        std::size_t m = present.size();
        t.converged = m >= 3 && std::fabs(present[m - 1] - present[m - 2]) < opts.tol &&
                      std::fabs(present[m - 2] - present[m - 3]) < opts.tol;
    }
    std::sort(study.trajectories.begin(), study.trajectories.end(),
              [](const EigenTrajectory& a, const EigenTrajectory& b) { return a.limit < b.limit; });

    if (opts.with_overlaps) projection_overlap(study, opts.solve);
    return study;
}

AccumulationVerdict detect_accumulation(const StudyResult& study, int threshold) {
    std::vector<int> counts;
    for (int c : study.counts)
        if (c >= 0) counts.push_back(c);
    if (counts.size() < 2) return AccumulationVerdict::Inconclusive;
    bool nondecreasing = true;
    for (std::size_t i = 1; i < counts.size(); ++i)
        if (counts[i] < counts[i - 1]) nondecreasing = false;
    if (nondecreasing && counts.back() > threshold && counts.back() > counts.front())
        return AccumulationVerdict::Accumulating;
    if (counts[counts.size() - 1] == counts[counts.size() - 2])
        return AccumulationVerdict::Stable;
    return AccumulationVerdict::Inconclusive;
}

void projection_overlap(StudyResult& study, const SolveOptions& opts) {
    const std::size_t n = study.truncations.size();
    for (auto& traj : study.trajectories) {
        traj.overlaps.assign(n > 0 ? n - 1 : 0, kNaN);
        std::vector<std::optional<EigenFunction>> funcs(n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!traj.values[i] || !traj.values[i + 1]) continue;
            if (!study.problems[i] || !study.problems[i + 1]) continue;
            try {
                for (std::size_t j : {i, i + 1})
                    if (!funcs[j])
                        funcs[j] = eigenfunction(*study.problems[j], *traj.values[j], opts);
                // the inner (smaller) interval carries the quadrature grid;
                // zero extension outside either domain
                traj.overlaps[i] =
                    std::fabs(weighted_inner(study.spec, *funcs[i], *funcs[i + 1]));
            } catch (const std::exception&) {
                // leave NaN; the trajectory value was not a clean eigenpair
            }
        }
    }
}

namespace {

/// Integral of the r-weighted square of the outward continuation of the
/// unit direction d0 (magnitude 1 at d0.x) toward the given endpoint.
/// Throws NonDecayingError when the tail does not come under control.
double tail_weight(const ProblemSpec& spec, Endpoint end, double lambda, const State& d0,
                   double quad_tol, const OdeOptions& ode) {
    double e = spec.endpoint_x(end);
    bool infinite = !std::isfinite(e);
    double dir = end == Endpoint::Right ? 1.0 : -1.0;

    auto density = [&](const State& s) {
        double m = std::exp(2.0 * s.sigma);
        if (spec.kind == Kind::SturmLiouville)
            return m * spec.r(s.x) * s.u[0] * s.u[0];
        auto rm = spec.r_matrix(s.x);
        return m * (rm[0] * s.u[0] * s.u[0] + 2 * rm[1] * s.u[0] * s.u[1] +
                    rm[2] * s.u[1] * s.u[1]);
    };

    State s = d0; // unit, sigma = 0
    double total = 0.0;
    double width = infinite ? 0.5 : std::fabs(d0.x - e) * 0.5;
    double prev_chunk = kInfty;
    for (int chunk = 0; chunk < 200; ++chunk) {
        double x_to = infinite ? s.x + dir * width : e + (s.x - e) * 0.5;
        const int ns = 16;
        std::vector<double> targets(ns);
        for (int i = 1; i <= ns; ++i)
            targets[i - 1] = s.x + (x_to - s.x) * i / static_cast<double>(ns);
        double h = (x_to - s.x) / ns;
        double contrib = density(s);
        Trajectory tr = propagate_through(spec, lambda, s, targets, ode);
        for (int i = 0; i < ns; ++i) {
            double wgt = (i == ns - 1) ? 1.0 : (i % 2 == 0 ? 4.0 : 2.0);
            contrib += wgt * density(tr.states[i]);
        }
        contrib *= std::fabs(h) / 3.0;
        total += contrib;
        s = tr.states.back();

        double floor = quad_tol * std::max(total, 1e-300);
        if (contrib < 0.01 * floor) return total;
        if (std::exp(2.0 * s.sigma) < 1e-60) return total;
        // geometric tail bound once the chunks decay
        if (contrib < prev_chunk) {
            double q = contrib / prev_chunk;
            if (contrib * q / (1.0 - q) < floor) return total;
        }
        prev_chunk = contrib;
        if (infinite && width < 8.0) width *= 2.0;
    }
    throw NonDecayingError("tail bound not controllable toward " +
                           std::string(end == Endpoint::Left ? "left" : "right") +
                           " endpoint at lambda = " + std::to_string(lambda));
}

struct Glue {
    double gamma;
    double defect; // norm of the unmatched remainder at the junction
};

Glue glue_to_direction(const std::array<double, 2>& value, const std::array<double, 2>& dir) {
    double g = value[0] * dir[0] + value[1] * dir[1];
    double r0 = value[0] - g * dir[0];
    double r1 = value[1] - g * dir[1];
    return {g, std::hypot(r0, r1)};
}

} // namespace

ResidualReport residual_window_check(const ProblemSpec& spec, const RegularProblem& rp,
                                     double lambda_k, const SpectralWindow& window,
                                     const ResidualOptions& opts) {
    if (!(window.lambda0 < window.lambda1))
        throw InvariantError("residual check requires a window of positive width");
    const double c = window.mid();
    const double w = window.half_width();

    EigenFunction inner = eigenfunction(rp, lambda_k, opts.solve);
    const std::size_t m = inner.xs.size() - 1;
    const double h = (rp.b_n - rp.a_n) / static_cast<double>(m);

    ResidualReport rep;

    auto r_quad = [&](double x, const std::array<double, 2>& v,
                      const std::array<double, 2>& g) {
        if (spec.kind == Kind::SturmLiouville) return spec.r(x) * v[0] * g[0];
        auto rm = spec.r_matrix(x);
        return rm[0] * v[0] * g[0] + rm[1] * (v[0] * g[1] + v[1] * g[0]) + rm[2] * v[1] * g[1];
    };

    // Generating directions; NaiveDirichlet has none, so the window
    // midpoint Weyl solutions are the only honest tails available.
    WeylDirection left = rp.left_generator ? *rp.left_generator
                                           : weyl_direction(spec, Endpoint::Left, c, rp.a_n);
    bool one_sided = std::holds_alternative<OneSidedLP>(rp.provenance);

    double num = 0.0; // ||(tau - c) psi||^2
    double den = 0.0; // ||psi||^2

    if (!one_sided) {
        WeylDirection right = rp.right_generator
                                  ? *rp.right_generator
                                  : weyl_direction(spec, Endpoint::Right, c, rp.b_n);
        // psi = gamma_a u | inner | gamma_b v, matching value and
        // quasi-derivative at both junctions.
        Glue ga = glue_to_direction(inner.w.front(), left.state.u);
        Glue gb = glue_to_direction(inner.w.back(), right.state.u);
        rep.junction_defect = std::max(ga.defect, gb.defect);
        if (rep.junction_defect > opts.junction_tol) {
            rep.ratio = kInfty;
            rep.pass = false;
            return rep;
        }
        double tl = tail_weight(spec, Endpoint::Left, left.lambda, left.state, opts.quad_tol,
                                opts.solve.ode);
        double tr = tail_weight(spec, Endpoint::Right, right.lambda, right.state, opts.quad_tol,
                                opts.solve.ode);
        double wl = ga.gamma * ga.gamma * tl;
        double wr = gb.gamma * gb.gamma * tr;
        num = (lambda_k - c) * (lambda_k - c) * 1.0 +
              (left.lambda - c) * (left.lambda - c) * wl +
              (right.lambda - c) * (right.lambda - c) * wr;
        den = 1.0 + wl + wr;
    } else {
        // psi = gamma_a u | inner - gamma_b v | 0, with v = psi_a(lambda_edge)
        // carried across the interval; v cancels the inner function at b_n.
        const WeylDirection& vdir = *rp.right_generator;
        double lambda_edge = vdir.lambda;

        Glue gb = glue_to_direction(inner.w.back(), vdir.state.u);
        rep.junction_defect = gb.defect;
        if (gb.defect > opts.junction_tol) {
            rep.ratio = kInfty;
            rep.pass = false;
            return rep;
        }

        // Sample v over the inner grid by forward propagation from a_n,
        // where the edge solution is recessive (backward propagation from
        // b_n would be swamped by the branch growing to the left), then
        // scale the whole trajectory so gamma_b v(b_n) matches the glue.
        WeylDirection va = weyl_direction(spec, Endpoint::Left, lambda_edge, rp.a_n);
        State vstart;
        vstart.x = rp.a_n;
        vstart.u = va.state.u;
        std::vector<double> fwd(inner.xs.begin() + 1, inner.xs.end());
        Trajectory tv = propagate_through(spec, lambda_edge, vstart, fwd, opts.solve.ode);
        const State& vb = tv.states.back();
        double vb_norm = vb.norm();
        double along = (vdir.state.u[0] * vb.u[0] + vdir.state.u[1] * vb.u[1]) / vb_norm;
        std::vector<std::array<double, 2>> v(m + 1);
        {
            double s0 = gb.gamma * along / vb_norm * std::exp(-vb.sigma);
            v[0] = {s0 * vstart.u[0], s0 * vstart.u[1]};
        }
        for (std::size_t i = 1; i <= m; ++i) {
            const State& s = tv.states[i - 1];
            double scale = gb.gamma * along / vb_norm * std::exp(s.sigma - vb.sigma);
            v[i] = {scale * s.u[0], scale * s.u[1]};
        }

        double num_inner = 0.0, den_inner = 0.0;
        for (std::size_t i = 0; i <= m; ++i) {
            double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            std::array<double, 2> psi{inner.w[i][0] - v[i][0], inner.w[i][1] - v[i][1]};
            std::array<double, 2> g{(lambda_k - c) * inner.w[i][0] - (lambda_edge - c) * v[i][0],
                                    (lambda_k - c) * inner.w[i][1] - (lambda_edge - c) * v[i][1]};
            num_inner += wgt * r_quad(inner.xs[i], g, g);
            den_inner += wgt * r_quad(inner.xs[i], psi, psi);
        }
        num_inner *= h / 3.0;
        den_inner *= h / 3.0;

        std::array<double, 2> at_a{inner.w.front()[0] - v.front()[0],
                                   inner.w.front()[1] - v.front()[1]};
        Glue ga = glue_to_direction(at_a, left.state.u);
        rep.junction_defect = std::max(rep.junction_defect, ga.defect);
        if (ga.defect > opts.junction_tol) {
            rep.ratio = kInfty;
            rep.pass = false;
            return rep;
        }
        double tl = tail_weight(spec, Endpoint::Left, left.lambda, left.state, opts.quad_tol,
                                opts.solve.ode);
        double wl = ga.gamma * ga.gamma * tl;
        num = num_inner + (left.lambda - c) * (left.lambda - c) * wl;
        den = den_inner + wl;
    }

    rep.ratio = std::sqrt(num / den) / w;
    rep.pass = rep.ratio < 1.0;
    return rep;
}

std::vector<bool> count_monotonicity_check(const StudyResult& study, int reference_count) {
    std::vector<bool> pass;
    pass.reserve(study.counts.size());
    for (int c : study.counts)
        pass.push_back(c < 0 || c <= reference_count);
    return pass;
}

} // namespace gapeig
