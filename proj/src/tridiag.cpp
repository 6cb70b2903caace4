#include "gapeig/tridiag.hpp"
#include "gapeig/errors.hpp"

#include <cmath>
#include <limits>

namespace gapeig {

int sturm_count(const Tridiag& t, double x) {
    int count = 0;
    double d = 1.0;
    const double tiny = std::numeric_limits<double>::min();
    for (std::size_t i = 0; i < t.size(); ++i) {
        double off2 = i == 0 ? 0.0 : t.off[i - 1] * t.off[i - 1];
        d = t.diag[i] - x - off2 / d;
        if (d == 0.0) d = -tiny;
        if (d < 0.0) ++count;
    }
    return count;
}

std::vector<double> tridiag_eigs_window(const Tridiag& t, const SpectralWindow& window) {
    int c0 = sturm_count(t, window.lambda0);
    int c1 = sturm_count(t, window.lambda1);
    std::vector<double> eigs;
    eigs.reserve(static_cast<std::size_t>(std::max(0, c1 - c0)));
    for (int j = c0 + 1; j <= c1; ++j) {
        // smallest x with sturm_count(x) >= j
        double lo = window.lambda0, hi = window.lambda1;
        while (hi - lo > 1e-14 * std::max({1.0, std::fabs(lo), std::fabs(hi)})) {
            double mid = 0.5 * (lo + hi);
            if (sturm_count(t, mid) >= j) hi = mid;
            else lo = mid;
        }
        double lam = 0.5 * (lo + hi);
        // strictly-open-window semantics
        if (lam > window.lambda0 && lam < window.lambda1) eigs.push_back(lam);
    }
    return eigs;
}

namespace {

Tridiag fd_matrix(const ProblemSpec& spec, double lo, double hi, int n) {
    Tridiag t;
    double h = (hi - lo) / (n + 1);
    t.diag.resize(n);
    t.off.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        double x = lo + (i + 1) * h;
        double pm = spec.p(x - 0.5 * h);
        double pp = spec.p(x + 0.5 * h);
        t.diag[i] = (pm + pp) / (h * h) + spec.q(x);
        if (i + 1 < n) t.off[i] = -pp / (h * h);
    }
    return t;
}

} // namespace

OracleResult dense_fd_oracle(const ProblemSpec& spec, double lo, double hi, int n,
                             const SpectralWindow& window) {
    if (spec.kind != Kind::SturmLiouville)
        throw InvariantError("dense_fd_oracle supports Sturm-Liouville problems only");
    for (double x : probe_mesh(spec, 17))
        if (std::fabs(spec.r(x) - 1.0) > 1e-14)
            throw InvariantError("dense_fd_oracle requires r = 1");
    if (n < 10) throw InvariantError("dense_fd_oracle requires n >= 10");

    OracleResult res;
    res.coarse = tridiag_eigs_window(fd_matrix(spec, lo, hi, n), window);
    res.fine = tridiag_eigs_window(fd_matrix(spec, lo, hi, 2 * n), window);

    // Pair fine eigenvalues with the nearest coarse one; a pair farther
    // apart than half the local spacing is kept unextrapolated.
    for (std::size_t i = 0; i < res.fine.size(); ++i) {
        double f = res.fine[i];
        double best = std::numeric_limits<double>::infinity();
        for (double c : res.coarse)
            if (std::fabs(c - f) < std::fabs(best - f)) best = c;
        double spacing = std::numeric_limits<double>::infinity();
        if (i > 0) spacing = std::min(spacing, f - res.fine[i - 1]);
        if (i + 1 < res.fine.size()) spacing = std::min(spacing, res.fine[i + 1] - f);
        if (std::isfinite(best) && std::fabs(best - f) < 0.5 * spacing)
            res.eigenvalues.push_back((4.0 * f - best) / 3.0);
        else
            res.eigenvalues.push_back(f);
    }
    return res;
}

} // namespace gapeig
