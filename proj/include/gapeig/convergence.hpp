#pragma once

#include "gapeig/eigensolver.hpp"
#include "gapeig/tridiag.hpp"
#include "gapeig/truncation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gapeig {

struct Truncation {
    double a_n;
    double b_n;
};

/// One eigenvalue followed across the truncation sequence. values is
/// aligned with the truncation list; entries are empty where the
/// trajectory had no match.
struct EigenTrajectory {
    std::vector<std::optional<double>> values;
    bool converged = false;
    double limit = 0.0; // last present value
    std::vector<double> overlaps; // consecutive-n overlaps (NaN where absent)
};

enum class AccumulationVerdict { Accumulating, Stable, Inconclusive };

std::string verdict_name(AccumulationVerdict v);

struct StudyResult {
    ProblemSpec spec;
    Scheme scheme;
    SpectralWindow window;
    std::vector<Truncation> truncations;
    std::vector<std::optional<RegularProblem>> problems;
    std::vector<std::optional<EigenList>> lists;
    std::vector<int> counts;               // -1 where the build/solve failed
    std::vector<std::string> errors;       // per-n annotation, empty when ok
    std::vector<EigenTrajectory> trajectories;
    double tol = 0.0;
};

struct StudyOptions {
    double tol = 1e-8;   // trajectory convergence tolerance
    SolveOptions solve{};
    BuildOptions build{};
    bool with_overlaps = false;
    int threads = 0;     // 0: GAPEIG_THREADS, else hardware concurrency
};

/// Build and solve each truncation, then match eigenvalues across
/// consecutive n by nearest neighbour with a guard gap of half the minimal
/// spacing. Per-n failures are annotated and the study continues.
/// Requires at least 3 truncations with a_n nonincreasing, b_n nondecreasing.
StudyResult run_study(const ProblemSpec& spec, const Scheme& scheme,
                      const SpectralWindow& window, const std::vector<Truncation>& truncations,
                      const StudyOptions& opts = {});

/// Accumulating when counts are nondecreasing, grow, and exceed threshold
/// at the final n; Stable when counts are eventually constant;
/// Inconclusive otherwise.
AccumulationVerdict detect_accumulation(const StudyResult& study, int threshold);

/// Fill per-trajectory consecutive-n eigenfunction overlaps
/// (|r-weighted inner product| of zero-extended normalized eigenfunctions).
void projection_overlap(StudyResult& study, const SolveOptions& opts = {});

struct ResidualReport {
    bool pass = false;
    double ratio = 0.0;       // ||(tau - mid) psi|| / (half_width ||psi||)
    double junction_defect = 0.0; // worst glue mismatch, relative
};

struct ResidualOptions {
    double quad_tol = 1e-8;
    double junction_tol = 1e-5; // glue mismatch above this fails the check
    SolveOptions solve{};
};

/// The variational window bound applied to the eigenpair (lambda_k,
/// eigenfunction of rp) extended by the scheme's generating solutions:
/// pass iff the extended function witnesses spectrum of H inside the window.
ResidualReport residual_window_check(const ProblemSpec& spec, const RegularProblem& rp,
                                     double lambda_k, const SpectralWindow& window,
                                     const ResidualOptions& opts = {});

/// count_n <= reference_count, per n (skipping failed truncations).
std::vector<bool> count_monotonicity_check(const StudyResult& study, int reference_count);

} // namespace gapeig
