#pragma once

#include "gapeig/expr.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace gapeig {

enum class Kind { SturmLiouville, Dirac };
enum class EndpointClass { Regular, LimitPoint };
enum class Endpoint { Left, Right };

/// An operator: (1/r)(-(p y')' + q y) or the 2x2 Dirac system
/// (1/r)(i sigma2 d/dx + q) on the interval (a, b).
struct ProblemSpec {
    Kind kind = Kind::SturmLiouville;
    double a = 0.0; // may be -inf
    double b = 0.0; // may be +inf

    // Sturm-Liouville coefficients.
    Expr p, q, r;
    // Dirac coefficients (symmetric 2x2 fields).
    Expr q11, q12, q22, r11, r12, r22;

    EndpointClass left_class = EndpointClass::Regular;
    EndpointClass right_class = EndpointClass::Regular;
    std::optional<double> left_bc_angle;  // in [0, pi), present iff Regular
    std::optional<double> right_bc_angle;

    EndpointClass cls(Endpoint e) const {
        return e == Endpoint::Left ? left_class : right_class;
    }
    double endpoint_x(Endpoint e) const { return e == Endpoint::Left ? a : b; }
    std::optional<double> bc_angle(Endpoint e) const {
        return e == Endpoint::Left ? left_bc_angle : right_bc_angle;
    }

    /// q and r evaluated as symmetric 2x2 matrices (Dirac only).
    std::array<double, 3> q_matrix(double x) const { return {q11(x), q12(x), q22(x)}; }
    std::array<double, 3> r_matrix(double x) const { return {r11(x), r12(x), r22(x)}; }
};

/// A window (lambda0, lambda1) of the spectral axis.
struct SpectralWindow {
    double lambda0;
    double lambda1;
    double mid() const { return 0.5 * (lambda0 + lambda1); }
    double half_width() const { return 0.5 * (lambda1 - lambda0); }
};

/// Parse the line-oriented problem-file format and validate all invariants
/// on a coarse probe mesh. Throws ParseError / InvariantError.
ProblemSpec parse_problem(const std::string& text);

/// Render back to problem-file text; parse_problem(render(s)) agrees with s.
std::string render(const ProblemSpec& spec);

/// Built-in reference problems: harmonic, coulomb_l1, mathieu_impurity,
/// dirac_well, dirichlet_box. Unknown names throw InvariantError listing
/// the available keys.
ProblemSpec catalog(const std::string& name);

/// Keys accepted by catalog(), in a fixed order.
std::vector<std::string> catalog_names();

/// Validate ProblemSpec invariants on a probe mesh of `n` interior points.
/// Throws InvariantError with a description of the first violation.
void validate(const ProblemSpec& spec, int n = 128);

/// Interior probe points of (a, b), clipping infinite ends.
std::vector<double> probe_mesh(const ProblemSpec& spec, int n);

} // namespace gapeig
