// gapeig: eigenvalues of singular Sturm-Liouville, Dirac, and Jacobi
// operators in spectral-gap windows, via regular truncations with
// Weyl-solution boundary conditions.

#include "gapeig/convergence.hpp"
#include "gapeig/errors.hpp"
#include "gapeig/jacobi.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace gapeig;

namespace {

// ---------------------------------------------------------------------
// Deterministic JSON emission: fixed field order, floats at 17
// significant digits, so identical configs give byte-identical output.

std::string fmt(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

struct JsonArr;

struct JsonObj {
    std::ostringstream os;
    bool first = true;
    void sep() {
        if (!first) os << ",";
        first = false;
    }
    JsonObj& field(const std::string& k, const std::string& raw) {
        sep();
        os << quoted(k) << ":" << raw;
        return *this;
    }
    JsonObj& field(const std::string& k, double v) { return field(k, fmt(v)); }
    JsonObj& field(const std::string& k, int v) { return field(k, std::to_string(v)); }
    JsonObj& field(const std::string& k, long v) { return field(k, std::to_string(v)); }
    JsonObj& field_str(const std::string& k, const std::string& v) {
        return field(k, quoted(v));
    }
    JsonObj& field_bool(const std::string& k, bool v) {
        return field(k, v ? "true" : "false");
    }
    std::string str() const { return "{" + os.str() + "}"; }
};

struct JsonArr {
    std::ostringstream os;
    bool first = true;
    JsonArr& item(const std::string& raw) {
        if (!first) os << ",";
        first = false;
        os << raw;
        return *this;
    }
    JsonArr& item(double v) { return item(fmt(v)); }
    std::string str() const { return "[" + os.str() + "]"; }
};

// ---------------------------------------------------------------------

struct CommonArgs {
    std::string problem_file;
    std::string catalog_name;
    std::vector<double> window;
    std::string scheme_text = "two-sided";
    double tol = 1e-8;
    std::string json_path;
    std::string csv_path;
};

ProblemSpec load_problem(const CommonArgs& args) {
    if (!args.catalog_name.empty()) return catalog(args.catalog_name);
    if (args.problem_file.empty())
        throw InvariantError("give either --catalog or --problem");
    std::ifstream in(args.problem_file);
    if (!in) throw InvariantError("cannot open problem file '" + args.problem_file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

SpectralWindow parse_window(const std::vector<double>& w) {
    if (w.size() != 2 || !(w[0] < w[1]))
        throw InvariantError("--window needs lambda0,lambda1 with lambda0 < lambda1");
    return {w[0], w[1]};
}

Scheme parse_scheme(const std::string& text, const SpectralWindow& window) {
    auto split = [](const std::string& s, char d) {
        std::vector<std::string> parts;
        std::istringstream in(s);
        std::string tok;
        while (std::getline(in, tok, d)) parts.push_back(tok);
        return parts;
    };
    auto parts = split(text, ':');
    if (parts[0] == "two-sided") {
        double la = window.mid(), lb = window.mid();
        if (parts.size() > 1) {
            auto lams = split(parts[1], ',');
            la = std::stod(lams[0]);
            lb = lams.size() > 1 ? std::stod(lams[1]) : la;
        }
        return TwoSidedWeyl{la, lb};
    }
    if (parts[0] == "one-sided") {
        WindowEdge edge = WindowEdge::Lambda0;
        if (parts.size() > 1) {
            if (parts[1] == "lambda0") edge = WindowEdge::Lambda0;
            else if (parts[1] == "lambda1") edge = WindowEdge::Lambda1;
            else throw InvariantError("one-sided edge must be lambda0 or lambda1");
        }
        double la = parts.size() > 2 ? std::stod(parts[2]) : window.mid();
        return OneSidedLP{la, edge};
    }
    if (parts[0] == "dirichlet") return NaiveDirichlet{};
    throw InvariantError("unknown scheme '" + text +
                         "' (two-sided[:la[,lb]], one-sided[:lambda0|lambda1[:la]], dirichlet)");
}

std::vector<Truncation> make_truncations(const ProblemSpec& spec, const std::vector<double>& Ls,
                                         const std::vector<double>& as,
                                         const std::vector<double>& bs) {
    std::vector<Truncation> out;
    if (!Ls.empty()) {
        for (double L : Ls) {
            double an = std::isfinite(spec.a) ? std::max(spec.a, -L) : -L;
            double bn = std::isfinite(spec.b) ? std::min(spec.b, L) : L;
            if (std::isfinite(spec.a) && spec.left_class == EndpointClass::LimitPoint &&
                an <= spec.a)
                an = spec.a + 1.0 / L; // stay interior of a singular endpoint
            if (std::isfinite(spec.b) && spec.right_class == EndpointClass::LimitPoint &&
                bn >= spec.b)
                bn = spec.b - 1.0 / L;
            out.push_back({an, bn});
        }
        return out;
    }
    if (as.size() != bs.size() || as.empty())
        throw InvariantError("give --L or matching --a and --b lists");
    for (std::size_t i = 0; i < as.size(); ++i) out.push_back({as[i], bs[i]});
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

std::string study_json(const StudyResult& study, const CommonArgs& args,
                       const std::optional<std::vector<bool>>& monotonicity,
                       const std::optional<bool>& residual_ok,
                       const std::optional<AccumulationVerdict>& verdict,
                       const std::vector<std::vector<double>>& residuals) {
    JsonObj config;
    config.field_str("problem", args.catalog_name.empty() ? args.problem_file
                                                          : args.catalog_name);
    config.field_str("scheme", scheme_name(study.scheme));
    config.field("lambda0", study.window.lambda0);
    config.field("lambda1", study.window.lambda1);
    config.field("tol", study.tol);

    JsonArr per_n;
    for (std::size_t i = 0; i < study.truncations.size(); ++i) {
        JsonObj o;
        o.field("n", static_cast<int>(i));
        o.field("a_n", study.truncations[i].a_n);
        o.field("b_n", study.truncations[i].b_n);
        o.field("count", study.counts[i]);
        JsonArr eigs;
        if (study.lists[i])
            for (const auto& ev : study.lists[i]->values) eigs.item(ev.lambda);
        o.field("eigenvalues", eigs.str());
        if (!study.errors[i].empty()) o.field_str("error", study.errors[i]);
        per_n.item(o.str());
    }

    JsonArr trajs;
    for (std::size_t t = 0; t < study.trajectories.size(); ++t) {
        const auto& tr = study.trajectories[t];
        JsonObj o;
        o.field("limits", tr.limit);
        JsonArr vals;
        for (const auto& v : tr.values) vals.item(v ? fmt(*v) : "null");
        o.field("values", vals.str());
        o.field_bool("converged", tr.converged);
        JsonArr ovl;
        for (double v : tr.overlaps) ovl.item(v);
        o.field("overlaps", ovl.str());
        if (t < residuals.size() && !residuals[t].empty()) {
            JsonArr rs;
            for (double v : residuals[t]) rs.item(v);
            o.field("residuals", rs.str());
        }
        trajs.item(o.str());
    }

    JsonObj checks;
    if (monotonicity) {
        bool all = true;
        for (bool b : *monotonicity) all = all && b;
        checks.field_bool("monotonicity", all);
    } else {
        checks.field("monotonicity", "null");
    }
    if (residual_ok) checks.field_bool("residual", *residual_ok);
    else checks.field("residual", "null");
    if (verdict) checks.field_str("accumulation", verdict_name(*verdict));
    else checks.field("accumulation", "null");

    JsonObj top;
    top.field("config", config.str());
    top.field("per_n", per_n.str());
    top.field("trajectories", trajs.str());
    top.field("checks", checks.str());
    return top.str() + "\n";
}

std::string study_csv(const StudyResult& study) {
    std::ostringstream os;
    os << "n,a_n,b_n,index,lambda,residual,overlap\n";
    for (std::size_t i = 0; i < study.truncations.size(); ++i) {
        if (!study.lists[i]) continue;
        for (std::size_t j = 0; j < study.lists[i]->values.size(); ++j) {
            double lam = study.lists[i]->values[j].lambda;
            // locate trajectory carrying this eigenvalue for the overlap column
            std::string overlap;
            for (const auto& tr : study.trajectories) {
                if (tr.values[i] && *tr.values[i] == lam && i > 0 &&
                    i - 1 < tr.overlaps.size() && !std::isnan(tr.overlaps[i - 1])) {
                    overlap = fmt(tr.overlaps[i - 1]);
                    break;
                }
            }
            os << i << "," << fmt(study.truncations[i].a_n) << ","
               << fmt(study.truncations[i].b_n) << "," << j << "," << fmt(lam) << ","
               << "," << overlap << "\n";
        }
    }
    return os.str();
}

int run_solve(const CommonArgs& args, double an, double bn) {
    ProblemSpec spec = load_problem(args);
    SpectralWindow window = parse_window(args.window);
    Scheme scheme = parse_scheme(args.scheme_text, window);
    if (!std::isfinite(an)) an = std::isfinite(spec.a) ? spec.a : -8.0;
    if (!std::isfinite(bn)) bn = std::isfinite(spec.b) ? spec.b : 8.0;
    RegularProblem rp = build_regular_problem(spec, scheme, window, an, bn);
    SolveOptions sopts;
    sopts.tol = std::min(args.tol, 1e-9);
    EigenList list = eigenvalues_in_window(rp, window, sopts);
    std::printf("# interval [%.6g, %.6g], alpha = %.12g, beta = %.12g\n", rp.a_n, rp.b_n,
                rp.alpha_n, rp.beta_n);
    std::printf("%-6s %-24s %s\n", "index", "lambda", "edge-adjacent");
    for (const auto& ev : list.values)
        std::printf("%-6d %-24.17g %s\n", ev.prufer_index, ev.lambda,
                    ev.edge_adjacent ? "yes" : "no");
    if (!args.json_path.empty()) {
        JsonObj top;
        JsonObj config;
        config.field_str("problem",
                         args.catalog_name.empty() ? args.problem_file : args.catalog_name);
        config.field_str("scheme", scheme_name(scheme));
        config.field("lambda0", window.lambda0);
        config.field("lambda1", window.lambda1);
        config.field("a_n", rp.a_n);
        config.field("b_n", rp.b_n);
        top.field("config", config.str());
        JsonArr eigs;
        for (const auto& ev : list.values) eigs.item(ev.lambda);
        top.field("eigenvalues", eigs.str());
        write_file(args.json_path, top.str() + "\n");
    }
    return 0;
}

int run_study_cmd(const CommonArgs& args, const std::vector<double>& Ls,
                  const std::vector<double>& as, const std::vector<double>& bs,
                  bool with_overlaps, bool with_residuals, int threshold,
                  int reference_count) {
    ProblemSpec spec = load_problem(args);
    SpectralWindow window = parse_window(args.window);
    Scheme scheme = parse_scheme(args.scheme_text, window);
    StudyOptions opts;
    opts.tol = args.tol;
    opts.with_overlaps = with_overlaps;
    StudyResult study = run_study(spec, scheme, window, make_truncations(spec, Ls, as, bs), opts);

    std::optional<std::vector<bool>> mono;
    if (reference_count >= 0) mono = count_monotonicity_check(study, reference_count);
    std::optional<AccumulationVerdict> verdict = detect_accumulation(study, threshold);

    std::vector<std::vector<double>> residuals(study.trajectories.size());
    std::optional<bool> residual_ok;
    if (with_residuals) {
        bool all = true;
        for (std::size_t t = 0; t < study.trajectories.size(); ++t) {
            const auto& tr = study.trajectories[t];
            if (!tr.converged) continue;
            for (std::size_t i = 0; i < tr.values.size(); ++i) {
                if (!tr.values[i] || !study.problems[i]) continue;
                ResidualReport rep =
                    residual_window_check(spec, *study.problems[i], *tr.values[i], window);
                residuals[t].push_back(rep.ratio);
                all = all && rep.pass;
            }
        }
        residual_ok = all;
    }

    std::printf("%-4s %-12s %-12s %-6s eigenvalues\n", "n", "a_n", "b_n", "count");
    for (std::size_t i = 0; i < study.truncations.size(); ++i) {
        std::printf("%-4zu %-12.6g %-12.6g %-6d", i, study.truncations[i].a_n,
                    study.truncations[i].b_n, study.counts[i]);
        if (study.lists[i])
            for (const auto& ev : study.lists[i]->values) std::printf(" %.10g", ev.lambda);
        if (!study.errors[i].empty()) std::printf(" [%s]", study.errors[i].c_str());
        std::printf("\n");
    }
    std::printf("trajectories:\n");
    for (const auto& tr : study.trajectories)
        std::printf("  limit %.12g  converged=%s\n", tr.limit, tr.converged ? "yes" : "no");
    if (verdict) std::printf("accumulation: %s\n", verdict_name(*verdict).c_str());

    if (!args.json_path.empty())
        write_file(args.json_path, study_json(study, args, mono, residual_ok, verdict, residuals));
    if (!args.csv_path.empty()) write_file(args.csv_path, study_csv(study));
    return 0;
}

int run_weyl(const CommonArgs& args, const std::string& endpoint, double lambda, double at) {
    ProblemSpec spec = load_problem(args);
    Endpoint e = endpoint == "left" ? Endpoint::Left : Endpoint::Right;
    WeylDirection dir = weyl_direction(spec, e, lambda, at);
    std::printf("endpoint=%s lambda=%.17g at=%.17g angle=%.17g decay_rate=%.17g "
                "stabilized=%s\n",
                endpoint.c_str(), lambda, at, dir.state.angle(), dir.decay_rate,
                dir.stabilized ? "yes" : "no");
    return 0;
}

int run_oracle(const CommonArgs& args, double lo, double hi, int n) {
    ProblemSpec spec = load_problem(args);
    SpectralWindow window = parse_window(args.window);
    OracleResult res = dense_fd_oracle(spec, lo, hi, n, window);
    std::printf("%-6s %-24s %s\n", "index", "lambda(extrapolated)", "lambda(fine)");
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
        std::printf("%-6zu %-24.17g %.17g\n", i, res.eigenvalues[i], res.fine[i]);
    if (!args.json_path.empty()) {
        JsonObj top;
        JsonArr eigs;
        for (double v : res.eigenvalues) eigs.item(v);
        top.field("eigenvalues", eigs.str());
        write_file(args.json_path, top.str() + "\n");
    }
    return 0;
}

int run_jacobi(const CommonArgs& args, const std::string& a_expr, const std::string& b_expr,
               const std::vector<std::string>& impurities, const std::vector<long>& ns) {
    std::map<long, double> overrides;
    for (const auto& imp : impurities) {
        auto eq = imp.find('=');
        if (eq == std::string::npos)
            throw InvariantError("impurity must be k=value, got '" + imp + "'");
        overrides[std::stol(imp.substr(0, eq))] = std::stod(imp.substr(eq + 1));
    }
    JacobiOperator op = JacobiOperator::from_expressions(a_expr, b_expr, overrides);
    SpectralWindow window = parse_window(args.window);
    Scheme scheme = parse_scheme(args.scheme_text, window);

    std::printf("%-8s eigenvalues in window\n", "n");
    JsonArr per_n;
    for (long n : ns) {
        Tridiag t = truncate_jacobi(op, scheme, window, n);
        auto eigs = tridiag_eigs_window(t, window);
        std::printf("%-8ld", n);
        for (double v : eigs) std::printf(" %.15g", v);
        std::printf("\n");
        JsonObj o;
        o.field("n", n);
        JsonArr arr;
        for (double v : eigs) arr.item(v);
        o.field("eigenvalues", arr.str());
        per_n.item(o.str());
    }
    if (!args.json_path.empty()) {
        JsonObj top;
        top.field("per_n", per_n.str());
        write_file(args.json_path, top.str() + "\n");
    }
    return 0;
}

int run_catalog(const std::string& name) {
    if (name.empty()) {
        for (const auto& k : catalog_names()) std::printf("%s\n", k.c_str());
        return 0;
    }
    std::printf("%s", render(catalog(name)).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"eigenvalues in essential-spectrum gaps of singular ODE operators"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* cmd, bool needs_window) {
        cmd->add_option("--problem", args.problem_file, "problem file path");
        cmd->add_option("--catalog", args.catalog_name, "built-in problem name");
        auto* w = cmd->add_option("--window", args.window, "lambda0,lambda1")->delimiter(',');
        if (needs_window) w->required();
        cmd->add_option("--scheme", args.scheme_text,
                        "two-sided[:la[,lb]] | one-sided[:lambda0|lambda1[:la]] | dirichlet");
        cmd->add_option("--tol", args.tol, "study/refinement tolerance");
        cmd->add_option("--json", args.json_path, "write JSON output to this path");
        cmd->add_option("--csv", args.csv_path, "write CSV output to this path");
    };

    double solve_a = std::nan(""), solve_b = std::nan("");
    auto* solve_cmd = app.add_subcommand("solve", "eigenvalues of a single truncation");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--a", solve_a, "truncation left endpoint");
    solve_cmd->add_option("--b", solve_b, "truncation right endpoint");

    std::vector<double> Ls, as, bs;
    bool with_overlaps = false, with_residuals = false;
    int threshold = 0, reference_count = -1;
    auto* study_cmd = app.add_subcommand("study", "truncation study with diagnostics");
    add_common(study_cmd, true);
    study_cmd->add_option("--L", Ls, "symmetric truncations [-L, L]")->delimiter(',');
    study_cmd->add_option("--a", as, "left endpoints a_n")->delimiter(',');
    study_cmd->add_option("--b", bs, "right endpoints b_n")->delimiter(',');
    study_cmd->add_flag("--overlaps", with_overlaps, "compute eigenfunction overlaps");
    study_cmd->add_flag("--residual", with_residuals, "run the residual window check");
    study_cmd->add_option("--threshold", threshold, "accumulation count threshold");
    study_cmd->add_option("--reference-count", reference_count,
                          "true eigenvalue count for the monotonicity check");

    std::string weyl_endpoint = "right";
    double weyl_lambda = 0.0, weyl_at = 0.0;
    auto* weyl_cmd = app.add_subcommand("weyl", "debug a Weyl direction");
    add_common(weyl_cmd, false);
    weyl_cmd->add_option("--endpoint", weyl_endpoint, "left | right");
    weyl_cmd->add_option("--lambda", weyl_lambda)->required();
    weyl_cmd->add_option("--at", weyl_at, "evaluation point")->required();

    double oracle_lo = 0.0, oracle_hi = 0.0;
    int oracle_n = 2000;
    auto* oracle_cmd = app.add_subcommand("oracle", "dense finite-difference reference");
    add_common(oracle_cmd, true);
    oracle_cmd->add_option("--lo", oracle_lo)->required();
    oracle_cmd->add_option("--hi", oracle_hi)->required();
    oracle_cmd->add_option("--N", oracle_n, "interior grid points");

    std::string a_expr = "1", b_expr = "0";
    std::vector<std::string> impurities;
    std::vector<long> jac_ns;
    auto* jacobi_cmd = app.add_subcommand("jacobi", "discrete half-line Jacobi operator");
    add_common(jacobi_cmd, true);
    jacobi_cmd->add_option("--a-expr", a_expr, "off-diagonal entries, expression in k");
    jacobi_cmd->add_option("--b-expr", b_expr, "diagonal entries, expression in k");
    jacobi_cmd->add_option("--impurity", impurities, "k=value diagonal overrides");
    jacobi_cmd->add_option("--n", jac_ns, "truncation sizes")->delimiter(',')->required();

    std::string catalog_arg;
    auto* catalog_cmd = app.add_subcommand("catalog", "list or show built-in problems");
    catalog_cmd->add_option("name", catalog_arg, "problem to show");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(args, solve_a, solve_b);
        if (study_cmd->parsed())
            return run_study_cmd(args, Ls, as, bs, with_overlaps, with_residuals, threshold,
                                 reference_count);
        if (weyl_cmd->parsed()) return run_weyl(args, weyl_endpoint, weyl_lambda, weyl_at);
        if (oracle_cmd->parsed()) return run_oracle(args, oracle_lo, oracle_hi, oracle_n);
        if (jacobi_cmd->parsed())
            return run_jacobi(args, a_expr, b_expr, impurities, jac_ns);
        if (catalog_cmd->parsed()) return run_catalog(catalog_arg);
    } catch (const NonDecayingError& e) {
        std::fprintf(stderr, "error kind=non-decaying msg=%s\n", quoted(e.what()).c_str());
        return 2;
    } catch (const PropagationError& e) {
        std::fprintf(stderr, "error kind=propagation msg=%s\n", quoted(e.what()).c_str());
        return 2;
    } catch (const SchemeMismatchError& e) {
        std::fprintf(stderr, "error kind=scheme-mismatch msg=%s\n", quoted(e.what()).c_str());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error kind=input msg=%s\n", quoted(e.what()).c_str());
        return 1;
    }
    return 1;
}
