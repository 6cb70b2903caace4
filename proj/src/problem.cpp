#include "gapeig/problem.hpp"
#include "gapeig/errors.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace gapeig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_endpoint_value(const std::string& tok, std::size_t pos) {
    std::string t = trim(tok);
    if (t == "inf" || t == "+inf") return kInf;
    if (t == "-inf") return -kInf;
    try {
        return Expr::parse(t)(0.0);
    } catch (const ParseError&) {
        throw ParseError("malformed interval endpoint '" + t + "'", pos);
    }
}

struct EndpointDecl {
    EndpointClass cls;
    std::optional<double> angle;
};

EndpointDecl parse_endpoint_decl(const std::string& value, std::size_t pos) {
    std::string v = trim(value);
    if (v == "lp") return {EndpointClass::LimitPoint, std::nullopt};
    const std::string prefix = "regular:";
    if (v.rfind(prefix, 0) == 0) {
        double angle;
        try {
            angle = Expr::parse(v.substr(prefix.size()))(0.0);
        } catch (const ParseError&) {
            throw ParseError("malformed boundary-condition angle in '" + v + "'", pos);
        }
        if (!(angle >= 0.0 && angle < std::numbers::pi))
            throw InvariantError("boundary-condition angle must lie in [0, pi), got " +
                                 std::to_string(angle));
        return {EndpointClass::Regular, angle};
    }
    throw ParseError("endpoint must be 'regular:<angle>' or 'lp', got '" + v + "'", pos);
}

} // namespace

std::vector<double> probe_mesh(const ProblemSpec& spec, int n) {
    double lo = spec.a, hi = spec.b;
    if (!std::isfinite(lo)) lo = std::isfinite(hi) ? hi - 40.0 : -20.0;
    if (!std::isfinite(hi)) hi = std::isfinite(spec.a) ? spec.a + 40.0 : 20.0;
    // Stay strictly interior; singular finite endpoints are approached, not hit.
    double margin = 1e-6 * (hi - lo);
    lo += margin;
    hi -= margin;
    std::vector<double> mesh(n);
    for (int i = 0; i < n; ++i)
        mesh[i] = lo + (hi - lo) * (i + 0.5) / n;
    return mesh;
}

void validate(const ProblemSpec& spec, int n) {
    if (!(spec.a < spec.b))
        throw InvariantError("interval must satisfy a < b");
    if (!std::isfinite(spec.a) && spec.left_class == EndpointClass::Regular)
        throw InvariantError("infinite left endpoint cannot be Regular");
    if (!std::isfinite(spec.b) && spec.right_class == EndpointClass::Regular)
        throw InvariantError("infinite right endpoint cannot be Regular");
    if ((spec.left_class == EndpointClass::Regular) != spec.left_bc_angle.has_value())
        throw InvariantError("left bc angle required exactly when left endpoint is Regular");
    if ((spec.right_class == EndpointClass::Regular) != spec.right_bc_angle.has_value())
        throw InvariantError("right bc angle required exactly when right endpoint is Regular");
    for (auto angle : {spec.left_bc_angle, spec.right_bc_angle})
        if (angle && !(*angle >= 0.0 && *angle < std::numbers::pi))
            throw InvariantError("bc angle out of [0, pi)");

    auto mesh = probe_mesh(spec, n);
    // Regular endpoints: also probe a mesh approaching the endpoint itself.
    if (spec.left_class == EndpointClass::Regular)
        for (int i = 1; i <= 8; ++i)
            mesh.push_back(spec.a + (mesh.front() - spec.a) / std::pow(2.0, i));
    if (spec.right_class == EndpointClass::Regular)
        for (int i = 1; i <= 8; ++i)
            mesh.push_back(spec.b - (spec.b - mesh.back()) / std::pow(2.0, i));

    for (double x : mesh) {
        if (spec.kind == Kind::SturmLiouville) {
            double pv = spec.p(x), qv = spec.q(x), rv = spec.r(x);
            if (!(pv > 0.0))
                throw InvariantError("p must be positive; p(" + std::to_string(x) +
                                     ") = " + std::to_string(pv));
            if (!(rv > 0.0))
                throw InvariantError("r must be positive; r(" + std::to_string(x) +
                                     ") = " + std::to_string(rv));
            if (!std::isfinite(qv))
                throw InvariantError("q not finite at x = " + std::to_string(x));
        } else {
            auto qm = spec.q_matrix(x);
            auto rm = spec.r_matrix(x);
            for (double v : qm)
                if (!std::isfinite(v))
                    throw InvariantError("q not finite at x = " + std::to_string(x));
            // r symmetric positive definite: leading minors.
            if (!(rm[0] > 0.0) || !(rm[0] * rm[2] - rm[1] * rm[1] > 0.0))
                throw InvariantError("r not positive definite at x = " + std::to_string(x));
        }
    }
}

ProblemSpec parse_problem(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool in_problem_section = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t == "[problem]") {
                in_problem_section = true;
                continue;
            }
            throw ParseError("unknown section '" + t + "'", lineno);
        }
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("expected key=value, got '" + t + "'", lineno);
        if (!in_problem_section)
            throw ParseError("key outside [problem] section", lineno);
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }

    auto require = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ParseError("missing required key '" + key + "'", 0);
        return it->second;
    };

    ProblemSpec spec;
    const std::string& kind = require("kind");
    if (kind == "sl") spec.kind = Kind::SturmLiouville;
    else if (kind == "dirac") spec.kind = Kind::Dirac;
    else throw ParseError("kind must be 'sl' or 'dirac', got '" + kind + "'", 0);

    const std::string& iv = require("interval");
    std::string ivt = trim(iv);
    if (ivt.size() < 3 || ivt.front() != '(' || ivt.back() != ')')
        throw ParseError("interval must be of the form (A,B)", 0);
    std::string inner = ivt.substr(1, ivt.size() - 2);
    // Split at the comma that separates the endpoints (top-level only;
    // endpoint expressions contain no commas).
    auto comma = inner.find(',');
    if (comma == std::string::npos)
        throw ParseError("interval must be of the form (A,B)", 0);
    spec.a = parse_endpoint_value(inner.substr(0, comma), 0);
    spec.b = parse_endpoint_value(inner.substr(comma + 1), 0);

    auto left = parse_endpoint_decl(require("left"), 0);
    auto right = parse_endpoint_decl(require("right"), 0);
    spec.left_class = left.cls;
    spec.left_bc_angle = left.angle;
    spec.right_class = right.cls;
    spec.right_bc_angle = right.angle;

    if (spec.kind == Kind::SturmLiouville) {
        spec.p = Expr::parse(require("p"));
        spec.q = Expr::parse(require("q"));
        spec.r = Expr::parse(require("r"));
    } else {
        spec.q11 = Expr::parse(require("q11"));
        spec.q12 = Expr::parse(require("q12"));
        spec.q22 = Expr::parse(require("q22"));
        spec.r11 = Expr::parse(require("r11"));
        spec.r12 = Expr::parse(require("r12"));
        spec.r22 = Expr::parse(require("r22"));
        // q21/r21 may be given redundantly; they must agree with q12/r12.
        for (auto [lo_key, hi_key] : {std::pair{"q21", "q12"}, std::pair{"r21", "r12"}}) {
            auto it = kv.find(lo_key);
            if (it == kv.end()) continue;
            Expr other = Expr::parse(it->second);
            Expr given = Expr::parse(kv.at(hi_key));
            for (double x : probe_mesh(spec, 33))
                if (std::fabs(other(x) - given(x)) > 1e-12 * (1.0 + std::fabs(given(x))))
                    throw InvariantError(std::string("symmetry violation: ") + lo_key +
                                         " != " + hi_key + " at x = " + std::to_string(x));
        }
    }

    validate(spec);
    return spec;
}

std::string render(const ProblemSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    auto endpoint_str = [](double v) -> std::string {
        if (v == kInf) return "inf";
        if (v == -kInf) return "-inf";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    };
    os << "[problem]\n";
    os << "kind = " << (spec.kind == Kind::SturmLiouville ? "sl" : "dirac") << "\n";
    os << "interval = (" << endpoint_str(spec.a) << ", " << endpoint_str(spec.b) << ")\n";
    if (spec.kind == Kind::SturmLiouville) {
        os << "p = " << spec.p.str() << "\n";
        os << "q = " << spec.q.str() << "\n";
        os << "r = " << spec.r.str() << "\n";
    } else {
        os << "q11 = " << spec.q11.str() << "\n";
        os << "q12 = " << spec.q12.str() << "\n";
        os << "q22 = " << spec.q22.str() << "\n";
        os << "r11 = " << spec.r11.str() << "\n";
        os << "r12 = " << spec.r12.str() << "\n";
        os << "r22 = " << spec.r22.str() << "\n";
    }
    auto side = [&](const char* key, EndpointClass cls, std::optional<double> angle) {
        os << key << " = ";
        if (cls == EndpointClass::LimitPoint) {
            os << "lp\n";
        } else {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", *angle);
            os << "regular:" << buf << "\n";
        }
    };
    side("left", spec.left_class, spec.left_bc_angle);
    side("right", spec.right_class, spec.right_bc_angle);
    return os.str();
}

std::vector<std::string> catalog_names() {
    return {"harmonic", "coulomb_l1", "mathieu_impurity", "dirac_well", "dirichlet_box"};
}

ProblemSpec catalog(const std::string& name) {
    std::string text;
    if (name == "harmonic") {
        text = "[problem]\nkind = sl\ninterval = (-inf, inf)\n"
               "p = 1\nq = x^2\nr = 1\nleft = lp\nright = lp\n";
    } else if (name == "coulomb_l1") {
        text = "[problem]\nkind = sl\ninterval = (0, inf)\n"
               "p = 1\nq = 2/x^2 - 1/x\nr = 1\nleft = lp\nright = lp\n";
    } else if (name == "mathieu_impurity") {
        text = "[problem]\nkind = sl\ninterval = (-inf, inf)\n"
               "p = 1\nq = 2*cos(2*x) - 3*exp(-x^2)\nr = 1\nleft = lp\nright = lp\n";
    } else if (name == "dirac_well") {
        text = "[problem]\nkind = dirac\ninterval = (-inf, inf)\n"
               "q11 = 1 - 2*exp(-x^2)\nq12 = 0\nq22 = -1 - 2*exp(-x^2)\n"
               "r11 = 1\nr12 = 0\nr22 = 1\nleft = lp\nright = lp\n";
    } else if (name == "dirichlet_box") {
        text = "[problem]\nkind = sl\ninterval = (0, pi)\n"
               "p = 1\nq = 0\nr = 1\nleft = regular:0\nright = regular:0\n";
    } else {
        std::string keys;
        for (const auto& k : catalog_names()) keys += (keys.empty() ? "" : ", ") + k;
        throw InvariantError("unknown catalog problem '" + name + "' (available: " + keys + ")");
    }
    return parse_problem(text);
}

} // namespace gapeig
