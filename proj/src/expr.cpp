#include "gapeig/expr.hpp"
#include "gapeig/errors.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

namespace gapeig {
namespace detail {

enum class Op {
    Num, Var,
    Add, Sub, Mul, Div, Pow, Neg,
    Sin, Cos, Tan, Exp, Log, Sqrt, Abs, Tanh, Cosh, Sinh
};

struct ExprNode {
    Op op;
    double value = 0.0; // Num
    std::shared_ptr<const ExprNode> lhs, rhs;
};

using NodePtr = std::shared_ptr<const ExprNode>;

namespace {

NodePtr make_num(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Num;
    n->value = v;
    return n;
}

NodePtr make_node(Op op, NodePtr l, NodePtr r = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

const char* fn_name(Op op) {
    switch (op) {
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
    case Op::Abs: return "abs";
    case Op::Tanh: return "tanh";
    case Op::Cosh: return "cosh";
    case Op::Sinh: return "sinh";
    default: return "?";
    }
}

void render(const ExprNode& n, std::ostream& os);

void render_operand(const ExprNode& n, std::ostream& os) {
    bool atom = n.op == Op::Num || n.op == Op::Var ||
                (n.op >= Op::Sin && n.op <= Op::Sinh);
    if (atom && !(n.op == Op::Num && n.value < 0)) {
        render(n, os);
    } else {
        os << '(';
        render(n, os);
        os << ')';
    }
}

void render(const ExprNode& n, std::ostream& os) {
    switch (n.op) {
    case Op::Num: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        os << buf;
        break;
    }
    case Op::Var: os << 'x'; break;
    case Op::Add: render_operand(*n.lhs, os); os << " + "; render_operand(*n.rhs, os); break;
    case Op::Sub: render_operand(*n.lhs, os); os << " - "; render_operand(*n.rhs, os); break;
    case Op::Mul: render_operand(*n.lhs, os); os << " * "; render_operand(*n.rhs, os); break;
    case Op::Div: render_operand(*n.lhs, os); os << " / "; render_operand(*n.rhs, os); break;
    case Op::Pow: render_operand(*n.lhs, os); os << '^'; render_operand(*n.rhs, os); break;
    case Op::Neg: os << '-'; render_operand(*n.lhs, os); break;
    default:
        os << fn_name(n.op) << '(';
        render(*n.lhs, os);
        os << ')';
    }
}

std::string subexpr_str(const ExprNode& n) {
    std::ostringstream os;
    render(n, os);
    return os.str();
}

double eval(const ExprNode& n, double x) {
    switch (n.op) {
    case Op::Num: return n.value;
    case Op::Var: return x;
    case Op::Add: return eval(*n.lhs, x) + eval(*n.rhs, x);
    case Op::Sub: return eval(*n.lhs, x) - eval(*n.rhs, x);
    case Op::Mul: return eval(*n.lhs, x) * eval(*n.rhs, x);
    case Op::Div: {
        double d = eval(*n.rhs, x);
        if (d == 0.0)
            throw DomainError("division by zero in '" + subexpr_str(n) + "'");
        return eval(*n.lhs, x) / d;
    }
    case Op::Pow: {
        double b = eval(*n.lhs, x), e = eval(*n.rhs, x);
        double v = std::pow(b, e);
        if (!std::isfinite(v))
            throw DomainError("non-finite power in '" + subexpr_str(n) + "'");
        return v;
    }
    case Op::Neg: return -eval(*n.lhs, x);
    case Op::Sin: return std::sin(eval(*n.lhs, x));
    case Op::Cos: return std::cos(eval(*n.lhs, x));
    case Op::Tan: return std::tan(eval(*n.lhs, x));
    case Op::Exp: return std::exp(eval(*n.lhs, x));
    case Op::Log: {
        double v = eval(*n.lhs, x);
        if (v <= 0.0)
            throw DomainError("log of non-positive value in '" + subexpr_str(n) + "'");
        return std::log(v);
    }
    case Op::Sqrt: {
        double v = eval(*n.lhs, x);
        if (v < 0.0)
            throw DomainError("sqrt of negative value in '" + subexpr_str(n) + "'");
        return std::sqrt(v);
    }
    case Op::Abs: return std::fabs(eval(*n.lhs, x));
    case Op::Tanh: return std::tanh(eval(*n.lhs, x));
    case Op::Cosh: return std::cosh(eval(*n.lhs, x));
    case Op::Sinh: return std::sinh(eval(*n.lhs, x));
    }
    throw DomainError("corrupt expression node");
}

struct Parser {
    const std::string& text;
    const std::string& var;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    NodePtr parse_expression() { return parse_sum(); }

    NodePtr parse_sum() {
        NodePtr n = parse_term();
        for (;;) {
            if (eat('+')) n = make_node(Op::Add, n, parse_term());
            else if (eat('-')) n = make_node(Op::Sub, n, parse_term());
            else return n;
        }
    }

    NodePtr parse_term() {
        NodePtr n = parse_unary();
        for (;;) {
            if (eat('*')) n = make_node(Op::Mul, n, parse_unary());
            else if (eat('/')) n = make_node(Op::Div, n, parse_unary());
            else return n;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) return make_node(Op::Neg, parse_unary());
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) // right-associative; -x^2 parses as -(x^2)
            return make_node(Op::Pow, base, parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= text.size())
            throw ParseError("unexpected end of expression", pos);
        char c = text[pos];
        if (c == '(') {
            ++pos;
            NodePtr n = parse_expression();
            if (!eat(')'))
                throw ParseError("expected ')'", pos);
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_ident();
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }

    NodePtr parse_number() {
        std::size_t start = pos;
        const char* begin = text.c_str() + pos;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin)
            throw ParseError("malformed number", start);
        pos += static_cast<std::size_t>(end - begin);
        return make_num(v);
    }

    NodePtr parse_ident() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name = text.substr(start, pos - start);
        if (name == var) return make_node(Op::Var, nullptr);
        if (name == "pi") return make_num(std::numbers::pi);
        static const std::pair<const char*, Op> fns[] = {
            {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan},
            {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt},
            {"abs", Op::Abs}, {"tanh", Op::Tanh}, {"cosh", Op::Cosh},
            {"sinh", Op::Sinh}};
        for (auto& [fname, op] : fns) {
            if (name == fname) {
                if (!eat('('))
                    throw ParseError("expected '(' after " + name, pos);
                NodePtr arg = parse_expression();
                if (!eat(')'))
                    throw ParseError("expected ')'", pos);
                return make_node(op, arg);
            }
        }
        throw ParseError("unknown identifier '" + name + "'", start);
    }
};

} // namespace
} // namespace detail

Expr Expr::parse(const std::string& text, const std::string& var) {
    detail::Parser p{text, var};
    Expr e;
    auto root = p.parse_expression();
    p.skip_ws();
    if (p.pos != text.size())
        throw ParseError("trailing input after expression", p.pos);
    e.root_ = std::move(root);
    return e;
}

Expr Expr::constant(double value) {
    Expr e;
    e.root_ = detail::make_num(value);
    return e;
}

double Expr::operator()(double x) const {
    if (!root_)
        throw DomainError("evaluating empty expression");
    return detail::eval(*root_, x);
}

std::string Expr::str() const {
    if (!root_) return "";
    return detail::subexpr_str(*root_);
}

} // namespace gapeig
