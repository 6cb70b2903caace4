#pragma once

#include <memory>
#include <string>

namespace gapeig {

// Closed-form coefficient expressions in one variable.
//
// Grammar: numbers, the variable, pi, + - * / ^ (right-associative), unary
// minus, parentheses, and the functions sin cos tan exp log sqrt abs tanh
// cosh sinh.

namespace detail {
struct ExprNode;
}

class Expr {
public:
    Expr() = default;

    /// Parse `text` as an expression in the variable `var` (usually "x").
    static Expr parse(const std::string& text, const std::string& var = "x");

    /// Constant expression.
    static Expr constant(double value);

    /// Evaluate at the given variable value. Throws DomainError on 1/0,
    /// sqrt of a negative, log of a non-positive value, with the offending
    /// subexpression in the message.
    double operator()(double x) const;

    bool empty() const { return root_ == nullptr; }

    /// Render back to parseable text; parse(str()) evaluates identically.
    std::string str() const;

private:
    std::shared_ptr<const detail::ExprNode> root_;
};

} // namespace gapeig
