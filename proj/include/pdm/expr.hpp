#pragma once

// Scalar expression language for user-defined mass profiles and potentials.
//
// Grammar (lowest to highest precedence):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | identifier | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | ln | sqrt
//
// Evaluation carries a value together with its first and second derivative
// with respect to one chosen variable (second-order dual numbers).

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pdm::expr {

/// Value with first and second derivative along one direction.
struct Dual2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;

    static constexpr Dual2 constant(double c) { return {c, 0.0, 0.0}; }
    static constexpr Dual2 variable(double x) { return {x, 1.0, 0.0}; }
    constexpr bool is_constant() const { return d1 == 0.0 && d2 == 0.0; }
};

Dual2 operator+(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a, const Dual2& b);
Dual2 operator-(const Dual2& a);
Dual2 operator*(const Dual2& a, const Dual2& b);
/// Caller guarantees b.v != 0.
Dual2 operator/(const Dual2& a, const Dual2& b);

/// Chain rule for a scalar function with known f, f', f'' at u.v.
Dual2 chain(const Dual2& u, double f, double df, double d2f);

Dual2 sin(const Dual2& u);
Dual2 cos(const Dual2& u);
Dual2 exp(const Dual2& u);
/// Integer power by repeated squaring; valid for any base (negative n needs u.v != 0).
Dual2 ipow(const Dual2& u, long long n);

enum class Func { Sin, Cos, Exp, Ln, Sqrt };
enum class BinOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number { double value; };
struct Variable { std::size_t index; std::string name; };
struct Negate { NodePtr operand; };
struct Binary { BinOp op; NodePtr lhs; NodePtr rhs; };
struct Call { Func func; NodePtr arg; };

struct Node {
    std::variant<Number, Variable, Negate, Binary, Call> data;
};

/// Immutable parsed expression. Variables are resolved to indices into the
/// identifier list given at parse time.
class Expr {
public:
    Expr() = default;
    explicit Expr(NodePtr root, std::vector<std::string> variables)
        : root_(std::move(root)), variables_(std::move(variables)) {}

    const NodePtr& root() const { return root_; }
    const std::vector<std::string>& variables() const { return variables_; }
    bool empty() const { return root_ == nullptr; }

    /// Plain value at a point (one entry per declared variable).
    double value(std::span<const double> point) const;
    /// Value and derivatives with respect to variable `wrt` at `point`.
    Dual2 eval(std::span<const double> point, std::size_t wrt) const;
    /// Single-variable convenience: (value, d/dx, d2/dx2).
    Dual2 eval(double x) const;

    /// Fully parenthesized text that parses back to the same tree.
    std::string to_string() const;

private:
    NodePtr root_;
    std::vector<std::string> variables_;
};

/// Throws SyntaxError (1-based position) or UnknownIdentifier.
Expr parse_expression(std::string_view text, const std::vector<std::string>& variables);

/// Convenience for the single variable `x`.
inline Expr parse_expression(std::string_view text) { return parse_expression(text, {"x"}); }

/// Same as Expr::eval(x) for single-variable expressions.
Dual2 eval_dual(const Expr& e, double x);

bool structurally_equal(const Node& a, const Node& b);
inline bool structurally_equal(const Expr& a, const Expr& b) {
    return a.root() && b.root() && structurally_equal(*a.root(), *b.root());
}

std::string to_string(const Node& node);

}  // namespace pdm::expr
