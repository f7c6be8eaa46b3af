#include "pdm/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pdm/error.hpp"

namespace pdm::expr {

Dual2 operator+(const Dual2& a, const Dual2& b) { return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2}; }
Dual2 operator-(const Dual2& a, const Dual2& b) { return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2}; }
Dual2 operator-(const Dual2& a) { return {-a.v, -a.d1, -a.d2}; }

Dual2 operator*(const Dual2& a, const Dual2& b) {
    return {a.v * b.v, a.d1 * b.v + a.v * b.d1, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

Dual2 operator/(const Dual2& a, const Dual2& b) {
    const double r = 1.0 / b.v;
    const Dual2 recip{r, -b.d1 * r * r, 2.0 * b.d1 * b.d1 * r * r * r - b.d2 * r * r};
    return a * recip;
}

Dual2 chain(const Dual2& u, double f, double df, double d2f) {
    return {f, df * u.d1, d2f * u.d1 * u.d1 + df * u.d2};
}

Dual2 sin(const Dual2& u) {
    const double s = std::sin(u.v), c = std::cos(u.v);
    return chain(u, s, c, -s);
}

Dual2 cos(const Dual2& u) {
    const double s = std::sin(u.v), c = std::cos(u.v);
    return chain(u, c, -s, -c);
}

Dual2 exp(const Dual2& u) {
    const double e = std::exp(u.v);
    return chain(u, e, e, e);
}

Dual2 ipow(const Dual2& u, long long n) {
    if (n < 0) return Dual2::constant(1.0) / ipow(u, -n);
    Dual2 result = Dual2::constant(1.0);
    Dual2 base = u;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* func_name(Func f) {
    switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

char op_char(BinOp op) {
    switch (op) {
    case BinOp::Add: return '+';
    case BinOp::Sub: return '-';
    case BinOp::Mul: return '*';
    case BinOp::Div: return '/';
    case BinOp::Pow: return '^';
    }
    return '?';
}

template <class... Ts>
struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string to_string(const Node& node) {
    return std::visit(
        overloaded{
            [](const Number& n) { return format_number(n.value); },
            [](const Variable& v) { return v.name; },
            [](const Negate& n) { return "(-" + to_string(*n.operand) + ")"; },
            [](const Binary& b) {
                return "(" + to_string(*b.lhs) + " " + op_char(b.op) + " " + to_string(*b.rhs) + ")";
            },
            [](const Call& c) { return std::string(func_name(c.func)) + "(" + to_string(*c.arg) + ")"; },
        },
        node.data);
}

std::string Expr::to_string() const { return root_ ? expr::to_string(*root_) : std::string{}; }

bool structurally_equal(const Node& a, const Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        overloaded{
            [&](const Number& n) { return n.value == std::get<Number>(b.data).value; },
            [&](const Variable& v) { return v.index == std::get<Variable>(b.data).index; },
            [&](const Negate& n) { return structurally_equal(*n.operand, *std::get<Negate>(b.data).operand); },
            [&](const Binary& x) {
                const auto& y = std::get<Binary>(b.data);
                return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) && structurally_equal(*x.rhs, *y.rhs);
            },
            [&](const Call& c) {
                const auto& d = std::get<Call>(b.data);
                return c.func == d.func && structurally_equal(*c.arg, *d.arg);
            },
        },
        a.data);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ < text_.size()) fail("operator or end of input");
        return e;
    }

private:
    std::string_view text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;
    int depth_ = 0;

    std::size_t nodes_ = 0;

    static constexpr int kMaxDepth = 512;
    static constexpr std::size_t kMaxNodes = 20000;

    NodePtr make(auto&& payload) {
        if (++nodes_ > kMaxNodes) fail("a shorter expression");
        return std::make_shared<const Node>(Node{std::forward<decltype(payload)>(payload)});
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& parser) : p(parser) {
            if (++p.depth_ > kMaxDepth) p.fail("shallower nesting");
        }
        ~DepthGuard() { --p.depth_; }
    };

    [[noreturn]] void fail(const std::string& expected) const { throw SyntaxError(pos_ + 1, expected); }

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expression() {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) lhs = make(Binary{BinOp::Add, lhs, term()});
            else if (accept('-')) lhs = make(Binary{BinOp::Sub, lhs, term()});
            else return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) lhs = make(Binary{BinOp::Mul, lhs, unary()});
            else if (accept('/')) lhs = make(Binary{BinOp::Div, lhs, unary()});
            else return lhs;
        }
    }

    NodePtr unary() {
        DepthGuard guard(*this);
        if (accept('-')) return make(Negate{unary()});
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Binary{BinOp::Pow, base, unary()});
        return base;
    }

    static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("number, identifier or '('");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expression();
            if (!accept(')')) fail("')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (is_ident_start(c)) return identifier();
        fail("number, identifier or '('");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
            ++pos_;
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
            if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                pos_ = look;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) {
            pos_ = start;
            fail("number");
        }
        return make(Number{value});
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        static constexpr std::pair<std::string_view, Func> funcs[] = {
            {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp}, {"ln", Func::Ln}, {"sqrt", Func::Sqrt}};
        for (const auto& [fname, f] : funcs) {
            if (name == fname) {
                if (!accept('(')) fail("'(' after " + name);
                NodePtr arg = expression();
                if (!accept(')')) fail("')'");
                return make(Call{f, arg});
            }
        }
        const auto it = std::find(vars_.begin(), vars_.end(), name);
        if (it == vars_.end()) throw UnknownIdentifier(name, start + 1);
        return make(Variable{static_cast<std::size_t>(it - vars_.begin()), name});
    }
};

}  // namespace

Expr parse_expression(std::string_view text, const std::vector<std::string>& variables) {
    Parser p(text, variables);
    return Expr(p.parse(), variables);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool is_integer(double v) {
    return std::isfinite(v) && std::floor(v) == v && std::fabs(v) < 9.0e15;
}

Dual2 evaluate(const Node& node, std::span<const double> point, std::size_t wrt) {
    return std::visit(
        overloaded{
            [](const Number& n) { return Dual2::constant(n.value); },
            [&](const Variable& v) {
                return v.index == wrt ? Dual2::variable(point[v.index]) : Dual2::constant(point[v.index]);
            },
            [&](const Negate& n) { return -evaluate(*n.operand, point, wrt); },
            [&](const Binary& b) {
                const Dual2 l = evaluate(*b.lhs, point, wrt);
                const Dual2 r = evaluate(*b.rhs, point, wrt);
                switch (b.op) {
                case BinOp::Add: return l + r;
                case BinOp::Sub: return l - r;
                case BinOp::Mul: return l * r;
                case BinOp::Div:
                    if (r.v == 0.0) throw ExprDomainError(to_string(node), "division by zero");
                    return l / r;
                case BinOp::Pow:
                    if (r.is_constant() && is_integer(r.v)) {
                        if (r.v < 0 && l.v == 0.0) throw ExprDomainError(to_string(node), "negative power of zero");
                        return ipow(l, static_cast<long long>(r.v));
                    }
                    if (!(l.v > 0.0))
                        throw ExprDomainError(to_string(node), "non-integer power of a non-positive base");
                    if (r.is_constant()) {
                        const double c = r.v;
                        const double p = std::pow(l.v, c);
                        return chain(l, p, c * p / l.v, c * (c - 1.0) * p / (l.v * l.v));
                    }
                    {
                        const Dual2 ln_l = chain(l, std::log(l.v), 1.0 / l.v, -1.0 / (l.v * l.v));
                        return exp(r * ln_l);
                    }
                }
                return Dual2{};
            },
            [&](const Call& c) {
                const Dual2 u = evaluate(*c.arg, point, wrt);
                switch (c.func) {
                case Func::Sin: return sin(u);
                case Func::Cos: return cos(u);
                case Func::Exp: return exp(u);
                case Func::Ln:
                    if (!(u.v > 0.0)) throw ExprDomainError(to_string(node), "logarithm of a non-positive value");
                    return chain(u, std::log(u.v), 1.0 / u.v, -1.0 / (u.v * u.v));
                case Func::Sqrt: {
                    if (u.v < 0.0) throw ExprDomainError(to_string(node), "square root of a negative value");
                    if (u.v == 0.0) {
                        if (u.is_constant()) return Dual2::constant(0.0);
                        throw ExprDomainError(to_string(node), "square root is not differentiable at zero");
                    }
                    const double s = std::sqrt(u.v);
                    return chain(u, s, 0.5 / s, -0.25 / (s * u.v));
                }
                }
                return Dual2{};
            },
        },
        node.data);
}

}  // namespace

Dual2 Expr::eval(std::span<const double> point, std::size_t wrt) const {
    if (point.size() < variables_.size())
        throw Error(ErrorKind::InvalidParameter, "expression evaluated with too few coordinates");
    return evaluate(*root_, point, wrt);
}

double Expr::value(std::span<const double> point) const {
    return eval(point, std::numeric_limits<std::size_t>::max()).v;
}

Dual2 Expr::eval(double x) const {
    const double pt[1] = {x};
    return evaluate(*root_, std::span<const double>(pt, 1), 0);
}

Dual2 eval_dual(const Expr& e, double x) { return e.eval(x); }

}  // namespace pdm::expr
