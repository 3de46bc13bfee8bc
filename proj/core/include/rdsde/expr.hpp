#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "rdsde/error.hpp"

namespace rdsde {

/// Identifier that is neither a variable, a declared parameter nor a function.
class UnknownIdentifierError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

/// Function called with the wrong number of arguments.
class ArityError : public SyntaxError {
public:
    using SyntaxError::SyntaxError;
};

enum class VarKind {
    time,     ///< t
    current,  ///< x1..xd, the state at t
    delayed,  ///< xd1..xdd, the state at t - r
    sup,      ///< s1..sd, sup of |x_i| over [-r, t]
};

enum class UnaryOp { sin, cos, exp, abs, neg };
enum class BinaryOp { add, sub, mul, div, pow };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { constant, parameter, variable, unary, binary };

    Kind kind = Kind::constant;
    double value = 0.0;       ///< constant, or bound parameter value
    std::string name;         ///< parameter name
    VarKind var = VarKind::time;
    std::size_t index = 0;    ///< 0-based component of x / xd / s
    UnaryOp unary = UnaryOp::neg;
    BinaryOp binary = BinaryOp::add;
    ExprNodePtr lhs;
    ExprNodePtr rhs;
};

/// Variable values an expression is evaluated against. Spans may be empty when
/// the expression does not use the corresponding variable.
struct EvalContext {
    double t = 0.0;
    std::span<const double> current;
    std::span<const double> delayed;
    std::span<const double> sup;
};

using ParamMap = std::map<std::string, double, std::less<>>;

/// Immutable arithmetic expression over t, x_i, xd_i, s_i and named parameters.
///
/// Grammar (whitespace-insensitive, usual precedence, left-associative except ^):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' unary)?
///     primary := number | identifier | identifier '(' args ')' | '(' expr ')'
///
/// Functions: sin, cos, exp, abs, neg (one argument), pow (two).
class Expr {
public:
    Expr() = default;
    explicit Expr(ExprNodePtr root) : root_(std::move(root)) {}

    /// Parses `source` for a state of dimension `dim`.
    static Expr parse(std::string_view source, const ParamMap& params, std::size_t dim);

    /// Canonical form: binary operations fully parenthesized, pow and unary
    /// minus written as calls, constants in shortest round-trip notation.
    std::string print() const;

    double eval(const EvalContext& ctx) const;

    bool uses(VarKind kind) const;
    const ExprNodePtr& root() const noexcept { return root_; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    ExprNodePtr root_;
};

/// Structural equality of two trees.
bool same_tree(const ExprNode& a, const ExprNode& b);

}  // namespace rdsde
