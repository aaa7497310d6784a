#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "procgen/error.hpp"
#include "procgen/geom.hpp"

namespace procgen {

enum class ExprKind { Number, Ident, Unary, Binary, Call };

enum class ExprOp { Neg, Not, Add, Sub, Mul, Div, Pow, Lt, Le, Gt, Ge, Eq, Ne, And, Or };

// Immutable-after-parse expression tree. Comparisons and logicals evaluate
// to 1/0 so parameters and conditions share one value type.
struct Expr {
    ExprKind kind = ExprKind::Number;
    ExprOp op = ExprOp::Add;   // Unary/Binary only
    Real number = 0;           // Number only
    std::string name;          // Ident/Call only
    std::vector<Expr> kids;

    bool operator==(const Expr& o) const;
};

struct Env {
    std::map<std::string, Real, std::less<>> vars;
};

// Precedence, loose to tight: or, and, not, comparisons, +-, */,
// ^ (right-assoc), unary minus. Throws ParseError with a byte offset.
Expr parse_expr(std::string_view src);

// Unbound identifiers, unknown calls, wrong arity and division by zero all
// throw EvalError. Builtins: pi; sin, cos, abs (1 arg); min, max (2);
// noise (1-3). "and"/"or" evaluate both operands.
Real eval_expr(const Expr& e, const Env& env);

// Minimal-parenthesis form; reparsing yields an equal tree.
std::string to_string(const Expr& e);

}  // namespace procgen
