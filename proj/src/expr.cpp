#include "procgen/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "procgen/noise.hpp"

namespace procgen {

bool Expr::operator==(const Expr& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case ExprKind::Number: return number == o.number;
        case ExprKind::Ident: return name == o.name;
        case ExprKind::Unary:
        case ExprKind::Binary:
            if (op != o.op) return false;
            break;
        case ExprKind::Call:
            if (name != o.name) return false;
            break;
    }
    return kids == o.kids;
}

namespace {

struct Parser {
    std::string_view src;
    size_t pos = 0;
    int depth = 0;
    static constexpr int kMaxDepth = 256;

    [[noreturn]] void fail(const std::string& expected) {
        throw ParseError(pos, "expected " + expected);
    }

    void skip_ws() {
        while (pos < src.size() && (src[pos] == ' ' || src[pos] == '\t')) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool eat(std::string_view s) {
        skip_ws();
        if (src.substr(pos, s.size()) == s) {
            pos += s.size();
            return true;
        }
        return false;
    }

    // Keywords must not swallow a prefix of a longer identifier.
    bool eat_word(std::string_view w) {
        skip_ws();
        if (src.substr(pos, w.size()) != w) return false;
        size_t end = pos + w.size();
        if (end < src.size() && (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_'))
            return false;
        pos = end;
        return true;
    }

    struct DepthGuard {
        Parser& p;
        explicit DepthGuard(Parser& p_) : p(p_) {
            if (++p.depth > kMaxDepth) throw ParseError(p.pos, "expression nested too deeply");
        }
        ~DepthGuard() { --p.depth; }
    };

    Expr parse() {
        Expr e = or_expr();
        skip_ws();
        if (pos != src.size()) fail("end of expression");
        return e;
    }

    Expr or_expr() {
        DepthGuard g(*this);
        Expr e = and_expr();
        while (eat_word("or")) e = binary(ExprOp::Or, std::move(e), and_expr());
        return e;
    }

    Expr and_expr() {
        DepthGuard g(*this);
        Expr e = not_expr();
        while (eat_word("and")) e = binary(ExprOp::And, std::move(e), not_expr());
        return e;
    }

    Expr not_expr() {
        DepthGuard g(*this);
        if (eat_word("not")) {
            Expr e;
            e.kind = ExprKind::Unary;
            e.op = ExprOp::Not;
            e.kids.push_back(not_expr());
            return e;
        }
        return cmp_expr();
    }

    Expr cmp_expr() {
        DepthGuard g(*this);
        Expr e = add_expr();
        for (;;) {
            ExprOp op;
            if (eat("<=")) op = ExprOp::Le;
            else if (eat(">=")) op = ExprOp::Ge;
            else if (eat("==")) op = ExprOp::Eq;
            else if (eat("~=")) op = ExprOp::Ne;
            else if (eat('<')) op = ExprOp::Lt;
            else if (eat('>')) op = ExprOp::Gt;
            else break;
            e = binary(op, std::move(e), add_expr());
        }
        return e;
    }

    Expr add_expr() {
        DepthGuard g(*this);
        Expr e = mul_expr();
        for (;;) {
            if (eat('+')) e = binary(ExprOp::Add, std::move(e), mul_expr());
            else if (eat('-')) e = binary(ExprOp::Sub, std::move(e), mul_expr());
            else break;
        }
        return e;
    }

    Expr mul_expr() {
        DepthGuard g(*this);
        Expr e = pow_expr();
        for (;;) {
            if (eat('*')) e = binary(ExprOp::Mul, std::move(e), pow_expr());
            else if (eat('/')) e = binary(ExprOp::Div, std::move(e), pow_expr());
            else break;
        }
        return e;
    }

    Expr pow_expr() {
        DepthGuard g(*this);
        Expr e = unary_expr();
        if (eat('^')) e = binary(ExprOp::Pow, std::move(e), pow_expr());  // right-assoc
        return e;
    }

    Expr unary_expr() {
        DepthGuard g(*this);
        if (eat('-')) {
            Expr e;
            e.kind = ExprKind::Unary;
            e.op = ExprOp::Neg;
            e.kids.push_back(unary_expr());
            return e;
        }
        return primary();
    }

    Expr primary() {
        DepthGuard g(*this);
        skip_ws();
        if (pos >= src.size()) fail("expression");
        char c = src[pos];
        if (c == '(') {
            ++pos;
            Expr e = or_expr();
            if (!eat(')')) fail("')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident_or_call();
        fail("number, identifier or '('");
    }

    Expr number() {
        size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        bool int_part = pos > start;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            size_t frac = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (!int_part && pos == frac) {
                pos = start;
                fail("digits in number");
            }
        }
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            size_t mark = pos++;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            size_t digits = pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
            if (pos == digits) pos = mark;  // "2e" is number 2 followed by ident e
        }
        Expr e;
        e.kind = ExprKind::Number;
        Real v = 0;
        auto [p, ec] = std::from_chars(src.data() + start, src.data() + pos, v);
        if (ec != std::errc() || p != src.data() + pos) {
            pos = start;
            fail("number");
        }
        e.number = v;
        return e;
    }

    Expr ident_or_call() {
        size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        std::string name(src.substr(start, pos - start));
        if (name == "and" || name == "or" || name == "not") {
            pos = start;
            fail("expression, not keyword '" + name + "'");
        }
        skip_ws();
        if (pos < src.size() && src[pos] == '(') {
            ++pos;
            Expr e;
            e.kind = ExprKind::Call;
            e.name = std::move(name);
            skip_ws();
            if (!eat(')')) {
                for (;;) {
                    e.kids.push_back(or_expr());
                    if (eat(',')) continue;
                    if (eat(')')) break;
                    fail("',' or ')'");
                }
            }
            return e;
        }
        Expr e;
        e.kind = ExprKind::Ident;
        e.name = std::move(name);
        return e;
    }

    static Expr binary(ExprOp op, Expr&& l, Expr&& r) {
        Expr e;
        e.kind = ExprKind::Binary;
        e.op = op;
        e.kids.push_back(std::move(l));
        e.kids.push_back(std::move(r));
        return e;
    }
};

Real call_builtin(const std::string& name, const std::vector<Real>& args) {
    auto want = [&](size_t lo, size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw EvalError("wrong number of arguments to " + name + "()");
    };
    if (name == "sin") { want(1, 1); return std::sin(args[0]); }
    if (name == "cos") { want(1, 1); return std::cos(args[0]); }
    if (name == "abs") { want(1, 1); return std::abs(args[0]); }
    if (name == "min") { want(2, 2); return std::min(args[0], args[1]); }
    if (name == "max") { want(2, 2); return std::max(args[0], args[1]); }
    if (name == "noise") {
        want(1, 3);
        if (args.size() == 1) return noise(args[0]);
        if (args.size() == 2) return noise(args[0], args[1]);
        return noise(args[0], args[1], args[2]);
    }
    throw EvalError("unknown function '" + name + "'");
}

int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Number:
        case ExprKind::Ident:
        case ExprKind::Call: return 9;
        case ExprKind::Unary: return e.op == ExprOp::Neg ? 8 : 3;
        case ExprKind::Binary:
            switch (e.op) {
                case ExprOp::Pow: return 7;
                case ExprOp::Mul:
                case ExprOp::Div: return 6;
                case ExprOp::Add:
                case ExprOp::Sub: return 5;
                case ExprOp::Or: return 1;
                case ExprOp::And: return 2;
                default: return 4;  // comparisons
            }
    }
    return 9;
}

const char* op_text(ExprOp op) {
    switch (op) {
        case ExprOp::Add: return "+";
        case ExprOp::Sub: return "-";
        case ExprOp::Mul: return "*";
        case ExprOp::Div: return "/";
        case ExprOp::Pow: return "^";
        case ExprOp::Lt: return "<";
        case ExprOp::Le: return "<=";
        case ExprOp::Gt: return ">";
        case ExprOp::Ge: return ">=";
        case ExprOp::Eq: return "==";
        case ExprOp::Ne: return "~=";
        case ExprOp::And: return "and";
        case ExprOp::Or: return "or";
        case ExprOp::Neg: return "-";
        case ExprOp::Not: return "not";
    }
    return "?";
}

void print_expr(const Expr& e, int min_level, std::string& out) {
    int level = precedence(e);
    bool parens = level < min_level;
    if (parens) out += '(';
    switch (e.kind) {
        case ExprKind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.number);
            out += buf;
            break;
        }
        case ExprKind::Ident:
            out += e.name;
            break;
        case ExprKind::Call:
            out += e.name;
            out += '(';
            for (size_t i = 0; i < e.kids.size(); ++i) {
                if (i) out += ", ";
                print_expr(e.kids[i], 0, out);
            }
            out += ')';
            break;
        case ExprKind::Unary:
            if (e.op == ExprOp::Not) {
                out += "not ";
                print_expr(e.kids[0], level, out);
            } else {
                out += '-';
                print_expr(e.kids[0], level, out);
            }
            break;
        case ExprKind::Binary: {
            // '^' is right-assoc: parenthesise an equal-level left child instead.
            bool right_assoc = e.op == ExprOp::Pow;
            const char* txt = op_text(e.op);
            bool word = e.op == ExprOp::And || e.op == ExprOp::Or;
            print_expr(e.kids[0], right_assoc ? level + 1 : level, out);
            if (word) {
                out += ' ';
                out += txt;
                out += ' ';
            } else if (e.op == ExprOp::Pow) {
                out += txt;
            } else {
                out += ' ';
                out += txt;
                out += ' ';
            }
            print_expr(e.kids[1], right_assoc ? level : level + 1, out);
            break;
        }
    }
    if (parens) out += ')';
}

}  // namespace

Expr parse_expr(std::string_view src) {
    Parser p{src};
    p.skip_ws();
    if (p.pos == src.size()) throw ParseError(0, "expected nonempty expression");
    return p.parse();
}

Real eval_expr(const Expr& e, const Env& env) {
    switch (e.kind) {
        case ExprKind::Number:
            return e.number;
        case ExprKind::Ident: {
            auto it = env.vars.find(e.name);
            if (it != env.vars.end()) return it->second;
            if (e.name == "pi") return kPi;
            throw EvalError("unbound identifier '" + e.name + "'");
        }
        case ExprKind::Unary: {
            Real v = eval_expr(e.kids[0], env);
            return e.op == ExprOp::Neg ? -v : (v != 0 ? Real(0) : Real(1));
        }
        case ExprKind::Call: {
            std::vector<Real> args;
            args.reserve(e.kids.size());
            for (const Expr& k : e.kids) args.push_back(eval_expr(k, env));
            return call_builtin(e.name, args);
        }
        case ExprKind::Binary: {
            Real a = eval_expr(e.kids[0], env);
            Real b = eval_expr(e.kids[1], env);
            switch (e.op) {
                case ExprOp::Add: return a + b;
                case ExprOp::Sub: return a - b;
                case ExprOp::Mul: return a * b;
                case ExprOp::Div:
                    if (b == 0) throw EvalError("division by zero");
                    return a / b;
                case ExprOp::Pow: return std::pow(a, b);
                case ExprOp::Lt: return a < b ? 1 : 0;
                case ExprOp::Le: return a <= b ? 1 : 0;
                case ExprOp::Gt: return a > b ? 1 : 0;
                case ExprOp::Ge: return a >= b ? 1 : 0;
                case ExprOp::Eq: return a == b ? 1 : 0;
                case ExprOp::Ne: return a != b ? 1 : 0;
                case ExprOp::And: return (a != 0 && b != 0) ? 1 : 0;
                case ExprOp::Or: return (a != 0 || b != 0) ? 1 : 0;
                default: break;
            }
            break;
        }
    }
    throw EvalError("malformed expression node");
}

std::string to_string(const Expr& e) {
    std::string out;
    print_expr(e, 0, out);
    return out;
}

}  // namespace procgen
