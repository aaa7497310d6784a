#include "procgen/lsystem.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace procgen {

namespace {

constexpr size_t npos = std::string_view::npos;

struct Cursor {
    std::string_view s;
    size_t p = 0;

    bool done() const { return p >= s.size(); }
    char peek() const { return p < s.size() ? s[p] : '\0'; }
    void skip_ws() {
        while (p < s.size() && std::isspace(static_cast<unsigned char>(s[p])))
            ++p;
    }
};

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Symbol names: identifiers with an optional trailing '#', or one of the
// bare turtle characters.
std::string read_symbol(Cursor& c) {
    c.skip_ws();
    if (c.done()) throw ParseError(c.p, "expected a symbol");
    char ch = c.peek();
    if (ch == '[' || ch == ']' || ch == '\\' || ch == '^') {
        ++c.p;
        return std::string(1, ch);
    }
    if (!ident_start(ch))
        throw ParseError(c.p, std::string("unexpected character '") + ch + "'");
    size_t start = c.p;
    while (!c.done() && ident_char(c.peek())) ++c.p;
    if (c.peek() == '#') ++c.p;
    return std::string(c.s.substr(start, c.p - start));
}

// Everything up to the next ',' or ')' (or a char in extra) at paren depth 0.
std::string_view scan_expr(Cursor& c, std::string_view extra = "") {
    size_t start = c.p;
    int depth = 0;
    while (!c.done()) {
        char ch = c.peek();
        if (ch == '(') {
            ++depth;
        } else if (ch == ')') {
            if (depth == 0) break;
            --depth;
        } else if (depth == 0 &&
                   (ch == ',' || extra.find(ch) != npos)) {
            break;
        }
        ++c.p;
    }
    return c.s.substr(start, c.p - start);
}

std::string_view trimmed(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

Expr parse_slice(std::string_view slice, size_t base) {
    if (trimmed(slice).empty()) throw ParseError(base, "empty expression");
    try {
        return parse_expr(slice);
    } catch (const ParseError& e) {
        throw ParseError(base + e.offset, e.message);
    }
}

Real eval_const(std::string_view slice, size_t base) {
    Expr e = parse_slice(slice, base);
    try {
        return eval_expr(e, Env{});
    } catch (const EvalError& err) {
        throw ParseError(base, err.what());
    }
}

std::vector<Real> read_args_eval(Cursor& c) {
    ++c.p;  // '('
    std::vector<Real> out;
    c.skip_ws();
    if (c.peek() == ')') {
        ++c.p;
        return out;
    }
    for (;;) {
        size_t base = c.p;
        out.push_back(eval_const(scan_expr(c), base));
        if (c.peek() == ',') {
            ++c.p;
            continue;
        }
        if (c.peek() == ')') {
            ++c.p;
            return out;
        }
        throw ParseError(c.p, "unterminated parameter list");
    }
}

std::vector<Expr> read_args_exprs(Cursor& c) {
    ++c.p;  // '('
    std::vector<Expr> out;
    c.skip_ws();
    if (c.peek() == ')') {
        ++c.p;
        return out;
    }
    for (;;) {
        size_t base = c.p;
        out.push_back(parse_slice(scan_expr(c), base));
        if (c.peek() == ',') {
            ++c.p;
            continue;
        }
        if (c.peek() == ')') {
            ++c.p;
            return out;
        }
        throw ParseError(c.p, "unterminated parameter list");
    }
}

bool takes_args(const std::string& symbol) {
    return symbol != "[" && symbol != "]";
}

Real read_age(Cursor& c, const char* what) {
    c.skip_ws();
    if (c.peek() != ',')
        throw ParseError(c.p, std::string("expected ',' and ") + what);
    ++c.p;
    size_t base = c.p;
    Real age = eval_const(scan_expr(c), base);
    if (age < 0) throw ParseError(base, std::string(what) + " must be >= 0");
    c.skip_ws();
    if (c.peek() != ')') throw ParseError(c.p, "expected ')'");
    ++c.p;
    return age;
}

Module parse_axiom_module(Cursor& c) {
    Module m;
    c.skip_ws();
    if (c.peek() == '(') {
        ++c.p;
        m.symbol = read_symbol(c);
        if (c.peek() == '(' && takes_args(m.symbol))
            m.params = read_args_eval(c);
        m.age = read_age(c, "an age");
    } else {
        m.symbol = read_symbol(c);
        if (c.peek() == '(' && takes_args(m.symbol))
            m.params = read_args_eval(c);
    }
    return m;
}

void collect_idents(const Expr& e, std::set<std::string>& out) {
    if (e.kind == ExprKind::Ident) out.insert(e.name);
    for (const Expr& k : e.kids) collect_idents(k, out);
}

void check_idents(const Expr& e, const std::vector<std::string>& formals,
                  size_t at) {
    std::set<std::string> names;
    collect_idents(e, names);
    for (const std::string& n : names) {
        if (n == "pi") continue;
        if (std::find(formals.begin(), formals.end(), n) != formals.end())
            continue;
        throw ParseError(at, "unknown identifier '" + n + "'");
    }
}

Successor parse_successor(Cursor& c, const std::vector<std::string>& formals) {
    Successor s;
    c.skip_ws();
    size_t at = c.p;
    if (c.peek() == '(') {
        ++c.p;
        s.symbol = read_symbol(c);
        if (c.peek() == '(' && takes_args(s.symbol))
            s.params = read_args_exprs(c);
        s.initial_age = read_age(c, "an initial age");
    } else {
        s.symbol = read_symbol(c);
        if (c.peek() == '(' && takes_args(s.symbol))
            s.params = read_args_exprs(c);
    }
    for (const Expr& e : s.params) check_idents(e, formals, at);
    return s;
}

void read_formals(Cursor& c, Production& p) {
    ++c.p;  // '('
    c.skip_ws();
    if (c.peek() == ')') {
        ++c.p;
        return;
    }
    for (;;) {
        c.skip_ws();
        if (!ident_start(c.peek()))
            throw ParseError(c.p, "formal parameter must be an identifier");
        size_t start = c.p;
        while (ident_char(c.peek())) ++c.p;
        std::string name(c.s.substr(start, c.p - start));
        if (std::find(p.formals.begin(), p.formals.end(), name) !=
            p.formals.end())
            throw ParseError(start, "duplicate formal parameter '" + name + "'");
        p.formals.push_back(std::move(name));
        c.skip_ws();
        if (c.peek() == ',') {
            ++c.p;
            continue;
        }
        if (c.peek() == ')') {
            ++c.p;
            return;
        }
        throw ParseError(c.p, "expected ',' or ')' in formal list");
    }
}

size_t find_arrow(std::string_view s) {
    int depth = 0;
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        else if (s[i] == ')') --depth;
        else if (depth == 0 && s[i] == '-' && s[i + 1] == '>') return i;
    }
    return npos;
}

Env bind(const Production& p, const Module& m) {
    Env env;
    for (size_t i = 0; i < p.formals.size(); ++i)
        env.vars.emplace(p.formals[i], m.params[i]);
    return env;
}

std::string format_param(Real v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    std::string s = buf;
    if (s == "-0") s = "0";
    return s;
}

}  // namespace

std::vector<Module> parse_axiom(std::string_view src) {
    Cursor c{src};
    std::vector<Module> out;
    int brackets = 0;
    for (;;) {
        c.skip_ws();
        if (c.done()) break;
        size_t at = c.p;
        Module m = parse_axiom_module(c);
        if (m.symbol == "[") ++brackets;
        if (m.symbol == "]" && --brackets < 0)
            throw ParseError(at, "unbalanced ']'");
        out.push_back(std::move(m));
    }
    if (brackets != 0) throw ParseError(src.size(), "unbalanced '['");
    return out;
}

Production parse_rule(std::string_view src) {
    size_t arrow = find_arrow(src);
    if (arrow == npos) throw ParseError(src.size(), "missing '->'");

    Production p;
    Cursor c{src.substr(0, arrow)};
    c.skip_ws();
    if (c.peek() == '(') {
        ++c.p;
        p.pred = read_symbol(c);
        c.skip_ws();
        if (c.peek() == '(') read_formals(c, p);
        c.skip_ws();
        if (c.peek() != ',')
            throw ParseError(c.p, "expected ',' and a terminal age");
        ++c.p;
        size_t base = c.p;
        p.terminal_age = eval_const(scan_expr(c), base);
        c.skip_ws();
        if (c.peek() != ')') throw ParseError(c.p, "expected ')'");
        ++c.p;
    } else {
        p.pred = read_symbol(c);
        c.skip_ws();
        if (c.peek() == '(') read_formals(c, p);
    }

    c.skip_ws();
    if (c.s.substr(c.p).starts_with("@min")) {
        c.p += 4;
        c.skip_ws();
        if (c.peek() != '=') throw ParseError(c.p, "expected '=' after @min");
        ++c.p;
        size_t base = c.p;
        p.min_age = eval_const(scan_expr(c, ":"), base);
    }

    c.skip_ws();
    if (c.peek() == ':') {
        ++c.p;
        size_t base = c.p;
        p.condition = parse_slice(c.s.substr(c.p), base);
        check_idents(*p.condition, p.formals, base);
        c.p = c.s.size();
    }
    c.skip_ws();
    if (!c.done()) throw ParseError(c.p, "unexpected text before '->'");

    Cursor rc{src};
    rc.p = arrow + 2;
    for (;;) {
        rc.skip_ws();
        if (rc.done()) break;
        p.successors.push_back(parse_successor(rc, p.formals));
    }
    return p;
}

LSystem::LSystem(std::vector<Module> axiom, std::vector<Production> rules)
    : string_(std::move(axiom)), prods_(std::move(rules)) {}

LSystem new_lsystem(std::string_view axiom,
                    const std::vector<std::string>& rules) {
    std::vector<Production> prods;
    prods.reserve(rules.size());
    for (const std::string& r : rules) prods.push_back(parse_rule(r));
    return LSystem(parse_axiom(axiom), std::move(prods));
}

const Production* LSystem::match_untimed(const Module& m) const {
    for (const Production& p : prods_) {
        if (p.pred != m.symbol || p.formals.size() != m.params.size())
            continue;
        if (p.condition && eval_expr(*p.condition, bind(p, m)) == 0) continue;
        return &p;
    }
    return nullptr;
}

const Production* LSystem::match_timed(const Module& m) const {
    if (!m.age) return nullptr;
    for (const Production& p : prods_) {
        if (!p.terminal_age) continue;
        if (p.pred != m.symbol || p.formals.size() != m.params.size())
            continue;
        if (*m.age < *p.terminal_age) continue;
        if (p.min_age && *m.age < *p.min_age) continue;
        if (p.condition && eval_expr(*p.condition, bind(p, m)) == 0) continue;
        return &p;
    }
    return nullptr;
}

void LSystem::rewrite(std::vector<Module>& out, const Production& p,
                      const Module& m, Real excess) const {
    Env env = bind(p, m);
    for (const Successor& s : p.successors) {
        Module nm;
        nm.symbol = s.symbol;
        nm.params.reserve(s.params.size());
        for (const Expr& e : s.params) nm.params.push_back(eval_expr(e, env));
        if (s.initial_age) nm.age = *s.initial_age + excess;
        out.push_back(std::move(nm));
    }
}

void LSystem::derive() {
    std::vector<Module> next;
    next.reserve(string_.size());
    try {
        for (const Module& m : string_) {
            if (const Production* p = match_untimed(m))
                rewrite(next, *p, m, 0);
            else
                next.push_back(m);
        }
    } catch (const EvalError& e) {
        throw DerivationError(std::string("derivation aborted: ") + e.what());
    }
    string_ = std::move(next);
    ++derivations_;
}

void LSystem::derive_timed(Real dt) {
    if (!(dt > 0))
        throw std::invalid_argument("derive_timed: dt must be positive");
    std::vector<Module> cur = string_;
    for (Module& m : cur)
        if (m.age) *m.age += dt;

    try {
        int passes = 0;
        bool fired = true;
        while (fired) {
            if (++passes > 10000)
                throw DerivationError(
                    "runaway production cascade (10000 rewrite passes)");
            fired = false;
            std::vector<Module> next;
            next.reserve(cur.size());
            for (const Module& m : cur) {
                if (const Production* p = match_timed(m)) {
                    rewrite(next, *p, m, *m.age - *p->terminal_age);
                    fired = true;
                } else {
                    next.push_back(m);
                }
            }
            if (fired) cur = std::move(next);
        }
    } catch (const EvalError& e) {
        throw DerivationError(std::string("derivation aborted: ") + e.what());
    }
    string_ = std::move(cur);
    clock_ += dt;
    ++derivations_;
}

Real growth_factor(const Module& mod, Real terminal) {
    if (!(terminal > 0))
        throw std::invalid_argument(
            "growth_factor: terminal age must be positive");
    if (!mod.age) return 1;
    return std::min(*mod.age / terminal, Real(1));
}

std::string to_string(const Module& m) {
    std::string base = m.symbol;
    if (!m.params.empty()) {
        base += '(';
        for (size_t i = 0; i < m.params.size(); ++i) {
            if (i) base += ',';
            base += format_param(m.params[i]);
        }
        base += ')';
    }
    if (m.age) return "(" + base + "," + format_param(*m.age) + ")";
    return base;
}

std::string to_string(const std::vector<Module>& s) {
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += to_string(s[i]);
    }
    return out;
}

LSystem parse_lsystem_source(std::string_view src) {
    std::optional<std::vector<Module>> axiom;
    std::vector<Production> rules;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= src.size()) {
        size_t nl = src.find('\n', pos);
        size_t end = (nl == npos) ? src.size() : nl;
        std::string_view line = trimmed(src.substr(pos, end - pos));
        ++line_no;
        if (!line.empty() && line.front() != '#') {
            size_t abs = static_cast<size_t>(line.data() - src.data());
            std::string ctx = "line " + std::to_string(line_no) + ": ";
            if (line.starts_with("axiom:")) {
                if (axiom)
                    throw ParseError(abs, ctx + "duplicate axiom");
                try {
                    axiom = parse_axiom(line.substr(6));
                } catch (const ParseError& e) {
                    throw ParseError(abs + 6 + e.offset, ctx + e.message);
                }
            } else if (line.starts_with("rule:")) {
                try {
                    rules.push_back(parse_rule(line.substr(5)));
                } catch (const ParseError& e) {
                    throw ParseError(abs + 5 + e.offset, ctx + e.message);
                }
            } else {
                throw ParseError(abs, ctx + "expected 'axiom:' or 'rule:'");
            }
        }
        if (nl == npos) break;
        pos = nl + 1;
    }
    if (!axiom) throw ParseError(src.size(), "missing axiom");
    return LSystem(std::move(*axiom), std::move(rules));
}

LSystem load_lsystem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_lsystem_source(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(e.offset, path + ": " + e.message);
    }
}

}  // namespace procgen
