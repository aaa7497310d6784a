#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "procgen/expr.hpp"

namespace procgen {

// One symbol instance in a derivation string. Parameters are plain reals;
// ages only exist on timed modules.
struct Module {
    std::string symbol;
    std::vector<Real> params;
    std::optional<Real> age;
    bool operator==(const Module&) const = default;
};

struct Successor {
    std::string symbol;
    std::vector<Expr> params;  // evaluated when the production fires
    std::optional<Real> initial_age;
};

struct Production {
    std::string pred;
    std::vector<std::string> formals;
    std::optional<Expr> condition;
    std::optional<Real> min_age;
    std::optional<Real> terminal_age;
    std::vector<Successor> successors;
};

// Parametric L-system with the timed extension. derive() is the classic
// parallel rewrite; derive_timed() ages every timed module and fires any
// whose production's terminal age is reached, cascading until quiet.
class LSystem {
public:
    LSystem(std::vector<Module> axiom, std::vector<Production> rules);

    const std::vector<Module>& current() const { return string_; }
    const std::vector<Production>& productions() const { return prods_; }
    int derivation_count() const { return derivations_; }
    Real clock() const { return clock_; }

    void derive();
    void derive_timed(Real dt);

private:
    const Production* match_untimed(const Module& m) const;
    const Production* match_timed(const Module& m) const;
    void rewrite(std::vector<Module>& out, const Production& p,
                 const Module& m, Real excess) const;

    std::vector<Module> string_;
    std::vector<Production> prods_;
    int derivations_ = 0;
    Real clock_ = 0;
};

// Module forms: `X`, `X(e1,…,en)`, timed `(X(e1,…),age)`, and the bare
// symbols `[`, `]`, `\`, `^`. Names may carry a trailing `#`. Expressions
// are evaluated immediately against the builtins.
std::vector<Module> parse_axiom(std::string_view src);

// `PRED [@min=a] [: COND] -> SUCC…`, where PRED is `X(formals…)` or the
// timed `(X(formals…),terminal)`. Successor parameter expressions stay
// unevaluated; successor ages and the terminal/min ages are constants.
Production parse_rule(std::string_view src);

LSystem new_lsystem(std::string_view axiom,
                    const std::vector<std::string>& rules);

// min(age/terminal, 1); untimed modules count as fully grown.
Real growth_factor(const Module& mod, Real terminal);

std::string to_string(const Module& m);
std::string to_string(const std::vector<Module>& s);

// `axiom:` / `rule:` line format with full-line # comments.
LSystem parse_lsystem_source(std::string_view src);
LSystem load_lsystem(const std::string& path);

}  // namespace procgen
