#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace procgen {

// Base for all engine errors. Precondition violations on arguments use
// std::invalid_argument directly.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A handle whose slot was freed or reused since it was issued.
struct StaleHandleError : Error {
    using Error::Error;
};

// Navigation across a boundary edge where no adjacent face exists.
struct BoundaryError : Error {
    using Error::Error;
};

// Input mesh/vertex outside the operation's supported class
// (non-manifold mesh, boundary vertex, ...).
struct UnsupportedInputError : Error {
    using Error::Error;
};

// Syntax error with the byte offset into the source text. `message` keeps
// the text without the offset suffix so callers can rebase the offset when
// the parsed text was a slice of something larger.
struct ParseError : Error {
    std::size_t offset;
    std::string message;
    ParseError(std::size_t off, const std::string& msg)
        : Error(msg + " (at offset " + std::to_string(off) + ")"),
          offset(off),
          message(msg) {}
};

// Expression evaluation failure (unbound identifier, bad arity, division
// by zero). The L-system layer re-wraps these with rule context.
struct EvalError : Error {
    using Error::Error;
};

// Derivation aborted: evaluation failure inside a rewrite, or the
// runaway-production guard tripped.
struct DerivationError : Error {
    using Error::Error;
};

// Turtle interpretation failure (unmapped symbol, pop on empty stack,
// cylinder commands outside begin/end).
struct InterpretError : Error {
    using Error::Error;
};

// Scene-graph reparenting that would create a cycle.
struct HierarchyError : Error {
    using Error::Error;
};

// File I/O failure; message carries the path and, for parsers, the line.
struct IoError : Error {
    using Error::Error;
};

}  // namespace procgen
