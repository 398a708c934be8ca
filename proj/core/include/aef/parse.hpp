#pragma once

#include <stdexcept>
#include <string>

#include "aef/expr.hpp"
#include "aef/symbols.hpp"

namespace aef {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Grammar: sums and differences of products and quotients of (possibly
// negated) powers; `^` is right associative and binds tighter than unary
// minus. Calls are `name(expr)`; opaque functions are written `a0(u0)` and
// their derivatives `a0'(u0)`, `a0''(u0)`. Literals: `3`, `0.5`; an integer
// literal divided by an integer literal is read as one rational constant.
Expr parse(const std::string& text, const SymbolTable& table);

// Parse and normalize.
Expr parse_canonical(const std::string& text, const SymbolTable& table);

// Render in the grammar accepted by parse. For trees produced by parse,
// parse(render(e)) == e; for canonical trees, normalize(parse(render(e))) == e.
std::string render(const Expr& e, const SymbolTable& table);

}  // namespace aef
