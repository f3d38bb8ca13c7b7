#pragma once

// Text formats: programs (.idl), fact databases (.edb), Kripke structures
// and temporal formulas.
//
// Program syntax:
//   phi(X) <- q(X).                 % `:-` also accepted
//   phi(X) :- p(X), suc(X,Y), ~r(Y).
//   .gfp theta                      % tag as greatest fixpoint
//   .order theta, phi               % evaluation order, innermost first
//   .param g                        % externally supplied predicate
//   .monadic                        % request the monadicity check
// Variables start with an uppercase letter; constants are integers or
// lowercase identifiers. `%` starts a comment.
//
// Kripke syntax (one statement per `;`):
//   state s;  label s p q;  trans suc s t;

#include <stdexcept>
#include <string>
#include <string_view>

#include "infdl/formula.hpp"
#include "infdl/model.hpp"

namespace infdl {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, SourceSpan span)
      : std::runtime_error(span.str() + ": " + message), message_(message), span_(std::move(span)) {}

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  SourceSpan span_;
};

Program parse_program(std::string_view text, const std::string& file = {});
Database parse_database(std::string_view text, const std::string& file = {});
Database parse_kripke(std::string_view text, const std::string& file = {});
FormulaPtr parse_formula(std::string_view text, const std::string& file = {});

std::string print_program(const Program& program);
std::string print_database(const Database& db);
std::string print_rule(const Rule& rule);

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace infdl
