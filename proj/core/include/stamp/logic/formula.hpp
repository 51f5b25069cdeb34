#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/structure.hpp"
#include "stamp/logic/truth.hpp"

namespace stamp::logic {

class MalformedFormula : public Error {
public:
  using Error::Error;
};

/// A name (variable, constant or entity id) or a function application.
struct Term {
  std::string name;
  std::vector<Term> args;
  bool application = false;

  static Term symbol(std::string name) { return Term{std::move(name), {}, false}; }
  static Term apply(std::string function, std::vector<Term> args) {
    return Term{std::move(function), std::move(args), true};
  }
  std::string to_string() const;
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
public:
  enum class Kind { Constant, Atom, Equal, Not, And, Or, Implies, Exists, Forall };

  static FormulaPtr constant(bool value);
  static FormulaPtr atom(std::string relation, std::vector<Term> args);
  static FormulaPtr equal(Term lhs, Term rhs);
  static FormulaPtr negate(FormulaPtr f);
  static FormulaPtr conj(std::vector<FormulaPtr> parts);
  static FormulaPtr disj(std::vector<FormulaPtr> parts);
  static FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
  /// Quantifiers range over the universe, restricted to `sort` when non-empty.
  static FormulaPtr exists(std::string var, std::string sort, FormulaPtr body);
  static FormulaPtr forall(std::string var, std::string sort, FormulaPtr body);

  Kind kind() const { return kind_; }
  bool value() const { return value_; }
  const std::string& name() const { return name_; }
  const std::string& sort() const { return sort_; }
  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<FormulaPtr>& children() const { return children_; }

  /// Parseable text form.
  std::string to_string() const;

private:
  Formula() = default;

  Kind kind_ = Kind::Constant;
  bool value_ = true;
  std::string name_;  // relation name or bound variable
  std::string sort_;  // quantifier sort
  std::vector<Term> terms_;
  std::vector<FormulaPtr> children_;
};

using Binding = std::map<std::string, EntityId>;

/// Value of a closed formula (after `binding`) in `structure`.
///
/// Names resolve in order: bound variable, constant symbol, universe entity.
/// The builtin relation `halfplane(p, b)` holds iff the payload of p, extended
/// with a trailing 1, has a negative dot product with the payload of b.
/// Throws MalformedFormula on unresolvable names or unknown symbols.
Truth evaluate(const Formula& formula, const LogicalStructure& structure,
               const Binding& binding = {});

/// Parses the text syntax:
///   f := g ('->' f)?         g := h ('|' h)*       h := u ('&' u)*
///   u := '!' u | ('forall'|'exists') var [':' sort] '.' f | '(' f ')'
///      | 'true' | 'false' | term ('=' | '!=') term | rel ['(' terms ')']
FormulaPtr parse_formula(std::string_view text);

/// Replaces free occurrences of the mapped names (variables bound by an
/// enclosing quantifier are left alone).
FormulaPtr substitute(const FormulaPtr& formula, const std::map<std::string, std::string>& names);
Term substitute(const Term& term, const std::map<std::string, std::string>& names);
Term parse_term(std::string_view text);

} // namespace stamp::logic
