#include "stamp/logic/formula.hpp"

#include <optional>
#include <utility>

namespace stamp::logic {

std::string Term::to_string() const {
  if (!application) return name;
  std::string out = name + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i].to_string();
  }
  return out + ")";
}

FormulaPtr Formula::constant(bool value) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Constant;
  f->value_ = value;
  return f;
}

FormulaPtr Formula::atom(std::string relation, std::vector<Term> args) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Atom;
  f->name_ = std::move(relation);
  f->terms_ = std::move(args);
  return f;
}

FormulaPtr Formula::equal(Term lhs, Term rhs) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Equal;
  f->terms_ = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::negate(FormulaPtr g) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Not;
  f->children_ = {std::move(g)};
  return f;
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> parts) {
  if (parts.size() == 1) return parts.front();
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::And;
  f->children_ = std::move(parts);
  return f;
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> parts) {
  if (parts.size() == 1) return parts.front();
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Or;
  f->children_ = std::move(parts);
  return f;
}

FormulaPtr Formula::implies(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Implies;
  f->children_ = {std::move(lhs), std::move(rhs)};
  return f;
}

FormulaPtr Formula::exists(std::string var, std::string sort, FormulaPtr body) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Exists;
  f->name_ = std::move(var);
  f->sort_ = std::move(sort);
  f->children_ = {std::move(body)};
  return f;
}

FormulaPtr Formula::forall(std::string var, std::string sort, FormulaPtr body) {
  auto f = std::shared_ptr<Formula>(new Formula());
  f->kind_ = Kind::Forall;
  f->name_ = std::move(var);
  f->sort_ = std::move(sort);
  f->children_ = {std::move(body)};
  return f;
}

std::string Formula::to_string() const {
  auto join = [this](const char* op) {
    std::string out = "(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
      if (i) out += op;
      out += children_[i]->to_string();
    }
    return out + ")";
  };
  switch (kind_) {
  case Kind::Constant: return value_ ? "true" : "false";
  case Kind::Atom: {
    std::string out = name_ + "(";
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += ", ";
      out += terms_[i].to_string();
    }
    return out + ")";
  }
  case Kind::Equal: return terms_[0].to_string() + " = " + terms_[1].to_string();
  case Kind::Not: return "!" + (children_[0]->kind_ == Kind::Equal ? "(" + children_[0]->to_string() + ")"
                                                                    : children_[0]->to_string());
  case Kind::And: return join(" & ");
  case Kind::Or: return join(" | ");
  case Kind::Implies: return "(" + children_[0]->to_string() + " -> " + children_[1]->to_string() + ")";
  case Kind::Exists:
  case Kind::Forall: {
    std::string out = kind_ == Kind::Exists ? "(exists " : "(forall ";
    out += name_;
    if (!sort_.empty()) out += ":" + sort_;
    return out + ". " + children_[0]->to_string() + ")";
  }
  }
  return {};
}

namespace {

/// Variable scope as a small stack; inner bindings shadow outer ones.
class Scope {
public:
  explicit Scope(const Binding& base) : base_(base) {}

  const EntityId* lookup(const std::string& name) const {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
      if (*it->first == name) return &it->second;
    }
    auto it = base_.find(name);
    return it == base_.end() ? nullptr : &it->second;
  }
  void push(const std::string& name, EntityId value) { stack_.emplace_back(&name, std::move(value)); }
  void pop() { stack_.pop_back(); }

private:
  const Binding& base_;
  std::vector<std::pair<const std::string*, EntityId>> stack_;
};

struct TermValue {
  bool known = true;
  EntityId id;
};

class Evaluator {
public:
  Evaluator(const LogicalStructure& s, const Binding& b) : s_(s), scope_(b) {}

  Truth eval(const Formula& f) {
    switch (f.kind()) {
    case Formula::Kind::Constant: return from_bool(f.value());
    case Formula::Kind::Atom: return eval_atom(f);
    case Formula::Kind::Equal: {
      TermValue a = term(f.terms()[0]);
      TermValue b = term(f.terms()[1]);
      if (!a.known || !b.known) return Truth::Unknown;
      return from_bool(a.id == b.id);
    }
    case Formula::Kind::Not: return !eval(*f.children()[0]);
    case Formula::Kind::And: {
      Truth acc = Truth::True;
      for (const auto& c : f.children()) {
        acc = acc && eval(*c);
        if (acc == Truth::False) break;
      }
      return acc;
    }
    case Formula::Kind::Or: {
      Truth acc = Truth::False;
      for (const auto& c : f.children()) {
        acc = acc || eval(*c);
        if (acc == Truth::True) break;
      }
      return acc;
    }
    case Formula::Kind::Implies: return !eval(*f.children()[0]) || eval(*f.children()[1]);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      const bool universal = f.kind() == Formula::Kind::Forall;
      Truth acc = universal ? Truth::True : Truth::False;
      for (const auto& [id, e] : s_.universe()) {
        if (!f.sort().empty() && e.sort != f.sort()) continue;
        scope_.push(f.name(), id);
        Truth v = eval(*f.children()[0]);
        scope_.pop();
        acc = universal ? (acc && v) : (acc || v);
        if (acc == (universal ? Truth::False : Truth::True)) break;
      }
      return acc;
    }
    }
    throw MalformedFormula("unhandled formula kind");
  }

private:
  Truth eval_atom(const Formula& f) {
    const auto* sym = s_.vocabulary().relation(f.name());
    if (!sym) {
      if (f.name() == "halfplane" && f.terms().size() == 2) return halfplane(f);
      throw MalformedFormula("unknown relation '" + f.name() + "' in " + f.to_string());
    }
    if (sym->arity != f.terms().size()) {
      throw MalformedFormula("arity mismatch in " + f.to_string());
    }
    Tuple args;
    args.reserve(f.terms().size());
    for (const auto& t : f.terms()) {
      TermValue v = term(t);
      if (!v.known) return Truth::Unknown;
      args.push_back(std::move(v.id));
    }
    return s_.holds(f.name(), args);
  }

  Truth halfplane(const Formula& f) {
    TermValue p = term(f.terms()[0]);
    TermValue b = term(f.terms()[1]);
    if (!p.known || !b.known) return Truth::Unknown;
    const Payload& point = s_.entity(p.id).payload;
    const Payload& boundary = s_.entity(b.id).payload;
    if (boundary.size() != point.size() + 1) {
      throw MalformedFormula("halfplane: boundary of '" + b.id + "' must have dimension " +
                             std::to_string(point.size() + 1));
    }
    double dot = boundary.back();
    for (std::size_t i = 0; i < point.size(); ++i) dot += point[i] * boundary[i];
    return from_bool(dot < 0.0);
  }

  TermValue term(const Term& t) {
    if (t.application) {
      const auto* sym = s_.vocabulary().function(t.name);
      if (!sym) throw MalformedFormula("unknown function '" + t.name + "'");
      if (sym->arity != t.args.size()) throw MalformedFormula("arity mismatch in " + t.to_string());
      Tuple args;
      for (const auto& a : t.args) {
        TermValue v = term(a);
        if (!v.known) return {false, {}};
        args.push_back(std::move(v.id));
      }
      if (!s_.defines(t.name, args)) {
        throw MalformedFormula(t.to_string() + " is undefined in the structure");
      }
      auto value = s_.apply(t.name, args);
      if (!value) return {false, {}};
      return {true, *value};
    }
    if (const EntityId* bound = scope_.lookup(t.name)) return {true, *bound};
    if (s_.vocabulary().has_constant(t.name)) {
      if (!s_.has_constant_value(t.name)) return {false, {}};
      return {true, s_.constant(t.name)};
    }
    if (s_.has_entity(t.name)) return {true, t.name};
    throw MalformedFormula("unbound variable or unknown symbol '" + t.name + "'");
  }

  const LogicalStructure& s_;
  Scope scope_;
};

} // namespace

Truth evaluate(const Formula& formula, const LogicalStructure& structure, const Binding& binding) {
  return Evaluator(structure, binding).eval(formula);
}

Term substitute(const Term& term, const std::map<std::string, std::string>& names) {
  Term out = term;
  if (!term.application) {
    auto it = names.find(term.name);
    if (it != names.end()) out.name = it->second;
    return out;
  }
  for (auto& a : out.args) a = substitute(a, names);
  return out;
}

FormulaPtr substitute(const FormulaPtr& formula, const std::map<std::string, std::string>& names) {
  const Formula& f = *formula;
  auto terms = [&] {
    std::vector<Term> out;
    for (const auto& t : f.terms()) out.push_back(substitute(t, names));
    return out;
  };
  auto children = [&](const std::map<std::string, std::string>& m) {
    std::vector<FormulaPtr> out;
    for (const auto& c : f.children()) out.push_back(substitute(c, m));
    return out;
  };
  switch (f.kind()) {
    case Formula::Kind::Constant: return formula;
    case Formula::Kind::Atom: return Formula::atom(f.name(), terms());
    case Formula::Kind::Equal: {
      auto t = terms();
      return Formula::equal(t[0], t[1]);
    }
    case Formula::Kind::Not: return Formula::negate(children(names)[0]);
    case Formula::Kind::And: return Formula::conj(children(names));
    case Formula::Kind::Or: return Formula::disj(children(names));
    case Formula::Kind::Implies: {
      auto c = children(names);
      return Formula::implies(c[0], c[1]);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      auto inner = names;
      inner.erase(f.name());
      auto body = children(inner)[0];
      return f.kind() == Formula::Kind::Exists ? Formula::exists(f.name(), f.sort(), body)
                                               : Formula::forall(f.name(), f.sort(), body);
    }
  }
  return formula;
}

} // namespace stamp::logic
