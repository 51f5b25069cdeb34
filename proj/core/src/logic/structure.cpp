#include "stamp/logic/structure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace stamp::logic {

// ---- Vocabulary ------------------------------------------------------------

void Vocabulary::claim(const std::string& name, Kind kind) {
  if (name.empty()) {
    throw VocabularyError("empty symbol name");
  }
  if (kinds_.count(name)) {
    throw VocabularyError("duplicate symbol '" + name + "'");
  }
  std::size_t index = 0;
  switch (kind) {
  case Kind::Relation: index = relations_.size(); break;
  case Kind::Function: index = functions_.size(); break;
  case Kind::Constant: index = constants_.size(); break;
  }
  kinds_.emplace(name, std::make_pair(kind, index));
}

Vocabulary& Vocabulary::add_relation(RelationSymbol symbol) {
  if (!symbol.sorts.empty() && symbol.sorts.size() != symbol.arity) {
    throw VocabularyError("relation '" + symbol.name + "' declares " +
                          std::to_string(symbol.sorts.size()) + " sorts for arity " +
                          std::to_string(symbol.arity));
  }
  claim(symbol.name, Kind::Relation);
  relations_.push_back(std::move(symbol));
  return *this;
}

Vocabulary& Vocabulary::add_function(FunctionSymbol symbol) {
  claim(symbol.name, Kind::Function);
  functions_.push_back(std::move(symbol));
  return *this;
}

Vocabulary& Vocabulary::add_constant(std::string name) {
  claim(name, Kind::Constant);
  constants_.push_back(std::move(name));
  return *this;
}

const RelationSymbol* Vocabulary::relation(const std::string& name) const {
  auto it = kinds_.find(name);
  if (it == kinds_.end() || it->second.first != Kind::Relation) return nullptr;
  return &relations_[it->second.second];
}

const FunctionSymbol* Vocabulary::function(const std::string& name) const {
  auto it = kinds_.find(name);
  if (it == kinds_.end() || it->second.first != Kind::Function) return nullptr;
  return &functions_[it->second.second];
}

bool Vocabulary::has_constant(const std::string& name) const {
  auto it = kinds_.find(name);
  return it != kinds_.end() && it->second.first == Kind::Constant;
}

Vocabulary Vocabulary::restricted_to(const std::vector<std::string>& names) const {
  Vocabulary out;
  for (const auto& name : names) {
    if (const auto* r = relation(name)) {
      out.add_relation(*r);
    } else if (const auto* f = function(name)) {
      out.add_function(*f);
    } else if (has_constant(name)) {
      out.add_constant(name);
    } else {
      throw VocabularyError("cannot retain unknown symbol '" + name + "'");
    }
  }
  return out;
}

// ---- LogicalStructure ------------------------------------------------------

std::string format_atom(const std::string& relation, const Tuple& args) {
  std::string out = relation + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += args[i];
  }
  return out + ")";
}

LogicalStructure::LogicalStructure(VocabularyPtr vocabulary)
    : vocabulary_(std::move(vocabulary)), universe_(std::make_shared<const Universe>()) {
  if (!vocabulary_) {
    throw StructureError("structure requires a vocabulary");
  }
}

void LogicalStructure::add_entity(const EntityId& id, std::string sort, Payload payload) {
  if (id.empty()) {
    throw StructureError("empty entity id");
  }
  auto copy = std::make_shared<Universe>(*universe_);
  auto [it, inserted] = copy->emplace(id, Entity{std::move(sort), std::move(payload)});
  if (!inserted) {
    throw StructureError("duplicate entity '" + id + "'");
  }
  universe_ = std::move(copy);
}

const Entity& LogicalStructure::entity(const EntityId& id) const {
  auto it = universe_->find(id);
  if (it == universe_->end()) {
    throw StructureError("unknown entity '" + id + "'");
  }
  return it->second;
}

std::vector<EntityId> LogicalStructure::entities_of_sort(const std::string& sort) const {
  std::vector<EntityId> out;
  for (const auto& [id, e] : *universe_) {
    if (sort.empty() || e.sort == sort) out.push_back(id);
  }
  return out;
}

void LogicalStructure::check_tuple(const std::string& symbol, std::size_t arity,
                                   const Tuple& args) const {
  if (args.size() != arity) {
    throw StructureError(symbol + " expects " + std::to_string(arity) + " arguments, got " +
                         std::to_string(args.size()));
  }
  for (const auto& a : args) {
    if (!universe_->count(a)) {
      throw StructureError("tuple element '" + a + "' of " + symbol + " is not in the universe");
    }
  }
}

Truth LogicalStructure::holds(const std::string& relation, const Tuple& args) const {
  const auto* sym = vocabulary_->relation(relation);
  if (!sym) {
    throw StructureError("unknown relation '" + relation + "'");
  }
  if (auto it = relations_.find(relation); it != relations_.end()) {
    if (auto jt = it->second.find(args); jt != it->second.end()) {
      return jt->second;
    }
  }
  return sym->default_value;
}

void LogicalStructure::set(const std::string& relation, const Tuple& args, Truth value) {
  const auto* sym = vocabulary_->relation(relation);
  if (!sym) {
    throw StructureError("unknown relation '" + relation + "'");
  }
  check_tuple(relation, sym->arity, args);
  if (value == sym->default_value) {
    if (auto it = relations_.find(relation); it != relations_.end()) {
      it->second.erase(args);
      if (it->second.empty()) relations_.erase(it);
    }
  } else {
    relations_[relation][args] = value;
  }
}

const std::map<Tuple, Truth>& LogicalStructure::entries(const std::string& relation) const {
  static const std::map<Tuple, Truth> kEmpty;
  auto it = relations_.find(relation);
  return it == relations_.end() ? kEmpty : it->second;
}

std::optional<EntityId> LogicalStructure::apply(const std::string& function, const Tuple& args) const {
  auto it = functions_.find(function);
  if (it != functions_.end()) {
    if (auto jt = it->second.find(args); jt != it->second.end()) {
      return jt->second;
    }
  }
  throw StructureError(format_atom(function, args) + " is undefined");
}

bool LogicalStructure::defines(const std::string& function, const Tuple& args) const {
  auto it = functions_.find(function);
  return it != functions_.end() && it->second.count(args) > 0;
}

const std::map<Tuple, std::optional<EntityId>>& LogicalStructure::function_entries(
    const std::string& function) const {
  static const std::map<Tuple, std::optional<EntityId>> kEmpty;
  auto it = functions_.find(function);
  return it == functions_.end() ? kEmpty : it->second;
}

void LogicalStructure::set_function(const std::string& function, const Tuple& args,
                                    std::optional<EntityId> value) {
  const auto* sym = vocabulary_->function(function);
  if (!sym) {
    throw StructureError("unknown function '" + function + "'");
  }
  check_tuple(function, sym->arity, args);
  if (value && !universe_->count(*value)) {
    throw StructureError("value '" + *value + "' of " + function + " is not in the universe");
  }
  functions_[function][args] = std::move(value);
}

void LogicalStructure::set_constant(const std::string& name, const EntityId& value) {
  if (!vocabulary_->has_constant(name)) {
    throw StructureError("unknown constant '" + name + "'");
  }
  if (!universe_->count(value)) {
    throw StructureError("constant value '" + value + "' is not in the universe");
  }
  constants_[name] = value;
}

const EntityId& LogicalStructure::constant(const std::string& name) const {
  auto it = constants_.find(name);
  if (it == constants_.end()) {
    throw StructureError("constant '" + name + "' has no interpretation");
  }
  return it->second;
}

std::string LogicalStructure::interpretation_key() const {
  std::string key;
  key.reserve(256);
  for (const auto& [rel, tuples] : relations_) {
    key += rel;
    key += '{';
    for (const auto& [args, value] : tuples) {
      for (const auto& a : args) {
        key += a;
        key += ',';
      }
      key += value == Truth::True ? 'T' : value == Truth::False ? 'F' : 'U';
      key += ';';
    }
    key += '}';
  }
  for (const auto& [fn, map] : functions_) {
    key += fn;
    key += '[';
    for (const auto& [args, value] : map) {
      for (const auto& a : args) {
        key += a;
        key += ',';
      }
      key += value ? *value : std::string("?");
      key += ';';
    }
    key += ']';
  }
  for (const auto& [c, v] : constants_) {
    key += c + "=" + v + ";";
  }
  return key;
}

std::string LogicalStructure::describe() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [rel, tuples] : relations_) {
    for (const auto& [args, value] : tuples) {
      if (!first) os << ", ";
      first = false;
      if (value == Truth::False) os << '!';
      if (value == Truth::Unknown) os << '?';
      os << format_atom(rel, args);
    }
  }
  for (const auto& [fn, map] : functions_) {
    for (const auto& [args, value] : map) {
      if (!first) os << ", ";
      first = false;
      os << format_atom(fn, args) << "=" << (value ? *value : std::string("?"));
    }
  }
  return "{" + os.str() + "}";
}

namespace {

bool payload_equal(const Payload& a, const Payload& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kPayloadTolerance) return false;
  }
  return true;
}

} // namespace

bool operator==(const LogicalStructure& a, const LogicalStructure& b) {
  if (a.universe_ != b.universe_) {
    if (a.universe_->size() != b.universe_->size()) return false;
    auto it = a.universe_->begin();
    for (const auto& [id, e] : *b.universe_) {
      if (it->first != id || it->second.sort != e.sort || !payload_equal(it->second.payload, e.payload)) {
        return false;
      }
      ++it;
    }
  }
  return a.relations_ == b.relations_ && a.functions_ == b.functions_ && a.constants_ == b.constants_;
}

bool compatible(const LogicalStructure& a, const LogicalStructure& b) {
  std::set<std::string> names;
  for (const auto& r : a.vocabulary().relations()) {
    if (b.vocabulary().relation(r.name)) names.insert(r.name);
  }
  for (const auto& name : names) {
    std::set<Tuple> tuples;
    for (const auto& [t, v] : a.entries(name)) tuples.insert(t);
    for (const auto& [t, v] : b.entries(name)) tuples.insert(t);
    for (const auto& t : tuples) {
      bool in_a = std::all_of(t.begin(), t.end(), [&](const auto& e) { return a.has_entity(e); });
      bool in_b = std::all_of(t.begin(), t.end(), [&](const auto& e) { return b.has_entity(e); });
      if (!in_a || !in_b) continue;
      Truth va = a.holds(name, t);
      Truth vb = b.holds(name, t);
      if (va != Truth::Unknown && vb != Truth::Unknown && va != vb) return false;
    }
  }
  return true;
}

} // namespace stamp::logic
