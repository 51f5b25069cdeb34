#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/truth.hpp"

namespace stamp::logic {

class VocabularyError : public Error {
public:
  using Error::Error;
};

struct RelationSymbol {
  std::string name;
  std::size_t arity = 0;
  /// Optional per-position sorts; empty means unsorted.
  std::vector<std::string> sorts;
  /// Value of tuples without an explicit entry. Geometric fluents whose truth
  /// the abstract model cannot determine default to Unknown.
  Truth default_value = Truth::False;
  /// Computed from continuous state rather than stored in concrete states.
  bool derived = false;
};

struct FunctionSymbol {
  std::string name;
  std::size_t arity = 0;
};

/// Relation, function and constant symbols. Names are unique across all three.
class Vocabulary {
public:
  Vocabulary& add_relation(RelationSymbol symbol);
  Vocabulary& add_relation(std::string name, std::size_t arity) {
    return add_relation(RelationSymbol{std::move(name), arity, {}, Truth::False, false});
  }
  Vocabulary& add_function(FunctionSymbol symbol);
  Vocabulary& add_constant(std::string name);

  const RelationSymbol* relation(const std::string& name) const;
  const FunctionSymbol* function(const std::string& name) const;
  bool has_constant(const std::string& name) const;
  bool contains(const std::string& name) const { return kinds_.count(name) > 0; }

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  const std::vector<FunctionSymbol>& functions() const { return functions_; }
  const std::vector<std::string>& constants() const { return constants_; }

  /// Sub-vocabulary keeping only the named symbols (predicate abstraction).
  Vocabulary restricted_to(const std::vector<std::string>& names) const;

private:
  enum class Kind { Relation, Function, Constant };
  void claim(const std::string& name, Kind kind);

  std::vector<RelationSymbol> relations_;
  std::vector<FunctionSymbol> functions_;
  std::vector<std::string> constants_;
  std::map<std::string, std::pair<Kind, std::size_t>> kinds_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

} // namespace stamp::logic
