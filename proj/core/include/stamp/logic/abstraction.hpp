#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/logic/formula.hpp"
#include "stamp/logic/region.hpp"
#include "stamp/logic/structure.hpp"

namespace stamp::logic {

class AbstractionError : public Error {
public:
  using Error::Error;
};

enum class AbstractionKind { Predicate, Entity };

struct DefiningFormula {
  std::vector<std::string> params;
  FormulaPtr body;
};

/// First-order query from a source vocabulary to a target vocabulary.
struct AbstractionQuery {
  VocabularyPtr source;
  VocabularyPtr target;
  std::map<std::string, DefiningFormula> defining;
  AbstractionKind kind = AbstractionKind::Predicate;

  /// Keeps `retained` symbols and defines each as its own atom.
  static AbstractionQuery predicate_abstraction(VocabularyPtr source,
                                                const std::vector<std::string>& retained);

  void validate() const;
};

/// alpha_rho(concrete). For entity abstraction an abstract atom is True iff some
/// tuple of represented concrete entities satisfies its defining formula,
/// Unknown iff none does but some evaluates Unknown, False otherwise.
LogicalStructure apply_abstraction(const AbstractionQuery& alpha, const RepresentationFunction& rho,
                                   const LogicalStructure& concrete);

/// [C]_alpha for a finite sample of concrete states, deduplicated.
std::vector<LogicalStructure> abstract_image(const std::function<std::optional<LogicalStructure>()>& sampler,
                                             const AbstractionQuery& alpha,
                                             const RepresentationFunction& rho);

} // namespace stamp::logic
