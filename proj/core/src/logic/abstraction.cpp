#include "stamp/logic/abstraction.hpp"

#include <algorithm>

namespace stamp::logic {

AbstractionQuery AbstractionQuery::predicate_abstraction(VocabularyPtr source,
                                                         const std::vector<std::string>& retained) {
  AbstractionQuery q;
  q.kind = AbstractionKind::Predicate;
  q.target = std::make_shared<const Vocabulary>(source->restricted_to(retained));
  for (const auto& r : q.target->relations()) {
    DefiningFormula def;
    std::vector<Term> args;
    for (std::size_t i = 0; i < r.arity; ++i) {
      def.params.push_back("x" + std::to_string(i));
      args.push_back(Term::symbol(def.params.back()));
    }
    def.body = Formula::atom(r.name, std::move(args));
    q.defining.emplace(r.name, std::move(def));
  }
  q.source = std::move(source);
  return q;
}

void AbstractionQuery::validate() const {
  if (!source || !target) {
    throw AbstractionError("abstraction query requires source and target vocabularies");
  }
  for (const auto& [name, def] : defining) {
    const auto* r = target->relation(name);
    if (!r) {
      throw AbstractionError("defining formula for '" + name + "' which is not a target relation");
    }
    if (r->arity != def.params.size()) {
      throw AbstractionError("defining formula for '" + name + "' has wrong parameter count");
    }
    if (!def.body) {
      throw AbstractionError("defining formula for '" + name + "' is empty");
    }
  }
  if (kind == AbstractionKind::Predicate) {
    for (const auto& r : target->relations()) {
      const auto* s = source->relation(r.name);
      if (!s || s->arity != r.arity) {
        throw AbstractionError("predicate abstraction target '" + r.name + "' is not a source relation");
      }
      auto it = defining.find(r.name);
      if (it == defining.end()) {
        throw AbstractionError("target relation '" + r.name + "' has no defining formula");
      }
      const auto& body = *it->second.body;
      bool identity = body.kind() == Formula::Kind::Atom && body.name() == r.name;
      for (std::size_t i = 0; identity && i < r.arity; ++i) {
        identity = !body.terms()[i].application && body.terms()[i].name == it->second.params[i];
      }
      if (!identity) {
        throw AbstractionError("predicate abstraction must define '" + r.name + "' as its own atom");
      }
    }
  }
}

namespace {

LogicalStructure apply_predicate(const AbstractionQuery& alpha, const LogicalStructure& concrete) {
  LogicalStructure out(alpha.target);
  for (const auto& [id, e] : concrete.universe()) out.add_entity(id, e.sort, e.payload);
  for (const auto& r : alpha.target->relations()) {
    const Truth target_default = r.default_value;
    const Truth source_default = concrete.vocabulary().relation(r.name)->default_value;
    if (source_default != target_default) {
      // Materialize every tuple whose value differs from the target default.
      std::vector<Tuple> tuples{{}};
      for (std::size_t i = 0; i < r.arity; ++i) {
        std::vector<Tuple> next;
        for (const auto& t : tuples) {
          for (const auto& [id, e] : concrete.universe()) {
            if (!r.sorts.empty() && e.sort != r.sorts[i]) continue;
            Tuple u = t;
            u.push_back(id);
            next.push_back(std::move(u));
          }
        }
        tuples = std::move(next);
      }
      for (const auto& t : tuples) out.set(r.name, t, concrete.holds(r.name, t));
    } else {
      for (const auto& [t, v] : concrete.entries(r.name)) out.set(r.name, t, v);
    }
  }
  for (const auto& f : alpha.target->functions()) {
    for (const auto& [t, v] : concrete.function_entries(f.name)) out.set_function(f.name, t, v);
  }
  for (const auto& c : alpha.target->constants()) {
    if (concrete.has_constant_value(c)) out.set_constant(c, concrete.constant(c));
  }
  return out;
}

LogicalStructure apply_entity(const AbstractionQuery& alpha, const RepresentationFunction& rho,
                              const LogicalStructure& concrete) {
  // Members of each abstract entity among the concrete universe.
  std::map<EntityId, std::vector<EntityId>> members;
  for (const auto& [abstract, region] : rho.regions()) {
    if (const auto* ext = std::get_if<ExtensionalRegion>(&region)) {
      for (const auto& m : ext->members) {
        if (!concrete.has_entity(m)) {
          throw AbstractionError("region of '" + abstract + "' references unknown entity '" + m + "'");
        }
      }
    }
    auto& list = members[abstract];
    for (const auto& [id, e] : concrete.universe()) {
      if (contains(region, id, e)) list.push_back(id);
    }
  }

  LogicalStructure out(alpha.target);
  for (const auto& [abstract, region] : rho.regions()) out.add_entity(abstract, rho.sort(abstract));

  for (const auto& [name, def] : alpha.defining) {
    const auto* r = alpha.target->relation(name);
    // Enumerate abstract tuples (sort-filtered), then the witnesses they represent.
    std::vector<std::vector<EntityId>> domains(r->arity);
    for (std::size_t i = 0; i < r->arity; ++i) {
      for (const auto& [abstract, region] : rho.regions()) {
        if (!r->sorts.empty() && rho.sort(abstract) != r->sorts[i]) continue;
        domains[i].push_back(abstract);
      }
    }
    std::vector<std::size_t> idx(r->arity, 0);
    bool done = std::any_of(domains.begin(), domains.end(), [](const auto& d) { return d.empty(); });
    while (!done) {
      Tuple abstract_tuple(r->arity);
      for (std::size_t i = 0; i < r->arity; ++i) abstract_tuple[i] = domains[i][idx[i]];

      Truth value = Truth::False;
      std::vector<const std::vector<EntityId>*> candidates(r->arity);
      bool any_empty = false;
      for (std::size_t i = 0; i < r->arity; ++i) {
        candidates[i] = &members[abstract_tuple[i]];
        any_empty = any_empty || candidates[i]->empty();
      }
      if (!any_empty) {
        std::vector<std::size_t> w(r->arity, 0);
        for (bool more = true; more && value != Truth::True;) {
          Binding binding;
          for (std::size_t i = 0; i < r->arity; ++i) binding[def.params[i]] = (*candidates[i])[w[i]];
          value = value || evaluate(*def.body, concrete, binding);
          more = false;
          for (std::size_t i = r->arity; i-- > 0;) {
            if (++w[i] < candidates[i]->size()) {
              more = true;
              break;
            }
            w[i] = 0;
          }
        }
      }
      out.set(name, abstract_tuple, value);

      done = true;
      for (std::size_t i = r->arity; i-- > 0;) {
        if (++idx[i] < domains[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (r->arity == 0) done = true;
    }
  }
  for (const auto& c : alpha.target->constants()) {
    if (!concrete.has_constant_value(c)) continue;
    const EntityId& value = concrete.constant(c);
    for (const auto& [abstract, list] : members) {
      if (std::find(list.begin(), list.end(), value) != list.end()) {
        out.set_constant(c, abstract);
        break;
      }
    }
  }
  return out;
}

} // namespace

LogicalStructure apply_abstraction(const AbstractionQuery& alpha, const RepresentationFunction& rho,
                                   const LogicalStructure& concrete) {
  alpha.validate();
  if (alpha.kind == AbstractionKind::Predicate) return apply_predicate(alpha, concrete);
  return apply_entity(alpha, rho, concrete);
}

std::vector<LogicalStructure> abstract_image(const std::function<std::optional<LogicalStructure>()>& sampler,
                                             const AbstractionQuery& alpha,
                                             const RepresentationFunction& rho) {
  std::vector<LogicalStructure> out;
  std::map<std::string, std::vector<std::size_t>> by_key;
  while (auto x = sampler()) {
    LogicalStructure s = apply_abstraction(alpha, rho, *x);
    auto& bucket = by_key[s.interpretation_key()];
    bool seen = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t i) { return out[i] == s; });
    if (!seen) {
      bucket.push_back(out.size());
      out.push_back(std::move(s));
    }
  }
  return out;
}

} // namespace stamp::logic
