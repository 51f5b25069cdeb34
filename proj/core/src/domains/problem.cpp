#include "stamp/domains/problem.hpp"

#include <cmath>
#include <set>

namespace stamp::domains {

using logic::LogicalStructure;
using logic::Truth;

std::string instantiate(const std::string& pattern, const std::map<std::string, std::string>& bindings) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      if (close == std::string::npos) throw DomainError("unterminated '{' in '" + pattern + "'");
      auto name = pattern.substr(i + 1, close - i - 1);
      auto it = bindings.find(name);
      if (it == bindings.end()) throw DomainError("unknown parameter '" + name + "' in '" + pattern + "'");
      out += it->second;
      i = close;
    } else {
      out += pattern[i];
    }
  }
  return out;
}

ssp::Effect parse_effect(const std::string& text, const std::map<std::string, std::string>& bindings) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s += c;
  }
  ssp::Effect e;
  if (!s.empty() && s[0] == '!') {
    e.value = Truth::False;
    s = s.substr(1);
  } else if (!s.empty() && s[0] == '?') {
    e.value = Truth::Unknown;
    s = s.substr(1);
  }
  auto open = s.find('(');
  if (open == std::string::npos) {
    e.relation = s;
  } else {
    if (s.back() != ')') throw DomainError("malformed effect '" + text + "'");
    e.relation = s.substr(0, open);
    std::string args = s.substr(open + 1, s.size() - open - 2);
    std::size_t start = 0;
    while (start <= args.size() && !args.empty()) {
      auto comma = args.find(',', start);
      std::string a = args.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (a.empty()) throw DomainError("empty argument in effect '" + text + "'");
      auto it = bindings.find(a);
      e.args.push_back(it == bindings.end() ? a : it->second);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (e.relation.empty()) throw DomainError("malformed effect '" + text + "'");
  return e;
}

namespace {

double resolve_probability(const DomainSpec& spec, const ProbabilitySpec& p,
                           const std::map<std::string, std::string>& bindings, const std::string& where) {
  if (p.attr.empty()) return p.value;
  auto it = bindings.find(p.param);
  if (it == bindings.end()) throw DomainError(where + ": unknown parameter '" + p.param + "' in probability");
  const auto* e = spec.entity(it->second);
  auto a = e ? e->attrs.find(p.attr) : decltype(e->attrs.find(p.attr)){};
  if (!e || a == e->attrs.end()) {
    throw DomainError(where + ": entity '" + it->second + "' has no attribute '" + p.attr + "'");
  }
  return p.complement ? 1.0 - a->second : a->second;
}

void check_effect(const logic::Vocabulary& vocab, const ssp::Effect& e, const std::string& where) {
  const auto* r = vocab.relation(e.relation);
  if (!r) throw DomainError(where + ": unknown predicate '" + e.relation + "'");
  if (r->arity != e.args.size()) throw DomainError(where + ": wrong arity for '" + e.relation + "'");
}

} // namespace

StamppProblem build_problem(const DomainSpec& spec) {
  std::set<std::string> sorts(spec.sorts.begin(), spec.sorts.end());
  auto check_sort = [&](const std::string& s, const std::string& where) {
    if (!sorts.count(s)) throw DomainError(where + ": unknown sort '" + s + "'");
  };

  auto vocab = std::make_shared<logic::Vocabulary>();
  for (const auto& p : spec.predicates) {
    for (const auto& s : p.params) check_sort(s, "predicate " + p.name);
    logic::RelationSymbol r;
    r.name = p.name;
    r.arity = p.params.size();
    r.sorts = p.params;
    r.derived = !p.derived.empty();
    r.default_value = r.derived ? Truth::Unknown : Truth::False;
    try {
      vocab->add_relation(r);
    } catch (const Error& e) {
      throw DomainError("predicate " + p.name + ": " + e.what());
    }
  }

  // Universe: declared entities, then one entity per symbolic argument.
  std::vector<std::pair<std::string, std::string>> universe;
  std::set<std::string> ids;
  for (const auto& e : spec.entities) {
    check_sort(e.sort, "entity " + e.id);
    if (!ids.insert(e.id).second) throw DomainError("duplicate entity '" + e.id + "'");
    universe.emplace_back(e.id, e.sort);
  }

  struct Grounding {
    const ActionSpec* spec;
    std::map<std::string, std::string> bindings;
    std::vector<std::pair<std::string, std::string>> ordered;
  };
  std::vector<Grounding> groundings;
  std::set<std::string> action_names;
  for (const auto& a : spec.actions) {
    const std::string where = "action " + a.name;
    if (!action_names.insert(a.name).second) throw DomainError("duplicate action '" + a.name + "'");
    for (const auto& [n, s] : a.params) check_sort(s, where);
    for (const auto& s : a.symbols) check_sort(s.sort, where + " symbol " + s.param);
    std::vector<std::vector<std::string>> domains;
    for (const auto& [n, s] : a.params) {
      std::vector<std::string> d;
      for (const auto& e : spec.entities) {
        if (e.sort == s) d.push_back(e.id);
      }
      domains.push_back(std::move(d));
    }
    std::vector<std::size_t> idx(a.params.size(), 0);
    bool done = std::any_of(domains.begin(), domains.end(), [](const auto& d) { return d.empty(); });
    while (!done) {
      Grounding g{&a, {}, {}};
      for (std::size_t i = 0; i < a.params.size(); ++i) {
        g.bindings[a.params[i].first] = domains[i][idx[i]];
        g.ordered.emplace_back(a.params[i].first, domains[i][idx[i]]);
      }
      for (const auto& s : a.symbols) {
        std::string id = instantiate(s.entity, g.bindings);
        g.bindings[s.param] = id;
        g.ordered.emplace_back(s.param, id);
        if (ids.insert(id).second) universe.emplace_back(id, s.sort);
      }
      groundings.push_back(std::move(g));
      done = true;
      for (std::size_t i = a.params.size(); i-- > 0;) {
        if (++idx[i] < domains[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
    }
  }

  logic::VocabularyPtr vocab_ptr = vocab;
  LogicalStructure initial(vocab_ptr);
  for (const auto& [id, sort] : universe) {
    const auto* e = spec.entity(id);
    initial.add_entity(id, sort, e && e->pose ? *e->pose : logic::Payload{});
  }
  for (const auto& text : spec.initial) {
    auto eff = parse_effect(text, {});
    check_effect(*vocab, eff, "initial atom '" + text + "'");
    for (const auto& a : eff.args) {
      if (!initial.has_entity(a)) throw DomainError("initial atom '" + text + "': unknown entity '" + a + "'");
    }
    initial.set(eff.relation, eff.args, eff.value == Truth::Unknown ? Truth::Unknown : eff.value);
  }

  logic::FormulaPtr goal;
  try {
    goal = logic::parse_formula(spec.goal);
    (void)logic::evaluate(*goal, initial);
  } catch (const logic::MalformedFormula& e) {
    throw DomainError(std::string("goal: ") + e.what());
  }

  std::vector<ssp::GroundedAction> actions;
  for (const auto& g : groundings) {
    const ActionSpec& a = *g.spec;
    const std::string where = "action " + a.name;
    ssp::GroundedAction ga;
    ga.schema = a.name;
    ga.bindings = g.ordered;
    ga.cost = a.cost;
    try {
      ga.precondition = logic::substitute(logic::parse_formula(a.precondition), g.bindings);
      (void)logic::evaluate(*ga.precondition, initial);
    } catch (const logic::MalformedFormula& e) {
      throw DomainError(where + " precondition: " + e.what());
    }
    double total = 0.0;
    const std::size_t m = a.independent.size();
    if (m > 16) throw DomainError(where + ": too many independent effect groups");
    for (std::size_t j = 0; j < a.outcomes.size(); ++j) {
      const auto& o = a.outcomes[j];
      double p = resolve_probability(spec, o.p, g.bindings, where);
      if (p < -1e-12 || p > 1.0 + 1e-12) throw DomainError(where + ": outcome probability outside [0, 1]");
      total += p;
      std::vector<ssp::Effect> base;
      for (const auto& t : o.effects) {
        base.push_back(parse_effect(t, g.bindings));
        check_effect(*vocab, base.back(), where + " effect '" + t + "'");
      }
      for (const auto& c : o.concrete) {
        if (!c.symbol.empty() && std::none_of(a.symbols.begin(), a.symbols.end(),
                                              [&](const SymbolSpec& s) { return s.param == c.symbol; })) {
          throw DomainError(where + ": concrete effect references unknown symbol '" + c.symbol + "'");
        }
      }
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        ssp::Outcome out;
        out.probability = std::max(0.0, p);
        out.effects = base;
        out.label = o.label;
        for (std::size_t i = 0; i < m; ++i) {
          const auto& grp = a.independent[i];
          if (mask & (1u << i)) {
            out.probability *= grp.p;
            for (const auto& t : grp.effects) {
              out.effects.push_back(parse_effect(t, g.bindings));
              check_effect(*vocab, out.effects.back(), where + " effect '" + t + "'");
            }
            out.label += (out.label.empty() ? "" : "+") + grp.label;
          } else {
            out.probability *= 1.0 - grp.p;
          }
        }
        ga.outcomes.push_back(std::move(out));
      }
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw DomainError(where + " " + ga.serialized_bindings() + ": outcome probabilities sum to " +
                        std::to_string(total) + ", expected 1");
    }
    actions.push_back(std::move(ga));
  }

  for (const auto& a : spec.actions) {
    for (const auto& s : a.symbols) {
      if (s.generator == "placement" && !spec.entity(s.region)) {
        throw DomainError("action " + a.name + ": unknown placement region '" + s.region + "'");
      }
      if (s.generator == "placement" && !spec.entity(s.region)->region) {
        throw DomainError("action " + a.name + ": entity '" + s.region + "' has no region");
      }
    }
  }

  auto engine = std::make_shared<const Engine>(spec, vocab_ptr);

  StamppProblem problem{spec,
                        vocab_ptr,
                        engine,
                        engine->initial_world(),
                        {},
                        {},
                        ssp::SspModel(initial, goal, spec.horizon, std::move(actions)),
                        1.0};

  const auto& lo = spec.scene.lo;
  const auto& hi = spec.scene.hi;
  problem.workspace_measure = (hi[0] - lo[0]) * (hi[1] - lo[1]);
  logic::BoxRegion workspace{{lo[0], lo[1]}, {hi[0], hi[1]}};
  for (const auto& [id, sort] : universe) {
    const auto* e = spec.entity(id);
    if (e) {
      problem.rho.set(id, logic::ExtensionalRegion{{id}}, sort);
      continue;
    }
    // Symbol entity: sample space of its generator.
    logic::Region region = workspace;
    for (const auto& a : spec.actions) {
      for (const auto& s : a.symbols) {
        if (s.sort == sort && s.generator == "placement") region = to_region(*spec.entity(s.region)->region);
      }
    }
    problem.rho.set(id, region, sort);
  }

  problem.alpha.kind = logic::AbstractionKind::Entity;
  problem.alpha.source = vocab_ptr;
  problem.alpha.target = vocab_ptr;
  for (const auto& r : vocab->relations()) {
    if (r.derived) continue;
    logic::DefiningFormula def;
    std::vector<logic::Term> args;
    for (std::size_t i = 0; i < r.arity; ++i) {
      def.params.push_back("x" + std::to_string(i));
      args.push_back(logic::Term::symbol(def.params.back()));
    }
    def.body = logic::Formula::atom(r.name, std::move(args));
    problem.alpha.defining.emplace(r.name, std::move(def));
  }
  return problem;
}

StamppProblem load_problem_text(const std::string& json) { return build_problem(parse_domain(json)); }

StamppProblem load_problem_file(const std::string& path) {
  auto spec = load_domain_file(path);
  try {
    return build_problem(spec);
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

LogicalStructure concrete_structure(const StamppProblem& problem, const WorldState& world,
                                    const LogicalStructure& discrete) {
  LogicalStructure out(problem.vocabulary);
  for (const auto& [id, e] : discrete.universe()) {
    auto it = world.poses.find(id);
    out.add_entity(id, e.sort, it != world.poses.end() ? it->second : logic::Payload{});
  }
  for (const auto& r : problem.vocabulary->relations()) {
    if (r.derived) continue;
    for (const auto& [t, v] : discrete.entries(r.name)) out.set(r.name, t, v);
  }
  return out;
}

LogicalStructure abstract_state(const StamppProblem& problem, const WorldState& world,
                                const LogicalStructure& discrete) {
  return logic::apply_abstraction(problem.alpha, problem.rho, concrete_structure(problem, world, discrete));
}

} // namespace stamp::domains
