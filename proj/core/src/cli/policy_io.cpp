#include <functional>
#include <set>

#include "stamp/cli/run.hpp"

namespace stamp::cli {

using nlohmann::json;

namespace {

json value_json(const logic::ConcreteValue& value) {
  if (auto* e = std::get_if<logic::EntityId>(&value)) return *e;
  if (auto* p = std::get_if<logic::Payload>(&value)) return *p;
  return std::get<logic::Waypoints>(value);
}

json world_json(const domains::WorldState& w) {
  json poses = json::object();
  for (const auto& [id, pose] : w.poses) poses[id] = pose;
  return {{"robot", w.robot},
          {"held", w.held ? json(*w.held) : json(nullptr)},
          {"battery", w.battery},
          {"poses", poses}};
}

bool descends(const refine::Prg& prg, refine::NodeId node, refine::NodeId ancestor) {
  std::optional<refine::NodeId> cur = node;
  while (cur) {
    if (*cur == ancestor) return true;
    cur = prg.node(*cur).parent;
  }
  return false;
}

} // namespace

Policy make_policy(const domains::StamppProblem& problem, const refine::PrgNode& node,
                   const std::map<ssp::VertexId, int>& refined, int snapshots) {
  Policy p;
  p.domain = problem.spec.name;
  p.snapshots = snapshots;
  p.root = node.tree.root();
  for (const auto& [id, vx] : node.tree.vertices()) {
    PolicyVertex pv;
    pv.id = id;
    pv.t = vx.t;
    pv.leaf = ssp::to_string(vx.leaf);
    pv.state = vx.state->describe();
    if (vx.action) {
      pv.schema = vx.action->schema;
      pv.bindings = vx.action->bindings;
      pv.cost = vx.action->cost;
      for (auto c : vx.children) {
        const auto& cv = node.tree.vertex(c);
        const auto& outcome = vx.action->outcomes.at(static_cast<std::size_t>(cv.outcome));
        pv.children.push_back({cv.outcome, cv.edge_probability, outcome.label, c});
      }
    }
    if (auto it = refined.find(id); it != refined.end()) pv.refined_since = it->second;
    if (auto it = node.sigma.find(id); it != node.sigma.end()) {
      pv.world = world_json(it->second.world);
      if (it->second.values) {
        pv.values = json::object();
        for (const auto& [param, value] : *it->second.values) pv.values[param] = value_json(value);
      }
    }
    p.vertices.emplace(id, std::move(pv));
  }
  for (const auto& [leaf, at] : refined) p.mass += node.tree.path_probability(leaf);
  p.mass = std::min(p.mass, 1.0);
  return p;
}

Policy make_policy(const domains::StamppProblem& problem, const refine::AtmResult& result) {
  const auto& node = result.prg.node(result.best);
  const int count = static_cast<int>(result.snapshots.size());
  std::map<ssp::VertexId, int> refined;
  for (const auto& [leaf, at] : node.refined) {
    int since = count;
    for (const auto& s : result.snapshots) {
      if (s.refined.count(leaf) && descends(result.prg, result.best, s.node)) {
        since = s.index;
        break;
      }
    }
    refined[leaf] = since;
  }
  return make_policy(problem, node, refined, count);
}

Policy make_policy(const domains::StamppProblem& problem, const refine::AtmResult& result,
                   const refine::Snapshot& snapshot) {
  std::map<ssp::VertexId, int> refined;
  for (auto leaf : snapshot.refined) refined[leaf] = 0;
  return make_policy(problem, result.prg.node(snapshot.node), refined, 1);
}

json policy_to_json(const Policy& policy) {
  std::function<json(std::uint64_t)> vertex = [&](std::uint64_t id) {
    const auto& v = policy.vertices.at(id);
    json j = {{"id", v.id}, {"t", v.t}, {"leaf", v.leaf}, {"state", v.state}};
    if (v.schema) {
      json b = json::array();
      for (const auto& [k, val] : v.bindings) b.push_back({k, val});
      j["action"] = {{"schema", *v.schema}, {"bindings", b}, {"cost", v.cost}};
      if (!v.values.is_null()) j["action"]["values"] = v.values;
    }
    if (!v.world.is_null()) j["world"] = v.world;
    if (v.refined_since >= 0) j["refined_since"] = v.refined_since;
    json kids = json::array();
    for (const auto& e : v.children) {
      kids.push_back({{"outcome", e.outcome}, {"probability", e.probability}, {"label", e.label},
                      {"vertex", vertex(e.child)}});
    }
    j["children"] = kids;
    return j;
  };
  return {{"domain", policy.domain},
          {"snapshots", policy.snapshots},
          {"prob_mass_refined", policy.mass},
          {"root", vertex(policy.root)}};
}

Policy policy_from_json(const json& j) {
  try {
    Policy p;
    p.domain = j.at("domain").get<std::string>();
    p.snapshots = j.value("snapshots", 0);
    p.mass = j.value("prob_mass_refined", 0.0);
    std::function<std::uint64_t(const json&)> read = [&](const json& v) {
      PolicyVertex pv;
      pv.id = v.at("id").get<std::uint64_t>();
      pv.t = v.at("t").get<int>();
      pv.leaf = v.at("leaf").get<std::string>();
      pv.state = v.value("state", "");
      pv.refined_since = v.value("refined_since", -1);
      if (v.contains("world")) pv.world = v.at("world");
      if (v.contains("action")) {
        const auto& a = v.at("action");
        pv.schema = a.at("schema").get<std::string>();
        for (const auto& kv : a.at("bindings")) {
          pv.bindings.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
        }
        pv.cost = a.at("cost").get<double>();
        if (a.contains("values")) pv.values = a.at("values");
      }
      for (const auto& e : v.at("children")) {
        PolicyEdge edge;
        edge.outcome = e.at("outcome").get<int>();
        edge.probability = e.at("probability").get<double>();
        edge.label = e.value("label", "");
        edge.child = read(e.at("vertex"));
        pv.children.push_back(edge);
      }
      const auto id = pv.id;
      if (!p.vertices.emplace(id, std::move(pv)).second) throw CliError("duplicate vertex id " + std::to_string(id));
      return id;
    };
    p.root = read(j.at("root"));
    return p;
  } catch (const json::exception& e) {
    throw CliError(std::string("malformed policy: ") + e.what());
  }
}

void check_consistent(const Policy& policy, const domains::StamppProblem& problem) {
  if (policy.domain != problem.spec.name) {
    throw CliError("policy is for domain '" + policy.domain + "', not '" + problem.spec.name + "'");
  }
  std::set<std::string> known;
  for (const auto& a : problem.abstract_model.actions()) known.insert(a.to_string());
  for (const auto& [id, v] : policy.vertices) {
    if (!v.schema) continue;
    ssp::GroundedAction probe;
    probe.schema = *v.schema;
    probe.bindings = v.bindings;
    if (!known.count(probe.to_string())) {
      throw CliError("vertex " + std::to_string(id) + ": action " + probe.to_string() + " not in domain");
    }
  }
}

} // namespace stamp::cli
