#include "stamp/domains/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stamp/domains/problem.hpp"

namespace stamp::domains {

using logic::LogicalStructure;
using logic::Truth;
using motion::Config;

namespace {

constexpr int kPlacementTries = 20;

const logic::Waypoints* trajectory_of(const Assignment& values, const std::string& param) {
  auto it = values.find(param);
  if (it == values.end()) return nullptr;
  return std::get_if<logic::Waypoints>(&it->second);
}

const logic::Payload* payload_of(const Assignment& values, const std::string& param) {
  auto it = values.find(param);
  if (it == values.end()) return nullptr;
  return std::get_if<logic::Payload>(&it->second);
}

motion::Trajectory as_trajectory(const logic::Waypoints& w, double resolution) {
  return motion::Trajectory{w, resolution};
}

// Parameter value, or the name itself when it is a literal entity id.
const std::string& resolve(const ssp::GroundedAction& a, const std::string& name) {
  return a.has_binding(name) ? a.binding(name) : name;
}

std::map<std::string, std::string> binding_map(const ssp::GroundedAction& a) {
  return {a.bindings.begin(), a.bindings.end()};
}

} // namespace

std::string GroundAtom::to_string() const {
  std::string prefix = value == Truth::True ? "" : value == Truth::False ? "!" : "?";
  return prefix + logic::format_atom(relation, args);
}

motion::Shape to_shape(const ShapeSpec& spec) {
  if (spec.kind == "disc") return motion::Disc{{0.0, 0.0}, spec.radius};
  return motion::ConvexPolygon{spec.vertices};
}

logic::Region to_region(const RegionSpec& spec) {
  if (spec.kind == "box") return logic::BoxRegion{spec.lo, spec.hi};
  if (spec.kind == "polygon") {
    logic::PolygonRegion p;
    for (auto v : spec.vertices) p.vertices.push_back({v.x, v.y});
    return p;
  }
  return logic::ExtensionalRegion{{spec.members.begin(), spec.members.end()}};
}

Engine::Engine(DomainSpec spec, logic::VocabularyPtr vocabulary)
    : spec_(std::move(spec)),
      vocabulary_(std::move(vocabulary)),
      base_(spec_.scene.lo, spec_.scene.hi, to_shape(spec_.scene.robot)) {
  try {
    for (const auto& o : spec_.scene.obstacles) {
      if (o.pose.size() < 2) throw DomainError("obstacle '" + o.tag + "' needs a pose");
      double yaw = o.pose.size() > 2 ? o.pose[2] : 0.0;
      base_.add_obstacle(o.tag, motion::transformed(to_shape(o.shape), {o.pose[0], o.pose[1]}, yaw));
    }
    for (const auto& e : spec_.entities) {
      if (e.shape) base_.set_grasp_offset(e.id, spec_.scene.grasp_offset);
      if (e.region) regions_[e.id] = to_region(*e.region);
    }
  } catch (const motion::MotionError& e) {
    throw DomainError(std::string("scene: ") + e.what());
  }
  if (!base_.within_bounds(spec_.scene.home)) throw DomainError("scene: robot home out of bounds");
}

WorldState Engine::initial_world() const {
  WorldState w;
  for (const auto& e : spec_.entities) {
    if (e.shape && e.pose) w.poses[e.id] = *e.pose;
  }
  w.robot = spec_.scene.home;
  w.battery = spec_.battery ? spec_.battery->capacity : 0.0;
  return w;
}

motion::Shape Engine::object_shape(const std::string& object, const Config& pose) const {
  const auto* e = spec_.entity(object);
  double yaw = pose.size() > 2 ? pose[2] : 0.0;
  return motion::transformed(to_shape(*e->shape), {pose[0], pose[1]}, yaw);
}

motion::ConfigSpace Engine::scene(const WorldState& world) const {
  motion::ConfigSpace cs = base_;
  for (const auto& [id, pose] : world.poses) {
    if (world.held && *world.held == id) continue;
    auto shape = object_shape(id, pose);
    auto [lo, hi] = motion::bounding_box(shape);
    if (lo.x < cs.lo()[0] || lo.y < cs.lo()[1] || hi.x > cs.hi()[0] || hi.y > cs.hi()[1]) continue;
    cs.add_obstacle(id, std::move(shape));
  }
  return cs;
}

const ActionSpec& Engine::schema(const ssp::GroundedAction& action) const {
  const auto* a = spec_.action(action.schema);
  if (!a) throw DomainError("unknown action schema '" + action.schema + "'");
  return *a;
}

std::pair<std::size_t, std::uint32_t> Engine::decode_outcome(const ActionSpec& spec, std::size_t outcome) const {
  const std::size_t groups = std::size_t{1} << spec.independent.size();
  if (outcome >= spec.outcomes.size() * groups) throw DomainError("outcome index out of range");
  return {outcome / groups, static_cast<std::uint32_t>(outcome % groups)};
}

std::vector<std::string> Engine::symbolic_arguments(const ssp::GroundedAction& action) const {
  std::vector<std::string> out;
  for (const auto& s : schema(action).symbols) out.push_back(action.binding(s.param));
  return out;
}

std::set<std::string> Engine::ignored(const ssp::GroundedAction& action, const SymbolSpec& symbol,
                                      const WorldState& world) const {
  std::set<std::string> out;
  for (const auto& p : symbol.ignore) out.insert(resolve(action, p));
  if (world.held) out.insert(*world.held);
  return out;
}

std::optional<Config> Engine::motion_target(const ssp::GroundedAction& action, const SymbolSpec& symbol,
                                            const WorldState& world, const motion::ConfigSpace& scene,
                                            const Assignment& values) const {
  const auto& to = symbol.to;
  if (to.kind == "home") return spec_.scene.home;
  if (to.kind == "grasp") {
    const auto& obj = resolve(action, to.object);
    auto it = world.poses.find(obj);
    if (it == world.poses.end()) return std::nullopt;
    Config c = motion::placement_config(scene, obj, it->second);
    c.resize(scene.dimension(), 0.0);
    return c;
  }
  if (to.kind == "placement") {
    const auto* pose = payload_of(values, to.pose);
    if (!pose) throw DomainError("placement target needs symbol '" + to.pose + "' sampled first");
    Config c = motion::placement_config(scene, resolve(action, to.object), *pose);
    c.resize(scene.dimension(), 0.0);
    return c;
  }
  const auto* e = spec_.entity(resolve(action, to.entity));
  if (!e || !e->pose) throw DomainError("motion target entity has no pose");
  return *e->pose;
}

bool Engine::placement_clear(const WorldState& world, const std::string& object, const Config& pose) const {
  auto shape = object_shape(object, pose);
  auto [lo, hi] = motion::bounding_box(shape);
  if (lo.x < base_.lo()[0] || lo.y < base_.lo()[1] || hi.x > base_.hi()[0] || hi.y > base_.hi()[1]) return false;
  for (const auto& o : base_.obstacles()) {
    if (motion::intersects(shape, o.shape)) return false;
  }
  for (const auto& [id, p] : world.poses) {
    if (id == object || (world.held && *world.held == id)) continue;
    if (motion::intersects(shape, object_shape(id, p))) return false;
  }
  return true;
}

AttemptResult Engine::attempt(const LogicalStructure& state, const WorldState& world,
                              const ssp::GroundedAction& action, Rng& rng) const {
  const ActionSpec& a = schema(action);
  AttemptResult result;
  const motion::ConfigSpace cs = scene(world);
  motion::PlannerOptions options;
  options.iteration_budget = spec_.planner.iteration_budget;

  for (const auto& sym : a.symbols) {
    if (sym.generator == "placement") {
      const std::string& object = resolve(action, sym.object);
      logic::ConcretizationGenerator gen(regions_.at(sym.region), rng.split());
      std::optional<Config> chosen;
      for (int i = 0; i < kPlacementTries && !chosen; ++i) {
        ++result.work.samples;
        auto v = gen.next();
        if (!v) break;
        const auto* pose = std::get_if<logic::Payload>(&*v);
        if (!pose || pose->size() < 2) continue;
        Config p = *pose;
        p.resize(cs.dimension(), 0.0);
        if (!placement_clear(world, object, p)) continue;
        Config grip = motion::placement_config(cs, object, p);
        if (!cs.within_bounds(grip)) continue;
        std::set<std::string> ign{object};
        if (world.held) ign.insert(*world.held);
        if (motion::in_collision(cs, grip, ign)) continue;
        chosen = p;
      }
      if (!chosen) {
        result.reason = "no clear placement for " + object;
        return result;
      }
      result.values[sym.param] = *chosen;
      continue;
    }

    // Motion symbol.
    ++result.work.samples;
    auto target = motion_target(action, sym, world, cs, result.values);
    if (!target) {
      result.reason = "motion target undefined for " + action.binding(sym.param);
      return result;
    }
    if (!cs.within_bounds(*target)) {
      result.reason = "motion target out of bounds";
      return result;
    }
    motion::MotionProblem problem{&cs, world.robot, *target, ignored(action, sym, world)};
    Rng planner_rng = rng.split();
    auto plan = motion::plan_motion(problem, planner_rng, options);
    ++result.work.planner_calls;
    result.work.planner_iterations += std::max(plan.iterations, 1);
    if (!plan.feasible()) {
      result.reason = "motion infeasible (" + plan.report().reason + ")";
      if (!sym.blocked.empty()) {
        auto bindings = binding_map(action);
        for (const auto& tag : plan.report().blocking_tags) {
          if (!state.has_entity(tag)) continue;
          std::string text = sym.blocked;
          for (auto pos = text.find('#'); pos != std::string::npos; pos = text.find('#')) text.replace(pos, 1, tag);
          auto eff = parse_effect(text, bindings);
          result.atoms.push_back({eff.relation, eff.args, Truth::True});
        }
      }
      return result;
    }
    result.values[sym.param] = plan.trajectory().waypoints;
  }

  LogicalStructure over = overlay(state, world, action, result.values);
  Truth pre = action.precondition ? logic::evaluate(*action.precondition, over) : Truth::True;
  if (pre == Truth::True) {
    result.feasible = true;
    return result;
  }
  // Blame the derived atoms this concretization made true.
  for (const auto& p : spec_.predicates) {
    if (p.derived != "swept_collision" && p.derived != "insufficient_charge") continue;
    for (const auto& [t, v] : over.entries(p.name)) {
      if (v == Truth::True && state.holds(p.name, t) != Truth::True) result.atoms.push_back({p.name, t, Truth::True});
    }
  }
  result.reason = "precondition not satisfied under sampled values";
  return result;
}

LogicalStructure Engine::overlay(const LogicalStructure& state, const WorldState& world,
                                 const ssp::GroundedAction& action, const Assignment& values) const {
  LogicalStructure out = state;
  const ActionSpec& a = schema(action);
  const motion::ConfigSpace cs = scene(world);
  const double res = 0.01 * cs.diagonal();
  for (const auto& p : spec_.predicates) {
    if (p.derived == "swept_collision" && p.params.size() == 2) {
      for (const auto& sym : a.symbols) {
        if (sym.generator != "motion" || sym.sort != p.params[1]) continue;
        const auto* w = trajectory_of(values, sym.param);
        if (!w) continue;
        auto ign = ignored(action, sym, world);
        auto tags = motion::swept_tags(cs, as_trajectory(*w, res), ign);
        const std::string& traj = action.binding(sym.param);
        for (const auto& e : spec_.entities) {
          if (e.sort != p.params[0] || ign.count(e.id) || !world.poses.count(e.id)) continue;
          out.set(p.name, {e.id, traj}, tags.count(e.id) ? Truth::True : Truth::False);
        }
      }
    } else if (p.derived == "insufficient_charge" && p.params.size() == 1) {
      for (const auto& sym : a.symbols) {
        if (sym.generator != "motion" || sym.sort != p.params[0]) continue;
        const auto* w = trajectory_of(values, sym.param);
        if (!w) continue;
        double need = spec_.battery ? spec_.battery->rate * as_trajectory(*w, res).length() : 0.0;
        bool short_of = spec_.battery && world.battery < need;
        out.set(p.name, {action.binding(sym.param)}, short_of ? Truth::True : Truth::False);
      }
    }
  }
  return out;
}

WorldState Engine::apply(const WorldState& world, const ssp::GroundedAction& action, const Assignment& values,
                         std::size_t outcome, Rng& rng) const {
  const ActionSpec& a = schema(action);
  auto [declared, mask] = decode_outcome(a, outcome);
  (void)mask;
  WorldState next = world;
  const double diag = base_.diagonal();
  for (const auto& c : a.outcomes[declared].concrete) {
    if (c.kind == "robot_to") {
      const auto* w = trajectory_of(values, c.symbol);
      if (!w || w->empty()) throw DomainError("robot_to needs trajectory '" + c.symbol + "'");
      next.robot = w->back();
    } else if (c.kind == "consume") {
      const auto* w = trajectory_of(values, c.symbol);
      if (!w) throw DomainError("consume needs trajectory '" + c.symbol + "'");
      if (spec_.battery) {
        next.battery -= spec_.battery->rate * motion::Trajectory{*w, 0.0}.length();
      }
    } else if (c.kind == "recharge") {
      next.battery = spec_.battery ? spec_.battery->capacity : 0.0;
    } else if (c.kind == "attach") {
      const auto& obj = resolve(action, c.object);
      next.held = obj;
      next.poses.erase(obj);
    } else if (c.kind == "detach") {
      const auto& obj = resolve(action, c.object);
      const auto* pose = payload_of(values, c.symbol);
      if (!pose) throw DomainError("detach needs pose symbol '" + c.symbol + "'");
      Config p = *pose;
      if (c.noise > 0.0) {
        // Uniform in a disc of radius noise * diagonal, kept inside the bounds.
        double r = c.noise * diag * std::sqrt(rng.uniform());
        double th = 2.0 * std::numbers::pi * rng.uniform();
        p[0] = std::clamp(p[0] + r * std::cos(th), base_.lo()[0], base_.hi()[0]);
        p[1] = std::clamp(p[1] + r * std::sin(th), base_.lo()[1], base_.hi()[1]);
      }
      next.poses[obj] = p;
      if (next.held == obj) next.held.reset();
    } else if (c.kind == "restock") {
      const auto& obj = resolve(action, c.object);
      const auto* e = spec_.entity(obj);
      if (!e || !e->pose) throw DomainError("restock needs an entity pose for '" + obj + "'");
      next.poses[obj] = *e->pose;
      if (next.held == obj) next.held.reset();
    } else if (c.kind == "robot_home") {
      next.robot = spec_.scene.home;
    } else if (c.kind == "robot_to_entity") {
      const auto& id = resolve(action, c.entity);
      const auto* e = spec_.entity(id);
      if (!e || !e->pose) throw DomainError("robot_to_entity needs an entity pose for '" + id + "'");
      next.robot = *e->pose;
    }
  }
  return next;
}

std::vector<std::string> Engine::verify(const LogicalStructure& state, const WorldState& world,
                                        const ssp::GroundedAction& action, const Assignment& values) const {
  std::vector<std::string> issues;
  const ActionSpec& a = schema(action);
  const motion::ConfigSpace cs = scene(world);
  const double res = 0.01 * cs.diagonal();
  for (const auto& sym : a.symbols) {
    const std::string name = action.binding(sym.param);
    if (sym.generator == "placement") {
      const auto* p = payload_of(values, sym.param);
      if (!p) {
        issues.push_back(name + ": missing placement");
        continue;
      }
      if (!logic::contains_point(regions_.at(sym.region), {(*p)[0], (*p)[1]})) {
        issues.push_back(name + ": placement outside its region");
      }
      if (!placement_clear(world, resolve(action, sym.object), *p)) issues.push_back(name + ": placement overlaps");
      continue;
    }
    const auto* w = trajectory_of(values, sym.param);
    if (!w || w->empty()) {
      issues.push_back(name + ": missing trajectory");
      continue;
    }
    if (motion::distance(w->front(), world.robot) > 1e-9) issues.push_back(name + ": does not start at the robot");
    auto target = motion_target(action, sym, world, cs, values);
    if (!target || motion::distance(w->back(), *target) > 1e-9) issues.push_back(name + ": does not reach its target");
    if (!motion::certify(cs, as_trajectory(*w, res), ignored(action, sym, world), res)) {
      issues.push_back(name + ": collides at interpolation resolution");
    }
  }
  LogicalStructure over = overlay(state, world, action, values);
  if (action.precondition && logic::evaluate(*action.precondition, over) != Truth::True) {
    issues.push_back(action.to_string() + ": precondition not true");
  }
  return issues;
}

} // namespace stamp::domains
