#include "stamp/domains/builtin.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "stamp/common/rng.hpp"
#include "stamp/motion/geometry.hpp"

namespace stamp::domains {

namespace {

constexpr double kCanRadius = 0.035;
constexpr double kGraspDy = -0.075;
constexpr double kRobotRadius = 0.025;

ShapeSpec disc(double r) { return ShapeSpec{"disc", r, {}}; }

ShapeSpec box(double w, double h) {
  return ShapeSpec{"polygon", 0.0, {{-w / 2, -h / 2}, {w / 2, -h / 2}, {w / 2, h / 2}, {-w / 2, h / 2}}};
}

ProbabilitySpec prob(double v) { return ProbabilitySpec{v, "", "", false}; }
ProbabilitySpec attr(const std::string& a, const std::string& param, bool complement) {
  return ProbabilitySpec{0.0, a, param, complement};
}

SymbolSpec motion_symbol(const std::string& param, const std::string& entity, TargetSpec to,
                         std::vector<std::string> ignore, std::string blocked) {
  SymbolSpec s;
  s.param = param;
  s.sort = "traj";
  s.entity = entity;
  s.generator = "motion";
  s.to = std::move(to);
  s.ignore = std::move(ignore);
  s.blocked = std::move(blocked);
  return s;
}

// pickup / place / discard over sort `can`.
void add_table_actions(DomainSpec& d, const std::string& region) {
  const std::string clear = "(forall o:can. (o = c | !Collision(o, t)))";

  ActionSpec pick;
  pick.name = "pickup";
  pick.params = {{"c", "can"}};
  pick.symbols = {motion_symbol("t", "traj_pick_{c}", TargetSpec{"grasp", "c", "", ""}, {"c"}, "Collision(#, t)")};
  pick.precondition = "handempty & ontable(c) & " + clear;
  std::vector<std::string> lifted{"holding(c)", "!handempty", "!ontable(c)", "?Collision(c, *traj)"};
  std::vector<ConcreteEffectSpec> grasp{{"robot_to", "t", "", "", 0.0}, {"attach", "", "c", "", 0.0}};
  pick.outcomes.push_back({attr("crush", "c", true), "ok", lifted, grasp});
  auto crushed = lifted;
  crushed.push_back("crushed(c)");
  pick.outcomes.push_back({attr("crush", "c", false), "crushed", crushed, grasp});
  d.actions.push_back(pick);

  ActionSpec place;
  place.name = "place";
  place.params = {{"c", "can"}};
  SymbolSpec pose;
  pose.param = "p";
  pose.sort = "pose";
  pose.entity = "pose_place_{c}";
  pose.generator = "placement";
  pose.region = region;
  pose.object = "c";
  place.symbols = {pose,
                   motion_symbol("t", "traj_place_{c}", TargetSpec{"placement", "c", "p", ""}, {}, "Collision(#, t)")};
  place.precondition = "holding(c) & !crushed(c) & " + clear;
  place.outcomes.push_back({prob(1.0),
                            "placed",
                            {"ontable(c)", "handempty", "!holding(c)", "?Collision(c, *traj)"},
                            {{"robot_to", "t", "", "", 0.0}, {"detach", "p", "c", "", 0.0}}});
  d.actions.push_back(place);

  ActionSpec discard;
  discard.name = "discard";
  discard.params = {{"c", "can"}};
  discard.precondition = "holding(c) & crushed(c)";
  discard.cost = 2.0;
  discard.outcomes.push_back({prob(1.0),
                              "restocked",
                              {"ontable(c)", "!crushed(c)", "handempty", "!holding(c)", "?Collision(c, *traj)"},
                              {{"restock", "", "c", "", 0.0}, {"robot_home", "", "", "", 0.0}}});
  d.actions.push_back(discard);
}

DomainSpec table_base(const std::string& name) {
  DomainSpec d;
  d.name = name;
  d.sorts = {"can", "traj", "pose", "region"};
  d.predicates = {{"holding", {"can"}, ""},
                  {"handempty", {}, ""},
                  {"ontable", {"can"}, ""},
                  {"crushed", {"can"}, ""},
                  {"Collision", {"can", "traj"}, "swept_collision"}};
  d.scene.robot = disc(kRobotRadius);
  d.scene.home = {0.5, 0.05};
  d.scene.grasp_offset = {0.0, kGraspDy};
  EntitySpec staging;
  staging.id = "staging";
  staging.sort = "region";
  staging.region = RegionSpec{"box", {0.05, 0.12}, {0.3, 0.28}, {}, {}};
  d.entities.push_back(staging);
  return d;
}

EntitySpec can(const std::string& id, double crush, double x, double y) {
  EntitySpec e;
  e.id = id;
  e.sort = "can";
  e.attrs["crush"] = crush;
  e.shape = disc(kCanRadius);
  e.pose = std::vector<double>{x, y};
  return e;
}

double parse_double(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw DomainError("builtin parameter '" + key + "' is not a number: '" + it->second + "'");
  }
}

int parse_int(const std::map<std::string, std::string>& p, const std::string& key, int fallback) {
  double v = parse_double(p, key, fallback);
  if (v != std::floor(v)) throw DomainError("builtin parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

void check_prob(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(what + " must lie in [0, 1]");
}

} // namespace

DomainSpec cluttered_table_spec(const ClutteredTableParams& params) {
  if (params.n_cans < 1) throw DomainError("cluttered table needs at least one can");
  check_prob(params.delicate_fraction, "delicate fraction");
  check_prob(params.crush_prob_delicate, "delicate crush probability");
  check_prob(params.crush_prob_normal, "normal crush probability");
  DomainSpec d = table_base("cluttered_table_" + std::to_string(params.n_cans));
  const int delicate = std::max(1, static_cast<int>(std::lround(params.delicate_fraction * params.n_cans)));

  Rng rng(params.seed);
  std::vector<motion::Vec2> placed;
  int attempts = 0;
  while (static_cast<int>(placed.size()) < params.n_cans) {
    if (++attempts > 50000) {
      throw DomainError("could not place " + std::to_string(params.n_cans) + " cans after 50000 attempts");
    }
    motion::Vec2 p{rng.uniform(0.15, 0.85), rng.uniform(0.35, 0.9)};
    motion::Vec2 grip{p.x, p.y + kGraspDy};
    bool ok = true;
    for (auto q : placed) {
      motion::Vec2 qgrip{q.x, q.y + kGraspDy};
      // Cans keep clear of each other and of every grasp configuration.
      if (motion::norm(p - q) < 2 * kCanRadius + 0.02 || motion::norm(grip - q) < kCanRadius + kRobotRadius + 0.01 ||
          motion::norm(qgrip - p) < kCanRadius + kRobotRadius + 0.01) {
        ok = false;
        break;
      }
    }
    if (ok) placed.push_back(p);
  }
  for (int i = 0; i < params.n_cans; ++i) {
    double crush = i < delicate ? params.crush_prob_delicate : params.crush_prob_normal;
    d.entities.push_back(can("c" + std::to_string(i + 1), crush, placed[i].x, placed[i].y));
  }
  add_table_actions(d, "staging");
  d.initial.push_back("handempty");
  for (int i = 0; i < params.n_cans; ++i) d.initial.push_back("ontable(c" + std::to_string(i + 1) + ")");
  d.goal = "holding(c1) & !crushed(c1)";
  d.horizon = params.horizon;
  return d;
}

StamppProblem make_cluttered_table(int n_cans, double delicate_fraction, double crush_prob_delicate,
                                   double crush_prob_normal, std::uint64_t seed) {
  ClutteredTableParams p;
  p.n_cans = n_cans;
  p.delicate_fraction = delicate_fraction;
  p.crush_prob_delicate = crush_prob_delicate;
  p.crush_prob_normal = crush_prob_normal;
  p.seed = seed;
  return build_problem(cluttered_table_spec(p));
}

DomainSpec blocked_table_spec(double crush_prob_target, double crush_prob_blocker, int horizon) {
  check_prob(crush_prob_target, "target crush probability");
  check_prob(crush_prob_blocker, "blocker crush probability");
  DomainSpec d = table_base("blocked_table");
  d.entities.push_back(can("target", crush_prob_target, 0.5, 0.6));
  // Centred on the target's grasp configuration.
  d.entities.push_back(can("blocker", crush_prob_blocker, 0.5, 0.6 + kGraspDy));
  add_table_actions(d, "staging");
  d.initial = {"handempty", "ontable(target)", "ontable(blocker)"};
  d.goal = "holding(target) & !crushed(target)";
  d.horizon = horizon;
  return d;
}

DomainSpec domino_spec(int n, int k, double topple_prob) {
  if (n < 1) throw DomainError("domino needs at least one domino");
  if (k < 0 || 2 * k >= n) throw DomainError("domino needs 0 <= k and 2k < n");
  check_prob(topple_prob, "topple probability");
  DomainSpec d;
  d.name = "domino_" + std::to_string(n) + "_" + std::to_string(k);
  d.sorts = {"domino", "traj"};
  d.predicates = {{"standing", {"domino"}, ""}, {"toppled", {"domino"}, ""},  {"notified", {"domino"}, ""},
                  {"holding", {"domino"}, ""},  {"handempty", {}, ""},        {"Collision", {"domino", "traj"}, "swept_collision"}};
  d.scene.robot = disc(kRobotRadius);
  d.scene.home = {0.5, 0.05};
  d.scene.grasp_offset = {0.0, kGraspDy};
  const double spacing = std::min(0.12, 0.9 / n);
  const double x0 = 0.5 - spacing * (n - 1) / 2.0;
  auto id = [](int i) { return "d" + std::to_string(i); };
  for (int i = 0; i < n; ++i) {
    EntitySpec e;
    e.id = id(i);
    e.sort = "domino";
    e.shape = box(0.02, 0.06);
    e.pose = std::vector<double>{x0 + spacing * i, 0.6};
    d.entities.push_back(e);
  }
  const int target = n / 2;
  for (int i = 0; i < n; ++i) {
    ActionSpec a;
    a.name = "pickup_" + id(i);
    a.symbols = {motion_symbol("t", "traj_pick_" + id(i), TargetSpec{"grasp", id(i), "", ""}, {id(i)},
                               "Collision(#, t)")};
    a.precondition = "handempty & standing(" + id(i) + ") & (forall o:domino. (o = " + id(i) + " | !Collision(o, t)))";
    a.outcomes.push_back({prob(1.0),
                          "picked",
                          {"holding(" + id(i) + ")", "!handempty", "!standing(" + id(i) + ")"},
                          {{"robot_to", "t", "", "", 0.0}, {"attach", "", id(i), "", 0.0}}});
    for (int j = i - k; j <= i + k; ++j) {
      if (j == i || j < 0 || j >= n) continue;
      a.independent.push_back({topple_prob, "topple_" + id(j), {"toppled(" + id(j) + ")", "!standing(" + id(j) + ")"}});
    }
    d.actions.push_back(a);
  }
  ActionSpec notify;
  notify.name = "notify";
  notify.params = {{"d", "domino"}};
  notify.precondition = "toppled(d) & !notified(d)";
  notify.outcomes.push_back({prob(1.0), "notified", {"notified(d)"}, {}});
  d.actions.push_back(notify);
  d.initial.push_back("handempty");
  for (int i = 0; i < n; ++i) d.initial.push_back("standing(" + id(i) + ")");
  d.goal = "holding(" + id(target) + ") & (forall d:domino. (toppled(d) -> notified(d)))";
  d.horizon = 2 + 2 * k;
  return d;
}

StamppProblem make_domino(int n, int k) { return build_problem(domino_spec(n, k)); }

DomainSpec aircraft_inspection_spec(const AircraftParams& p) {
  if (p.n_sites < 1) throw DomainError("aircraft inspection needs at least one site");
  check_prob(p.sensor_fail_prob, "sensor failure probability");
  check_prob(p.drift_prob, "drift probability");
  if (!(p.battery_capacity > 0.0)) throw DomainError("battery capacity must be positive");
  DomainSpec d;
  d.name = "aircraft_" + std::to_string(p.n_sites);
  d.sorts = {"loc", "traj"};
  d.predicates = {{"at", {"loc"}, ""},        {"target", {"loc"}, ""}, {"inspected", {"loc"}, ""},
                  {"station", {"loc"}, ""},   {"reported", {}, ""},    {"Insufficient", {"traj"}, "insufficient_charge"}};
  d.scene.robot = disc(0.02);
  d.scene.home = {0.1, 0.1};
  d.scene.grasp_offset = {0.0, 0.0};
  d.scene.obstacles.push_back({"hangar", disc(0.08), {0.45, 0.4}});
  d.battery = BatterySpec{p.battery_capacity, 1.0};

  EntitySpec base;
  base.id = "base";
  base.sort = "loc";
  base.pose = std::vector<double>{0.1, 0.1};
  d.entities.push_back(base);
  for (int i = 1; i <= p.n_sites; ++i) {
    EntitySpec s;
    s.id = "s" + std::to_string(i);
    s.sort = "loc";
    double frac = p.n_sites == 1 ? 0.5 : static_cast<double>(i - 1) / (p.n_sites - 1);
    s.pose = std::vector<double>{0.3 + 0.5 * frac, 0.7 + 0.15 * std::sin(3.0 * frac)};
    d.entities.push_back(s);
  }

  ActionSpec fly;
  fly.name = "fly";
  fly.params = {{"a", "loc"}, {"b", "loc"}};
  fly.symbols = {motion_symbol("t", "traj_{a}_{b}", TargetSpec{"entity", "", "", "b"}, {}, "")};
  fly.precondition = "at(a) & a != b & !Insufficient(t)";
  fly.outcomes.push_back({prob(1.0 - p.drift_prob),
                          "arrive",
                          {"!at(a)", "at(b)", "?Insufficient(*traj)"},
                          {{"robot_to", "t", "", "", 0.0}, {"consume", "t", "", "", 0.0}}});
  fly.outcomes.push_back({prob(p.drift_prob),
                          "drift",
                          {"!at(a)", "at(base)", "?Insufficient(*traj)"},
                          {{"consume", "t", "", "", 0.0}, {"robot_to_entity", "", "", "base", 0.0}}});
  d.actions.push_back(fly);

  ActionSpec inspect;
  inspect.name = "inspect";
  inspect.params = {{"l", "loc"}};
  inspect.precondition = "at(l) & target(l) & !inspected(l)";
  inspect.outcomes.push_back({prob(1.0 - p.sensor_fail_prob), "detected", {"inspected(l)"}, {}});
  inspect.outcomes.push_back({prob(p.sensor_fail_prob), "missed", {}, {}});
  d.actions.push_back(inspect);

  ActionSpec charge;
  charge.name = "charge";
  charge.params = {{"l", "loc"}};
  charge.precondition = "at(l) & station(l)";
  charge.outcomes.push_back({prob(1.0), "charged", {"?Insufficient(*traj)"}, {{"recharge", "", "", "", 0.0}}});
  d.actions.push_back(charge);

  ActionSpec report;
  report.name = "report";
  report.precondition = "!reported & (forall l:loc. (target(l) -> inspected(l)))";
  report.outcomes.push_back({prob(1.0), "reported", {"reported"}, {}});
  d.actions.push_back(report);

  d.initial = {"at(base)", "station(base)"};
  for (int i = 1; i <= p.n_sites; ++i) {
    d.initial.push_back("target(s" + std::to_string(i) + ")");
    d.initial.push_back("station(s" + std::to_string(i) + ")");
  }
  d.goal = "reported";
  d.horizon = p.horizon;
  return d;
}

StamppProblem make_aircraft_inspection(int n_sites, double sensor_fail_prob, double battery_capacity) {
  AircraftParams p;
  p.n_sites = n_sites;
  p.sensor_fail_prob = sensor_fail_prob;
  p.battery_capacity = battery_capacity;
  p.horizon = 2 * n_sites + 3;
  return build_problem(aircraft_inspection_spec(p));
}

DomainSpec place_spec() {
  DomainSpec d;
  d.name = "place";
  d.sorts = {"cup", "traj", "pose", "region"};
  d.predicates = {{"holding", {"cup"}, ""},
                  {"handempty", {}, ""},
                  {"ontable", {"cup"}, ""},
                  {"at_target", {"cup"}, ""},
                  {"Collision", {"cup", "traj"}, "swept_collision"}};
  d.scene.robot = disc(kRobotRadius);
  d.scene.home = {0.5, 0.05};
  d.scene.grasp_offset = {0.0, kGraspDy};
  EntitySpec cup;
  cup.id = "cup";
  cup.sort = "cup";
  cup.shape = disc(0.03);
  cup.pose = std::vector<double>{0.3, 0.6};
  d.entities.push_back(cup);
  EntitySpec target;
  target.id = "target_area";
  target.sort = "region";
  target.region = RegionSpec{"box", {0.6, 0.5}, {0.8, 0.7}, {}, {}};
  d.entities.push_back(target);

  ActionSpec pick;
  pick.name = "pickup";
  pick.params = {{"c", "cup"}};
  pick.symbols = {motion_symbol("t", "traj_pick_{c}", TargetSpec{"grasp", "c", "", ""}, {"c"}, "Collision(#, t)")};
  pick.precondition = "handempty & ontable(c)";
  pick.outcomes.push_back({prob(1.0),
                           "ok",
                           {"holding(c)", "!handempty", "!ontable(c)", "!at_target(c)"},
                           {{"robot_to", "t", "", "", 0.0}, {"attach", "", "c", "", 0.0}}});
  d.actions.push_back(pick);

  ActionSpec place;
  place.name = "place";
  place.params = {{"c", "cup"}};
  SymbolSpec pose;
  pose.param = "p";
  pose.sort = "pose";
  pose.entity = "target_pose_{c}";
  pose.generator = "placement";
  pose.region = "target_area";
  pose.object = "c";
  place.symbols = {pose, motion_symbol("t", "traj_place_{c}", TargetSpec{"placement", "c", "p", ""}, {}, "")};
  place.precondition = "holding(c)";
  place.outcomes.push_back({prob(0.8),
                            "success",
                            {"at_target(c)", "ontable(c)", "handempty", "!holding(c)"},
                            {{"robot_to", "t", "", "", 0.0}, {"detach", "p", "c", "", 0.0}}});
  place.outcomes.push_back({prob(0.2),
                            "around_target_pose",
                            {"ontable(c)", "handempty", "!holding(c)"},
                            {{"robot_to", "t", "", "", 0.0}, {"detach", "p", "c", "", 0.05}}});
  d.actions.push_back(place);
  d.initial = {"handempty", "ontable(cup)"};
  d.goal = "at_target(cup)";
  d.horizon = 4;
  return d;
}

DomainSpec builtin_spec(const std::string& name, const std::map<std::string, std::string>& params) {
  static const std::map<std::string, std::set<std::string>> known{
      {"cluttered_table", {"n", "delicate", "crush", "crush_normal", "seed", "horizon"}},
      {"blocked_table", {"crush", "crush_blocker", "horizon"}},
      {"domino", {"n", "k", "topple"}},
      {"aircraft", {"sites", "fail", "capacity", "drift", "horizon"}},
      {"place", {}}};
  auto it = known.find(name);
  if (it == known.end()) throw DomainError("unknown builtin domain '" + name + "'");
  for (const auto& [k, v] : params) {
    if (!it->second.count(k)) throw DomainError("builtin '" + name + "' has no parameter '" + k + "'");
  }
  if (name == "cluttered_table") {
    ClutteredTableParams p;
    p.n_cans = parse_int(params, "n", 3);
    p.delicate_fraction = parse_double(params, "delicate", p.delicate_fraction);
    p.crush_prob_delicate = parse_double(params, "crush", p.crush_prob_delicate);
    p.crush_prob_normal = parse_double(params, "crush_normal", p.crush_prob_normal);
    p.seed = static_cast<std::uint64_t>(parse_int(params, "seed", 0));
    p.horizon = parse_int(params, "horizon", p.horizon);
    return cluttered_table_spec(p);
  }
  if (name == "blocked_table") {
    return blocked_table_spec(parse_double(params, "crush", 0.1), parse_double(params, "crush_blocker", 0.05),
                              parse_int(params, "horizon", 7));
  }
  if (name == "domino") {
    return domino_spec(parse_int(params, "n", 6), parse_int(params, "k", 2), parse_double(params, "topple", 0.1));
  }
  if (name == "aircraft") {
    AircraftParams p;
    p.n_sites = parse_int(params, "sites", 3);
    p.sensor_fail_prob = parse_double(params, "fail", p.sensor_fail_prob);
    p.battery_capacity = parse_double(params, "capacity", p.battery_capacity);
    p.drift_prob = parse_double(params, "drift", p.drift_prob);
    p.horizon = parse_int(params, "horizon", 2 * p.n_sites + 3);
    return aircraft_inspection_spec(p);
  }
  return place_spec();
}

} // namespace stamp::domains
