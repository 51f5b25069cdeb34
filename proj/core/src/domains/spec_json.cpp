#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "stamp/domains/spec.hpp"

namespace stamp::domains {

using Json = nlohmann::ordered_json;

namespace {

// Field-path-aware accessors.
class Reader {
public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw DomainError(path_ + ": " + what); }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j_.items()) {
      if (!ok.count(k)) throw DomainError(path_ + "." + k + ": unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  Reader at(const char* key) const {
    if (!j_.contains(key)) throw DomainError(path_ + "." + key + ": missing required field");
    return Reader(j_.at(key), path_ + "." + key);
  }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  double num() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::vector<double> nums() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).num());
    return out;
  }
  std::vector<std::string> strs() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(at(i).str());
    return out;
  }
  std::string str_or(const char* key, std::string fallback) const { return has(key) ? at(key).str() : fallback; }
  double num_or(const char* key, double fallback) const { return has(key) ? at(key).num() : fallback; }
  std::vector<std::string> strs_or_empty(const char* key) const {
    return has(key) ? at(key).strs() : std::vector<std::string>{};
  }

  const Json& json() const { return j_; }
  const std::string& path() const { return path_; }

private:
  const Json& j_;
  std::string path_;
};

std::vector<motion::Vec2> read_points(const Reader& r) {
  std::vector<motion::Vec2> out;
  for (std::size_t i = 0; i < r.size(); ++i) {
    auto p = r.at(i).nums();
    if (p.size() != 2) r.at(i).fail("expected [x, y]");
    out.push_back({p[0], p[1]});
  }
  return out;
}

ShapeSpec read_shape(const Reader& r) {
  r.expect_object({"kind", "radius", "vertices"});
  ShapeSpec s;
  s.kind = r.at("kind").str();
  if (s.kind == "disc") {
    s.radius = r.at("radius").num();
    if (s.radius <= 0.0) r.at("radius").fail("radius must be positive");
  } else if (s.kind == "polygon") {
    s.vertices = read_points(r.at("vertices"));
    if (s.vertices.size() < 3) r.at("vertices").fail("polygon needs at least three vertices");
  } else {
    r.at("kind").fail("unknown shape kind '" + s.kind + "'");
  }
  return s;
}

RegionSpec read_region(const Reader& r) {
  r.expect_object({"kind", "lo", "hi", "vertices", "members"});
  RegionSpec g;
  g.kind = r.at("kind").str();
  if (g.kind == "box") {
    g.lo = r.at("lo").nums();
    g.hi = r.at("hi").nums();
    if (g.lo.size() != g.hi.size()) r.fail("lo and hi differ in dimension");
  } else if (g.kind == "polygon") {
    g.vertices = read_points(r.at("vertices"));
  } else if (g.kind == "set") {
    g.members = r.at("members").strs();
  } else {
    r.at("kind").fail("unknown region kind '" + g.kind + "'");
  }
  return g;
}

ProbabilitySpec read_probability(const Reader& r) {
  ProbabilitySpec p;
  if (r.json().is_number()) {
    p.value = r.num();
    return p;
  }
  std::string text = r.str();
  std::string s;
  for (char c : text) {
    if (c != ' ') s += c;
  }
  if (s.rfind("1-", 0) == 0) {
    p.complement = true;
    s = s.substr(2);
  }
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')' || open == 0) {
    r.fail("probability must be a number, 'attr(param)' or '1-attr(param)'");
  }
  p.attr = s.substr(0, open);
  p.param = s.substr(open + 1, s.size() - open - 2);
  p.value = 0.0;
  return p;
}

TargetSpec read_target(const Reader& r) {
  r.expect_object({"kind", "object", "pose", "entity"});
  TargetSpec t;
  t.kind = r.at("kind").str();
  t.object = r.str_or("object", "");
  t.pose = r.str_or("pose", "");
  t.entity = r.str_or("entity", "");
  static const std::set<std::string> kinds{"grasp", "placement", "entity", "home"};
  if (!kinds.count(t.kind)) r.at("kind").fail("unknown target kind '" + t.kind + "'");
  return t;
}

SymbolSpec read_symbol(const Reader& r) {
  r.expect_object({"param", "sort", "entity", "generator", "to", "ignore", "region", "object", "blocked"});
  SymbolSpec s;
  s.param = r.at("param").str();
  s.sort = r.at("sort").str();
  s.entity = r.at("entity").str();
  s.generator = r.at("generator").str();
  if (s.generator == "motion") {
    s.to = read_target(r.at("to"));
  } else if (s.generator != "placement") {
    r.at("generator").fail("unknown generator '" + s.generator + "'");
  }
  s.ignore = r.strs_or_empty("ignore");
  s.region = r.str_or("region", "");
  s.object = r.str_or("object", "");
  s.blocked = r.str_or("blocked", "");
  if (s.generator == "placement" && (s.region.empty() || s.object.empty())) {
    r.fail("placement symbols need 'region' and 'object'");
  }
  return s;
}

ConcreteEffectSpec read_concrete(const Reader& r) {
  r.expect_object({"kind", "symbol", "object", "entity", "noise"});
  ConcreteEffectSpec e;
  e.kind = r.at("kind").str();
  static const std::set<std::string> kinds{"robot_to", "attach",          "detach",  "restock",
                                           "robot_home", "robot_to_entity", "consume", "recharge"};
  if (!kinds.count(e.kind)) r.at("kind").fail("unknown concrete effect '" + e.kind + "'");
  e.symbol = r.str_or("symbol", "");
  e.object = r.str_or("object", "");
  e.entity = r.str_or("entity", "");
  e.noise = r.num_or("noise", 0.0);
  return e;
}

OutcomeSpec read_outcome(const Reader& r) {
  r.expect_object({"p", "label", "effects", "concrete"});
  OutcomeSpec o;
  o.p = read_probability(r.at("p"));
  o.label = r.str_or("label", "");
  o.effects = r.strs_or_empty("effects");
  if (r.has("concrete")) {
    auto c = r.at("concrete");
    for (std::size_t i = 0; i < c.size(); ++i) o.concrete.push_back(read_concrete(c.at(i)));
  }
  return o;
}

ActionSpec read_action(const Reader& r) {
  r.expect_object({"name", "params", "symbols", "precondition", "cost", "outcomes", "independent"});
  ActionSpec a;
  a.name = r.at("name").str();
  if (r.has("params")) {
    auto ps = r.at("params");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto p = ps.at(i);
      p.expect_object({"name", "sort"});
      a.params.emplace_back(p.at("name").str(), p.at("sort").str());
    }
  }
  if (r.has("symbols")) {
    auto ss = r.at("symbols");
    for (std::size_t i = 0; i < ss.size(); ++i) a.symbols.push_back(read_symbol(ss.at(i)));
  }
  a.precondition = r.str_or("precondition", "true");
  a.cost = r.num_or("cost", 1.0);
  if (a.cost < 0.0) r.at("cost").fail("cost must be nonnegative");
  auto os = r.at("outcomes");
  if (os.size() == 0) os.fail("at least one outcome required");
  for (std::size_t i = 0; i < os.size(); ++i) a.outcomes.push_back(read_outcome(os.at(i)));
  if (r.has("independent")) {
    auto is = r.at("independent");
    for (std::size_t i = 0; i < is.size(); ++i) {
      auto g = is.at(i);
      g.expect_object({"p", "label", "effects"});
      IndependentSpec spec;
      spec.p = g.at("p").num();
      if (spec.p < 0.0 || spec.p > 1.0) g.at("p").fail("probability outside [0, 1]");
      spec.label = g.str_or("label", "");
      spec.effects = g.strs_or_empty("effects");
      a.independent.push_back(std::move(spec));
    }
  }
  return a;
}

EntitySpec read_entity(const Reader& r) {
  r.expect_object({"id", "sort", "attrs", "shape", "pose", "region"});
  EntitySpec e;
  e.id = r.at("id").str();
  e.sort = r.at("sort").str();
  if (r.has("attrs")) {
    auto a = r.at("attrs");
    if (!a.json().is_object()) a.fail("expected an object");
    for (const auto& [k, v] : a.json().items()) {
      e.attrs[k] = Reader(v, a.path() + "." + k).num();
    }
  }
  if (r.has("shape")) e.shape = read_shape(r.at("shape"));
  if (r.has("pose")) e.pose = r.at("pose").nums();
  if (r.has("region")) e.region = read_region(r.at("region"));
  return e;
}

SceneSpec read_scene(const Reader& r) {
  r.expect_object({"bounds", "robot", "home", "obstacles", "grasp_offset"});
  SceneSpec s;
  if (r.has("bounds")) {
    auto b = r.at("bounds");
    b.expect_object({"lo", "hi"});
    s.lo = b.at("lo").nums();
    s.hi = b.at("hi").nums();
  }
  if (r.has("robot")) s.robot = read_shape(r.at("robot"));
  if (r.has("home")) s.home = r.at("home").nums();
  if (r.has("obstacles")) {
    auto os = r.at("obstacles");
    for (std::size_t i = 0; i < os.size(); ++i) {
      auto o = os.at(i);
      o.expect_object({"tag", "shape", "pose"});
      s.obstacles.push_back({o.at("tag").str(), read_shape(o.at("shape")), o.at("pose").nums()});
    }
  }
  if (r.has("grasp_offset")) s.grasp_offset = r.at("grasp_offset").nums();
  return s;
}

Json points_json(const std::vector<motion::Vec2>& pts) {
  Json a = Json::array();
  for (auto p : pts) a.push_back({p.x, p.y});
  return a;
}

Json shape_json(const ShapeSpec& s) {
  Json j;
  j["kind"] = s.kind;
  if (s.kind == "disc") j["radius"] = s.radius;
  else j["vertices"] = points_json(s.vertices);
  return j;
}

Json region_json(const RegionSpec& g) {
  Json j;
  j["kind"] = g.kind;
  if (g.kind == "box") {
    j["lo"] = g.lo;
    j["hi"] = g.hi;
  } else if (g.kind == "polygon") {
    j["vertices"] = points_json(g.vertices);
  } else {
    j["members"] = g.members;
  }
  return j;
}

Json probability_json(const ProbabilitySpec& p) {
  if (p.attr.empty()) return p.value;
  return (p.complement ? "1-" : "") + p.attr + "(" + p.param + ")";
}

} // namespace

const EntitySpec* DomainSpec::entity(const std::string& id) const {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const PredicateSpec* DomainSpec::predicate(const std::string& n) const {
  for (const auto& p : predicates) {
    if (p.name == n) return &p;
  }
  return nullptr;
}

const ActionSpec* DomainSpec::action(const std::string& n) const {
  for (const auto& a : actions) {
    if (a.name == n) return &a;
  }
  return nullptr;
}

DomainSpec parse_domain(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw DomainError("line " + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  Reader r(root, "$");
  r.expect_object({"schema_version", "name", "sorts", "predicates", "entities", "actions", "initial", "goal",
                   "horizon", "scene", "battery", "planner"});
  DomainSpec d;
  d.schema_version = r.at("schema_version").integer();
  if (d.schema_version != kSchemaVersion) {
    r.at("schema_version").fail("unsupported schema version " + std::to_string(d.schema_version));
  }
  d.name = r.at("name").str();
  d.sorts = r.strs_or_empty("sorts");
  if (r.has("predicates")) {
    auto ps = r.at("predicates");
    for (std::size_t i = 0; i < ps.size(); ++i) {
      auto p = ps.at(i);
      p.expect_object({"name", "params", "derived"});
      PredicateSpec spec{p.at("name").str(), p.strs_or_empty("params"), p.str_or("derived", "")};
      static const std::set<std::string> derived{"", "swept_collision", "insufficient_charge", "unknown"};
      if (!derived.count(spec.derived)) p.at("derived").fail("unknown derived kind '" + spec.derived + "'");
      d.predicates.push_back(std::move(spec));
    }
  }
  if (r.has("entities")) {
    auto es = r.at("entities");
    for (std::size_t i = 0; i < es.size(); ++i) d.entities.push_back(read_entity(es.at(i)));
  }
  if (r.has("actions")) {
    auto as = r.at("actions");
    for (std::size_t i = 0; i < as.size(); ++i) d.actions.push_back(read_action(as.at(i)));
  }
  d.initial = r.strs_or_empty("initial");
  d.goal = r.str_or("goal", "true");
  d.horizon = r.has("horizon") ? r.at("horizon").integer() : 1;
  if (d.horizon < 0) r.at("horizon").fail("horizon must be nonnegative");
  if (r.has("scene")) d.scene = read_scene(r.at("scene"));
  if (r.has("battery")) {
    auto b = r.at("battery");
    b.expect_object({"capacity", "rate"});
    d.battery = BatterySpec{b.at("capacity").num(), b.num_or("rate", 1.0)};
  }
  if (r.has("planner")) {
    auto p = r.at("planner");
    p.expect_object({"iteration_budget"});
    d.planner.iteration_budget = p.at("iteration_budget").integer();
  }
  return d;
}

DomainSpec load_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open domain file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_domain(ss.str());
  } catch (const DomainError& e) {
    throw DomainError(path + ": " + e.what());
  }
}

std::string serialize_domain(const DomainSpec& d) {
  Json root;
  root["schema_version"] = d.schema_version;
  root["name"] = d.name;
  root["sorts"] = d.sorts;
  Json preds = Json::array();
  for (const auto& p : d.predicates) {
    Json j;
    j["name"] = p.name;
    j["params"] = p.params;
    if (!p.derived.empty()) j["derived"] = p.derived;
    preds.push_back(std::move(j));
  }
  root["predicates"] = std::move(preds);
  Json ents = Json::array();
  for (const auto& e : d.entities) {
    Json j;
    j["id"] = e.id;
    j["sort"] = e.sort;
    if (!e.attrs.empty()) {
      Json a = Json::object();
      for (const auto& [k, v] : e.attrs) a[k] = v;
      j["attrs"] = std::move(a);
    }
    if (e.shape) j["shape"] = shape_json(*e.shape);
    if (e.pose) j["pose"] = *e.pose;
    if (e.region) j["region"] = region_json(*e.region);
    ents.push_back(std::move(j));
  }
  root["entities"] = std::move(ents);
  Json acts = Json::array();
  for (const auto& a : d.actions) {
    Json j;
    j["name"] = a.name;
    Json params = Json::array();
    for (const auto& [n, s] : a.params) params.push_back({{"name", n}, {"sort", s}});
    j["params"] = std::move(params);
    if (!a.symbols.empty()) {
      Json syms = Json::array();
      for (const auto& s : a.symbols) {
        Json k;
        k["param"] = s.param;
        k["sort"] = s.sort;
        k["entity"] = s.entity;
        k["generator"] = s.generator;
        if (s.generator == "motion") {
          Json t;
          t["kind"] = s.to.kind;
          if (!s.to.object.empty()) t["object"] = s.to.object;
          if (!s.to.pose.empty()) t["pose"] = s.to.pose;
          if (!s.to.entity.empty()) t["entity"] = s.to.entity;
          k["to"] = std::move(t);
        }
        if (!s.ignore.empty()) k["ignore"] = s.ignore;
        if (!s.region.empty()) k["region"] = s.region;
        if (!s.object.empty()) k["object"] = s.object;
        if (!s.blocked.empty()) k["blocked"] = s.blocked;
        syms.push_back(std::move(k));
      }
      j["symbols"] = std::move(syms);
    }
    j["precondition"] = a.precondition;
    j["cost"] = a.cost;
    Json outs = Json::array();
    for (const auto& o : a.outcomes) {
      Json k;
      k["p"] = probability_json(o.p);
      if (!o.label.empty()) k["label"] = o.label;
      k["effects"] = o.effects;
      if (!o.concrete.empty()) {
        Json cs = Json::array();
        for (const auto& c : o.concrete) {
          Json e;
          e["kind"] = c.kind;
          if (!c.symbol.empty()) e["symbol"] = c.symbol;
          if (!c.object.empty()) e["object"] = c.object;
          if (!c.entity.empty()) e["entity"] = c.entity;
          if (c.noise != 0.0) e["noise"] = c.noise;
          cs.push_back(std::move(e));
        }
        k["concrete"] = std::move(cs);
      }
      outs.push_back(std::move(k));
    }
    j["outcomes"] = std::move(outs);
    if (!a.independent.empty()) {
      Json ind = Json::array();
      for (const auto& g : a.independent) {
        Json k;
        k["p"] = g.p;
        if (!g.label.empty()) k["label"] = g.label;
        k["effects"] = g.effects;
        ind.push_back(std::move(k));
      }
      j["independent"] = std::move(ind);
    }
    acts.push_back(std::move(j));
  }
  root["actions"] = std::move(acts);
  root["initial"] = d.initial;
  root["goal"] = d.goal;
  root["horizon"] = d.horizon;
  Json scene;
  scene["bounds"] = {{"lo", d.scene.lo}, {"hi", d.scene.hi}};
  scene["robot"] = shape_json(d.scene.robot);
  scene["home"] = d.scene.home;
  Json obs = Json::array();
  for (const auto& o : d.scene.obstacles) {
    obs.push_back({{"tag", o.tag}, {"shape", shape_json(o.shape)}, {"pose", o.pose}});
  }
  scene["obstacles"] = std::move(obs);
  scene["grasp_offset"] = d.scene.grasp_offset;
  root["scene"] = std::move(scene);
  if (d.battery) root["battery"] = {{"capacity", d.battery->capacity}, {"rate", d.battery->rate}};
  root["planner"] = {{"iteration_budget", d.planner.iteration_budget}};
  return root.dump(2) + "\n";
}

} // namespace stamp::domains
