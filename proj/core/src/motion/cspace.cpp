#include "stamp/motion/cspace.hpp"

#include <algorithm>
#include <cmath>

namespace stamp::motion {

ConfigSpace::ConfigSpace(std::vector<double> lo, std::vector<double> hi, Shape footprint)
    : lo_(std::move(lo)), hi_(std::move(hi)), footprint_(std::move(footprint)) {
  if (lo_.size() != hi_.size() || lo_.size() < 2 || lo_.size() > 3) {
    throw MotionError("configuration space must have 2 or 3 dimensions");
  }
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]) || lo_[i] >= hi_[i]) {
      throw MotionError("configuration space bounds must be finite and nonempty");
    }
  }
  if (const auto* poly = std::get_if<ConvexPolygon>(&footprint_)) validate(*poly);
}

void ConfigSpace::add_obstacle(std::string tag, Shape shape) {
  if (const auto* poly = std::get_if<ConvexPolygon>(&shape)) validate(*poly);
  auto [lo, hi] = bounding_box(shape);
  const double eps = 1e-9;
  if (lo.x < lo_[0] - eps || lo.y < lo_[1] - eps || hi.x > hi_[0] + eps || hi.y > hi_[1] + eps) {
    throw MotionError("obstacle '" + tag + "' lies outside the workspace bounds");
  }
  obstacles_.push_back({std::move(tag), std::move(shape)});
}

std::size_t ConfigSpace::remove_obstacle(const std::string& tag) {
  auto before = obstacles_.size();
  std::erase_if(obstacles_, [&](const Obstacle& o) { return o.tag == tag; });
  return before - obstacles_.size();
}

void ConfigSpace::set_grasp_offset(const std::string& object, Config offset) {
  if (offset.size() != dimension()) throw MotionError("grasp offset dimension mismatch for '" + object + "'");
  grasp_offsets_[object] = std::move(offset);
}

Config ConfigSpace::grasp_offset(const std::string& object) const {
  auto it = grasp_offsets_.find(object);
  if (it != grasp_offsets_.end()) return it->second;
  return Config(dimension(), 0.0);
}

bool ConfigSpace::within_bounds(const Config& config) const {
  if (config.size() != dimension()) return false;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (!(config[i] >= lo_[i] && config[i] <= hi_[i])) return false;
  }
  return true;
}

double ConfigSpace::diagonal() const { return std::hypot(hi_[0] - lo_[0], hi_[1] - lo_[1]); }

Shape ConfigSpace::robot_at(const Config& config) const {
  double yaw = config.size() > 2 ? config[2] : 0.0;
  return transformed(footprint_, {config[0], config[1]}, yaw);
}

std::vector<std::string> colliding_tags(const ConfigSpace& cspace, const Config& config,
                                        const std::set<std::string>& ignore_tags) {
  if (!cspace.within_bounds(config)) throw MotionError("configuration out of bounds");
  Shape robot = cspace.robot_at(config);
  std::vector<std::string> tags;
  for (const auto& o : cspace.obstacles()) {
    if (ignore_tags.count(o.tag)) continue;
    if (intersects(robot, o.shape)) tags.push_back(o.tag);
  }
  return tags;
}

bool in_collision(const ConfigSpace& cspace, const Config& config, const std::set<std::string>& ignore_tags) {
  if (!cspace.within_bounds(config)) throw MotionError("configuration out of bounds");
  Shape robot = cspace.robot_at(config);
  return std::any_of(cspace.obstacles().begin(), cspace.obstacles().end(), [&](const Obstacle& o) {
    return !ignore_tags.count(o.tag) && intersects(robot, o.shape);
  });
}

bool is_placement_config(const ConfigSpace& cspace, const std::string& object, const Config& config,
                         const Config& target_pose) {
  if (config.size() != target_pose.size()) return false;
  Config expected = placement_config(cspace, object, target_pose);
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (std::abs(config[i] - expected[i]) > 1e-6) return false;
  }
  return true;
}

Config placement_config(const ConfigSpace& cspace, const std::string& object, const Config& pose) {
  Config offset = cspace.grasp_offset(object);
  if (offset.size() != pose.size()) offset.resize(pose.size(), 0.0);
  Config out = pose;
  for (std::size_t i = 0; i < pose.size(); ++i) out[i] += offset[i];
  return out;
}

double distance(const Config& a, const Config& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

} // namespace stamp::motion
