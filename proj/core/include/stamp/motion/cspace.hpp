#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "stamp/common/error.hpp"
#include "stamp/motion/geometry.hpp"

namespace stamp::motion {

/// (x, y) or (x, y, yaw).
using Config = std::vector<double>;

class MotionError : public Error {
public:
  using Error::Error;
};

struct Obstacle {
  std::string tag;
  Shape shape;
};

class ConfigSpace {
public:
  /// `lo`/`hi` have one entry per dimension (2 or 3).
  ConfigSpace(std::vector<double> lo, std::vector<double> hi, Shape footprint);

  std::size_t dimension() const { return lo_.size(); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }
  const Shape& footprint() const { return footprint_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }

  void add_obstacle(std::string tag, Shape shape);
  /// Removes every obstacle with this tag; returns how many were removed.
  std::size_t remove_obstacle(const std::string& tag);
  /// Rigid gripper offset for grasping `object` (identity when unset).
  void set_grasp_offset(const std::string& object, Config offset);
  Config grasp_offset(const std::string& object) const;

  bool within_bounds(const Config& config) const;
  /// Diagonal of the position bounds.
  double diagonal() const;
  Shape robot_at(const Config& config) const;

private:
  std::vector<double> lo_;
  std::vector<double> hi_;
  Shape footprint_;
  std::vector<Obstacle> obstacles_;
  std::map<std::string, Config> grasp_offsets_;
};

/// Throws MotionError when the configuration is out of bounds.
bool in_collision(const ConfigSpace& cspace, const Config& config, const std::set<std::string>& ignore_tags = {});
std::vector<std::string> colliding_tags(const ConfigSpace& cspace, const Config& config,
                                        const std::set<std::string>& ignore_tags = {});

/// True iff the gripper at `config` holds `object` at `target_pose`, i.e.
/// config = target_pose + grasp offset, componentwise within 1e-6.
bool is_placement_config(const ConfigSpace& cspace, const std::string& object, const Config& config,
                         const Config& target_pose);

/// Gripper configuration that places `object` at `pose`.
Config placement_config(const ConfigSpace& cspace, const std::string& object, const Config& pose);

double distance(const Config& a, const Config& b);

} // namespace stamp::motion
