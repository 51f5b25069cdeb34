#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "stamp/domains/problem.hpp"
#include "stamp/domains/spec.hpp"

namespace stamp::domains {

struct ClutteredTableParams {
  int n_cans = 3;
  double delicate_fraction = 0.34;
  double crush_prob_delicate = 0.5;
  double crush_prob_normal = 0.05;
  std::uint64_t seed = 0;
  int horizon = 7;
};

/// Table with n cans at seeded random poses; the goal is to hold the
/// delicate target can c1 uncrushed. Crushed cans cost 2 to discard.
DomainSpec cluttered_table_spec(const ClutteredTableParams& params);
StamppProblem make_cluttered_table(int n_cans, double delicate_fraction, double crush_prob_delicate,
                                   double crush_prob_normal = 0.05, std::uint64_t seed = 0);

/// Two cans: the target's grasp configuration lies inside a movable blocker.
DomainSpec blocked_table_spec(double crush_prob_target = 0.1, double crush_prob_blocker = 0.05, int horizon = 7);

/// n dominoes in a row; picking the target topples each of the k neighbours
/// on either side independently with probability `topple_prob`.
DomainSpec domino_spec(int n, int k, double topple_prob = 0.1);
StamppProblem make_domino(int n, int k);

struct AircraftParams {
  int n_sites = 3;
  double sensor_fail_prob = 0.1;
  double battery_capacity = 1.0;
  double drift_prob = 0.05;
  int horizon = 9;
};

DomainSpec aircraft_inspection_spec(const AircraftParams& params);
StamppProblem make_aircraft_inspection(int n_sites, double sensor_fail_prob, double battery_capacity);

/// Pick up a cup and place it in a target region; placing succeeds with
/// probability 0.8 and otherwise leaves the cup near the target.
DomainSpec place_spec();

/// Named generator with "key=value" parameters, as used by the CLI:
/// cluttered_table, blocked_table, domino, aircraft, place.
DomainSpec builtin_spec(const std::string& name, const std::map<std::string, std::string>& params);

} // namespace stamp::domains
