#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>

#include <nlohmann/json.hpp>

#include "frc/indicators.hpp"
#include "frc/ingest.hpp"
#include "frc/schema.hpp"

namespace frc {

struct RawAggregate {
  std::size_t match_count = 0;
  IndicatorVector raw_means;
};

struct RawProfileTable {
  int year = 0;
  std::map<TeamId, RawAggregate, TeamIdLess> teams;
};

struct RobotProfile {
  TeamId team_id;
  std::size_t match_count = 0;
  IndicatorVector raw_means;
  IndicatorVector normalized;

  friend bool operator==(const RobotProfile&, const RobotProfile&) = default;
};

// Normalized robot profiles over one population (an event or a season).
// extrema holds SCORE_MAX for the positive axes and SCORE_MIN for Fouls and
// Defense, both taken over the per-robot raw means.
struct ProfileSet {
  int year = 0;
  std::map<TeamId, RobotProfile, TeamIdLess> profiles;
  IndicatorVector extrema;

  const RobotProfile* find(std::string_view team) const;
  // Throws MissingProfileError.
  const RobotProfile& at(std::string_view team) const;

  friend bool operator==(const ProfileSet&, const ProfileSet&) = default;
};

// Mean over each team's matches of its alliance's raw indicator vector.
// Datasets with no matches are ignored; any other year must equal s.year.
RawProfileTable aggregate_robot_profiles(std::span<const EventDataset> datasets, const YearSchema& s);

// Positive axes: value / SCORE_MAX (all 0 when SCORE_MAX <= 0).
// Fouls, Defense: 1 - value / SCORE_MIN (all 1 when SCORE_MIN >= 0).
ProfileSet normalize_profiles(const RawProfileTable& raw);

// Component-wise mean of the members' normalized vectors. Members are summed
// in team-id order so the result does not depend on argument order.
IndicatorVector alliance_effectiveness(std::span<const RobotProfile* const> members);
IndicatorVector alliance_effectiveness(const RobotProfile& a, const RobotProfile& b, const RobotProfile& c);

// Synthetic "average" opponent: component-wise mean of every normalized
// profile in the set.
IndicatorVector average_alliance(const ProfileSet& set);

nlohmann::json to_json(const ProfileSet& set);
ProfileSet profile_set_from_json(const nlohmann::json& doc);
void save_profiles(const ProfileSet& set, const std::filesystem::path& path);
ProfileSet load_profiles(const std::filesystem::path& path);

}  // namespace frc
