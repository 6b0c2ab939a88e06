#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "frc/indicators.hpp"
#include "frc/stats.hpp"

namespace frc {

// Area enclosed by the seven-axis radar polygon of a normalized vector.
struct RadarArea {
  double value = 0.0;

  friend auto operator<=>(const RadarArea&, const RadarArea&) = default;
};

// (7/2) sin(2 pi / 7): the regular heptagon drawn by the all-ones vector.
double max_radar_area() noexcept;

// Vertex k sits at distance v[k] on the k-th of seven equally spaced axes, so
// the polygon is a fan of triangles: 1/2 sin(2 pi / 7) sum_k v[k] v[k+1].
// Throws DomainError unless every component lies in [0, 1].
RadarArea radar_area(const IndicatorVector& v);

struct PartnerSuggestion {
  TeamId team_id;
  double area = 0.0;
  IndicatorVector effectiveness;  // of the alliance with this candidate added
};

// Scans every candidate, scores members + candidate by the radar area of
// their mean normalized vector, and returns the best `top_k` by descending
// area (ascending team id on ties). Members: the captain and at most one
// partner. Throws EmptyPoolError, DuplicateMemberError when a candidate is
// already a member.
std::vector<PartnerSuggestion> suggest_partner(std::span<const RobotProfile* const> members,
                                               std::span<const RobotProfile* const> pool, std::size_t top_k);

using AllianceMembers = std::array<const RobotProfile*, 3>;

struct RankedAlliance {
  std::array<TeamId, 3> members;  // team-id order
  double area = 0.0;
  IndicatorVector effectiveness;
};

// Descending radar area; equal areas fall back to the sorted member ids.
std::vector<RankedAlliance> rank_alliances(std::span<const AllianceMembers> alliances);

// {"axes": [...], "values": [...], "area": ...} for plotting.
nlohmann::json radar_json(const IndicatorVector& v);

}  // namespace frc
