#include "frc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "frc/error.hpp"

namespace frc {

namespace {
const double kWedge = 0.5 * std::sin(2.0 * std::numbers::pi / static_cast<double>(kIndicatorCount));
}

double max_radar_area() noexcept { return static_cast<double>(kIndicatorCount) * kWedge; }

RadarArea radar_area(const IndicatorVector& v) {
  if (!v.is_normalized()) throw DomainError("radar area needs components in [0, 1]");
  double sum = 0.0;
  for (std::size_t k = 0; k < kIndicatorCount; ++k) sum += v[k] * v[(k + 1) % kIndicatorCount];
  return RadarArea{kWedge * sum};
}

std::vector<PartnerSuggestion> suggest_partner(std::span<const RobotProfile* const> members,
                                               std::span<const RobotProfile* const> pool, std::size_t top_k) {
  if (members.empty() || members.size() > 2) {
    throw DomainError("partner suggestions need 1 or 2 current members");
  }
  if (pool.empty()) throw EmptyPoolError("no candidates left to suggest");

  std::set<std::string_view> taken;
  for (const auto* m : members) taken.insert(m->team_id);

  std::vector<const RobotProfile*> alliance(members.begin(), members.end());
  alliance.push_back(nullptr);
  std::vector<PartnerSuggestion> scored;
  scored.reserve(pool.size());
  for (const auto* candidate : pool) {
    if (taken.contains(candidate->team_id)) throw DuplicateMemberError(candidate->team_id);
    alliance.back() = candidate;
    PartnerSuggestion s;
    s.team_id = candidate->team_id;
    s.effectiveness = alliance_effectiveness(alliance);
    s.area = radar_area(s.effectiveness).value;
    scored.push_back(std::move(s));
  }

  auto better = [](const PartnerSuggestion& a, const PartnerSuggestion& b) {
    if (a.area != b.area) return a.area > b.area;
    return TeamIdLess{}(a.team_id, b.team_id);
  };
  const std::size_t k = std::min(top_k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(), better);
  scored.resize(k);
  return scored;
}

std::vector<RankedAlliance> rank_alliances(std::span<const AllianceMembers> alliances) {
  std::vector<RankedAlliance> out;
  out.reserve(alliances.size());
  for (const auto& a : alliances) {
    RankedAlliance r;
    r.effectiveness = alliance_effectiveness(*a[0], *a[1], *a[2]);
    r.area = radar_area(r.effectiveness).value;
    for (std::size_t i = 0; i < 3; ++i) r.members[i] = a[i]->team_id;
    std::sort(r.members.begin(), r.members.end(), TeamIdLess{});
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedAlliance& a, const RankedAlliance& b) {
    if (a.area != b.area) return a.area > b.area;
    return std::lexicographical_compare(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                                        TeamIdLess{});
  });
  return out;
}

nlohmann::json radar_json(const IndicatorVector& v) {
  nlohmann::json axes = nlohmann::json::array();
  for (Indicator i : kAllIndicators) axes.push_back(indicator_name(i));
  return {{"axes", std::move(axes)}, {"values", v}, {"area", radar_area(v).value}};
}

}  // namespace frc
