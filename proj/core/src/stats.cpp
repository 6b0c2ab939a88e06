#include "frc/stats.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <vector>

#include "frc/error.hpp"

namespace frc {

using nlohmann::json;

const RobotProfile* ProfileSet::find(std::string_view team) const {
  const auto it = profiles.find(std::string(team));
  return it == profiles.end() ? nullptr : &it->second;
}

const RobotProfile& ProfileSet::at(std::string_view team) const {
  if (const auto* p = find(team)) return *p;
  throw MissingProfileError(std::string(team));
}

RawProfileTable aggregate_robot_profiles(std::span<const EventDataset> datasets, const YearSchema& s) {
  struct Sum {
    std::size_t count = 0;
    IndicatorVector total;
  };
  std::map<TeamId, Sum, TeamIdLess> sums;

  for (const auto& ds : datasets) {
    if (ds.matches.empty()) continue;
    if (ds.year != s.year) throw YearMismatchError(s.year, ds.year, "event " + ds.event_key);
    for (const auto& m : ds.matches) {
      for (Side side : {Side::Red, Side::Blue}) {
        const IndicatorVector v = score_alliance(m, side, s);
        for (const auto& team : m.teams(side)) {
          Sum& acc = sums[team];
          ++acc.count;
          for (std::size_t k = 0; k < kIndicatorCount; ++k) acc.total[k] += v[k];
        }
      }
    }
  }

  RawProfileTable out;
  out.year = s.year;
  for (const auto& [team, acc] : sums) {
    RawAggregate agg;
    agg.match_count = acc.count;
    for (std::size_t k = 0; k < kIndicatorCount; ++k) {
      agg.raw_means[k] = acc.total[k] / static_cast<double>(acc.count);
    }
    out.teams.emplace(team, agg);
  }
  return out;
}

ProfileSet normalize_profiles(const RawProfileTable& raw) {
  ProfileSet set;
  set.year = raw.year;
  if (raw.teams.empty()) return set;

  for (Indicator ind : kAllIndicators) {
    const bool penalty = is_penalty_axis(ind);
    double extreme = raw.teams.begin()->second.raw_means[ind];
    for (const auto& [team, agg] : raw.teams) {
      const double v = agg.raw_means[ind];
      extreme = penalty ? std::min(extreme, v) : std::max(extreme, v);
    }
    set.extrema[ind] = extreme;
  }

  for (const auto& [team, agg] : raw.teams) {
    RobotProfile p;
    p.team_id = team;
    p.match_count = agg.match_count;
    p.raw_means = agg.raw_means;
    for (Indicator ind : kAllIndicators) {
      const double v = agg.raw_means[ind];
      const double extreme = set.extrema[ind];
      double n;
      if (is_penalty_axis(ind)) {
        n = extreme >= 0.0 ? 1.0 : 1.0 - v / extreme;
      } else {
        n = extreme <= 0.0 ? 0.0 : v / extreme;
      }
      // Raw values on the wrong side of zero would leave [0, 1]; saturate them.
      p.normalized[ind] = std::clamp(n, 0.0, 1.0);
    }
    set.profiles.emplace(team, std::move(p));
  }
  return set;
}

IndicatorVector alliance_effectiveness(std::span<const RobotProfile* const> members) {
  if (members.empty() || members.size() > 3) {
    throw DomainError("an alliance has between 1 and 3 members, got " + std::to_string(members.size()));
  }
  std::vector<const RobotProfile*> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RobotProfile* a, const RobotProfile* b) { return TeamIdLess{}(a->team_id, b->team_id); });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->team_id == sorted[i - 1]->team_id) throw DuplicateMemberError(sorted[i]->team_id);
  }

  IndicatorVector out;
  for (std::size_t k = 0; k < kIndicatorCount; ++k) {
    double sum = 0.0;
    for (const auto* p : sorted) sum += p->normalized[k];
    out[k] = sum / static_cast<double>(sorted.size());
  }
  return out;
}

IndicatorVector alliance_effectiveness(const RobotProfile& a, const RobotProfile& b, const RobotProfile& c) {
  const std::array<const RobotProfile*, 3> members{&a, &b, &c};
  return alliance_effectiveness(members);
}

IndicatorVector average_alliance(const ProfileSet& set) {
  IndicatorVector out;
  if (set.profiles.empty()) return out;
  for (const auto& [team, p] : set.profiles) {
    for (std::size_t k = 0; k < kIndicatorCount; ++k) out[k] += p.normalized[k];
  }
  for (auto& v : out.values) v /= static_cast<double>(set.profiles.size());
  return out;
}

json to_json(const ProfileSet& set) {
  json axes = json::array();
  for (Indicator i : kAllIndicators) axes.push_back(indicator_name(i));
  json profiles = json::array();
  for (const auto& [team, p] : set.profiles) {
    profiles.push_back({{"team", p.team_id},
                        {"match_count", p.match_count},
                        {"raw_means", p.raw_means},
                        {"normalized", p.normalized}});
  }
  return json{{"format", "frc-profiles"}, {"format_version", 1},     {"year", set.year},
              {"axes", std::move(axes)},  {"extrema", set.extrema}, {"profiles", std::move(profiles)}};
}

ProfileSet profile_set_from_json(const json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "frc-profiles") {
    throw FormatVersionError("not a profiles document");
  }
  if (doc.value("format_version", 0) != 1) throw FormatVersionError("unsupported profiles format_version");
  try {
    ProfileSet set;
    set.year = doc.at("year").get<int>();
    set.extrema = doc.at("extrema").get<IndicatorVector>();
    for (const auto& item : doc.at("profiles")) {
      RobotProfile p;
      p.team_id = item.at("team").get<std::string>();
      p.match_count = item.at("match_count").get<std::size_t>();
      p.raw_means = item.at("raw_means").get<IndicatorVector>();
      p.normalized = item.at("normalized").get<IndicatorVector>();
      const std::string team = p.team_id;
      set.profiles.emplace(team, std::move(p));
    }
    return set;
  } catch (const json::exception& e) {
    throw FormatVersionError(std::string("malformed profiles document: ") + e.what());
  } catch (const ShapeError& e) {
    throw FormatVersionError(std::string("malformed profiles document: ") + e.what());
  }
}

void save_profiles(const ProfileSet& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(set).dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

ProfileSet load_profiles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw FormatVersionError(path.string() + " is not valid JSON");
  return profile_set_from_json(doc);
}

}  // namespace frc
