#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace frc {

enum class Side { Red, Blue };
enum class Winner { Red, Blue, Tie };

constexpr Side opponent(Side s) noexcept { return s == Side::Red ? Side::Blue : Side::Red; }
std::string_view side_name(Side s) noexcept;
std::string_view winner_name(Winner w) noexcept;

using TeamId = std::string;
using AllianceTeams = std::array<TeamId, 3>;

// Team ordering used for every deterministic tie-break: numeric for FRC team
// numbers ("225" < "1218"), lexicographic otherwise.
struct TeamIdLess {
  bool operator()(std::string_view a, std::string_view b) const noexcept;
};
// Numeric score-breakdown fields of one alliance. Booleans are stored as 0/1;
// string-valued fields (per-bay piece descriptions and the like) are dropped.
using Breakdown = std::map<std::string, double, std::less<>>;

// One played match with both alliances. The winner is derived from the
// totals and never read from the fixture.
struct MatchRecord {
  std::string match_key;
  std::string event_key;
  int year = 0;
  AllianceTeams red_teams;
  AllianceTeams blue_teams;
  Breakdown red_breakdown;
  Breakdown blue_breakdown;
  int red_total = 0;
  int blue_total = 0;
  Winner winner = Winner::Tie;

  const AllianceTeams& teams(Side s) const noexcept { return s == Side::Red ? red_teams : blue_teams; }
  const Breakdown& breakdown(Side s) const noexcept {
    return s == Side::Red ? red_breakdown : blue_breakdown;
  }
  int total(Side s) const noexcept { return s == Side::Red ? red_total : blue_total; }

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

Winner winner_from_totals(int red_total, int blue_total) noexcept;

// Accepts TBA "frc254" keys, bare "254" strings and integers; returns "254".
TeamId normalize_team_key(const nlohmann::json& raw);

// Throws ValidationError naming the offending field.
MatchRecord parse_match_record(const nlohmann::json& raw);
MatchRecord parse_match_record(std::string_view text);

// Serializes back to the fixture shape read by parse_match_record.
nlohmann::json to_fixture_json(const MatchRecord& m);

struct SkippedMatch {
  std::string match_key;  // fixture key when readable, otherwise "<file>#<index>"
  std::string reason;
};

struct EventDataset {
  std::string event_key;
  int year = 0;
  std::vector<MatchRecord> matches;
  std::vector<SkippedMatch> skipped;
};

// Loads a single JSON file (one match object or an array of them) or a
// directory of such files, read in filename order. Per-match failures land in
// `skipped`; only an unreadable path raises IoError.
EventDataset load_event(const std::filesystem::path& path);

// Independent events, loaded concurrently. Output order follows `paths`.
std::vector<EventDataset> load_events(const std::vector<std::filesystem::path>& paths);

struct IntegrityReport {
  std::size_t matches = 0;
  std::size_t teams = 0;
  std::size_t ties = 0;
  std::size_t skipped = 0;

  friend bool operator==(const IntegrityReport&, const IntegrityReport&) = default;
};

IntegrityReport dataset_integrity_report(const EventDataset& ds);

void to_json(nlohmann::json& j, const IntegrityReport& r);

}  // namespace frc
