#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "frc/ingest.hpp"
#include "frc/optimizer.hpp"
#include "frc/stats.hpp"

namespace frc {

inline constexpr std::size_t kAllianceCount = 8;
inline constexpr std::size_t kPartnersPerAlliance = 2;
inline constexpr std::size_t kDraftPicks = kAllianceCount * kPartnersPerAlliance;

struct AllianceSlot {
  TeamId captain;
  std::vector<TeamId> partners;

  friend bool operator==(const AllianceSlot&, const AllianceSlot&) = default;
};

struct DraftMode {
  enum class Kind { Manual, OptimizeAll, OptimizeOne };
  Kind kind = Kind::Manual;
  TeamId team;  // OptimizeOne only

  static DraftMode parse(std::string_view text);  // "manual", "all", "one:1218"
  std::string to_string() const;

  friend bool operator==(const DraftMode&, const DraftMode&) = default;
};

struct Promotion {
  TeamId team;
  std::optional<int> from_seat;  // nullopt: came up from the pool
  int to_seat = 0;

  friend bool operator==(const Promotion&, const Promotion&) = default;
};

struct PickEvent {
  std::size_t pick_number = 0;  // 1-based
  int seat = 0;                 // picking seat, 1-based
  TeamId picking_captain;
  TeamId picked;
  std::optional<int> picked_from_seat;  // set when a captain was picked
  std::vector<Promotion> promotions;

  friend bool operator==(const PickEvent&, const PickEvent&) = default;
};

// Alliance selection over eight seats. Turn order belongs to seats, not to
// teams: seats 1..8 in round one, 8..1 in round two. Picking a captain who
// has not yet picked pulls every lower seat up by one and seats the best
// remaining pool team at 8.
class DraftState {
 public:
  // Throws TooFewTeamsError for fewer than nine teams, DomainError for
  // duplicate ids.
  explicit DraftState(std::vector<TeamId> ranking, DraftMode mode = {});

  const std::vector<TeamId>& ranking() const noexcept { return ranking_; }
  const std::array<AllianceSlot, kAllianceCount>& seats() const noexcept { return seats_; }
  const std::vector<TeamId>& pool() const noexcept { return pool_; }  // rank order
  const DraftMode& mode() const noexcept { return mode_; }
  std::size_t picks_made() const noexcept { return picks_made_; }

  // 1-based seed of a team; throws DomainError for unknown teams.
  std::size_t rank_of(std::string_view team) const;
  bool contains(std::string_view team) const { return rank_index_.contains(std::string(team)); }
  // 1-based seat of a captain, or nullopt.
  std::optional<int> seat_of_captain(std::string_view team) const;
  // 1-based seat of the alliance a team belongs to (captain or partner).
  std::optional<int> seat_of_team(std::string_view team) const;

  // Every pick made, or the current picker has nobody left to pick.
  bool complete() const;
  // Throws DraftCompleteError.
  int current_seat() const;
  const TeamId& current_picker() const;

  // Pool teams plus captains seated below the current picker who have not
  // picked yet, in rank order.
  std::vector<TeamId> eligible_picks() const;

  // Throws DraftCompleteError, IneligiblePickError.
  PickEvent pick(const TeamId& picked);

  friend bool operator==(const DraftState&, const DraftState&) = default;

 private:
  bool captain_pick_allowed(int picker_seat, int target_seat) const;

  std::vector<TeamId> ranking_;
  std::map<TeamId, std::size_t> rank_index_;
  std::array<AllianceSlot, kAllianceCount> seats_;
  std::vector<TeamId> pool_;
  std::size_t picks_made_ = 0;
  DraftMode mode_;
};

// Seat that owns the given 0-based pick index.
int seat_for_pick(std::size_t pick_index) noexcept;

DraftState new_draft(std::vector<TeamId> ranking, DraftMode mode = {});
std::pair<DraftState, PickEvent> apply_pick(const DraftState& state, const TeamId& picked);
const TeamId& current_picker(const DraftState& state);

// Members of the current picker's alliance, as profiles.
std::vector<const RobotProfile*> picker_members(const DraftState& state, const ProfileSet& profiles);

// Ranked partner suggestions for whoever picks next, over every eligible pick.
std::vector<PartnerSuggestion> suggest_for_current_picker(const DraftState& state, const ProfileSet& profiles,
                                                          std::size_t top_k);

struct DraftRun {
  DraftState state;
  std::vector<PickEvent> log;
};

// Every captain takes its top suggestion in turn until the draft completes.
// Throws MissingProfileError before any pick when a ranked team has no profile.
DraftRun run_optimize_all(DraftState state, const ProfileSet& profiles);

// Assistant for one captain: other captains' picks are entered as they
// happen; when our team is on the clock it offers suggestions and waits for
// the user's actual choice. It never picks on anyone's behalf.
class OptimizeOneSession {
 public:
  // Throws DomainError unless our_team currently holds a captain seat;
  // MissingProfileError when our team has no profile.
  OptimizeOneSession(DraftState state, TeamId our_team, const ProfileSet& profiles);

  const DraftState& state() const noexcept { return state_; }
  const TeamId& our_team() const noexcept { return our_team_; }
  const std::vector<PickEvent>& log() const noexcept { return log_; }
  bool our_turn() const;

  // Throws DomainError when it is not our turn.
  std::vector<PartnerSuggestion> suggestions(std::size_t top_k = 3) const;

  // Records whichever captain is on the clock picking `picked`, ours included.
  PickEvent enter_pick(const TeamId& picked);

 private:
  DraftState state_;
  TeamId our_team_;
  const ProfileSet* profiles_;
  std::vector<PickEvent> log_;
};

// TBA-shaped rankings: {"rankings": [{"rank": 1, "team_key": "frc2539"}, ...]}
// or a bare array of team keys in seed order.
std::vector<TeamId> parse_rankings(const nlohmann::json& doc);
std::vector<TeamId> load_rankings(const std::filesystem::path& path);
nlohmann::json rankings_json(const std::vector<TeamId>& ranking);

nlohmann::json to_json(const PickEvent& e);
PickEvent pick_event_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DraftState& s);

// Pick log: one PickEvent JSON object per line.
void append_pick_log(const std::filesystem::path& path, const PickEvent& e);
void write_pick_log(const std::filesystem::path& path, const std::vector<PickEvent>& log);
std::vector<PickEvent> read_pick_log(const std::filesystem::path& path);

// Re-applies a log to a fresh draft. Throws IneligiblePickError when a
// recorded picker or promotion disagrees with the replay.
DraftState replay_picks(std::vector<TeamId> ranking, const std::vector<PickEvent>& log, DraftMode mode = {});

}  // namespace frc
