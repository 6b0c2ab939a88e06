#include "frc/draft.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "frc/error.hpp"

namespace frc {

using nlohmann::json;

DraftMode DraftMode::parse(std::string_view text) {
  if (text == "manual") return {};
  if (text == "all") return {Kind::OptimizeAll, {}};
  if (text.rfind("one:", 0) == 0 && text.size() > 4) return {Kind::OptimizeOne, normalize_team_key(nlohmann::json(std::string(text.substr(4))))};
  throw DomainError("unknown draft mode '" + std::string(text) + "'");
}

std::string DraftMode::to_string() const {
  switch (kind) {
    case Kind::OptimizeAll:
      return "all";
    case Kind::OptimizeOne:
      return "one:" + team;
    case Kind::Manual:
      break;
  }
  return "manual";
}

int seat_for_pick(std::size_t pick_index) noexcept {
  const auto i = static_cast<int>(pick_index);
  constexpr auto n = static_cast<int>(kAllianceCount);
  return i < n ? i + 1 : 2 * n - i;
}

DraftState::DraftState(std::vector<TeamId> ranking, DraftMode mode) : ranking_(std::move(ranking)), mode_(std::move(mode)) {
  if (ranking_.size() < kAllianceCount + 1) {
    throw TooFewTeamsError("a draft needs at least 9 ranked teams, got " + std::to_string(ranking_.size()));
  }
  for (std::size_t i = 0; i < ranking_.size(); ++i) {
    if (!rank_index_.emplace(ranking_[i], i).second) throw DomainError("team " + ranking_[i] + " ranked twice");
  }
  for (std::size_t s = 0; s < kAllianceCount; ++s) seats_[s].captain = ranking_[s];
  pool_.assign(ranking_.begin() + kAllianceCount, ranking_.end());
  if (mode_.kind == DraftMode::Kind::OptimizeOne && !seat_of_captain(mode_.team)) {
    throw DomainError("team " + mode_.team + " is not an alliance captain");
  }
}

std::size_t DraftState::rank_of(std::string_view team) const {
  const auto it = rank_index_.find(std::string(team));
  if (it == rank_index_.end()) throw DomainError("team " + std::string(team) + " is not ranked at this event");
  return it->second + 1;
}

std::optional<int> DraftState::seat_of_captain(std::string_view team) const {
  for (std::size_t s = 0; s < kAllianceCount; ++s) {
    if (seats_[s].captain == team) return static_cast<int>(s) + 1;
  }
  return std::nullopt;
}

std::optional<int> DraftState::seat_of_team(std::string_view team) const {
  for (std::size_t s = 0; s < kAllianceCount; ++s) {
    const auto& slot = seats_[s];
    if (slot.captain == team || std::find(slot.partners.begin(), slot.partners.end(), team) != slot.partners.end()) {
      return static_cast<int>(s) + 1;
    }
  }
  return std::nullopt;
}

bool DraftState::captain_pick_allowed(int picker_seat, int target_seat) const {
  // A captain who already has partners has formed an alliance and cannot be
  // picked; promotion also needs a pool team to refill seat 8.
  return target_seat > picker_seat && seats_[static_cast<std::size_t>(target_seat - 1)].partners.empty() &&
         !pool_.empty();
}

std::vector<TeamId> DraftState::eligible_picks() const {
  if (picks_made_ >= kDraftPicks) return {};
  const int picker = seat_for_pick(picks_made_);
  std::vector<TeamId> out = pool_;
  for (int s = picker + 1; s <= static_cast<int>(kAllianceCount); ++s) {
    if (captain_pick_allowed(picker, s)) out.push_back(seats_[static_cast<std::size_t>(s - 1)].captain);
  }
  std::sort(out.begin(), out.end(), [this](const TeamId& a, const TeamId& b) {
    return rank_index_.at(a) < rank_index_.at(b);
  });
  return out;
}

bool DraftState::complete() const { return picks_made_ >= kDraftPicks || eligible_picks().empty(); }

int DraftState::current_seat() const {
  if (complete()) throw DraftCompleteError("the draft is complete");
  return seat_for_pick(picks_made_);
}

const TeamId& DraftState::current_picker() const {
  return seats_[static_cast<std::size_t>(current_seat() - 1)].captain;
}

PickEvent DraftState::pick(const TeamId& picked) {
  const int seat = current_seat();
  AllianceSlot& picker = seats_[static_cast<std::size_t>(seat - 1)];

  PickEvent event;
  event.pick_number = picks_made_ + 1;
  event.seat = seat;
  event.picking_captain = picker.captain;
  event.picked = picked;

  if (!contains(picked)) throw IneligiblePickError("team " + picked + " is not ranked at this event");
  if (picked == picker.captain) throw IneligiblePickError("a captain cannot pick itself");

  const auto in_pool = std::find(pool_.begin(), pool_.end(), picked);
  if (in_pool != pool_.end()) {
    pool_.erase(in_pool);
    picker.partners.push_back(picked);
  } else if (const auto target = seat_of_captain(picked)) {
    if (*target < seat) {
      throw IneligiblePickError("team " + picked + " is seeded above the picking captain");
    }
    if (!seats_[static_cast<std::size_t>(*target - 1)].partners.empty()) {
      throw IneligiblePickError("team " + picked + " already leads an alliance");
    }
    if (pool_.empty()) throw IneligiblePickError("no pool team is left to take over seat 8");

    event.picked_from_seat = *target;
    for (int s = *target; s < static_cast<int>(kAllianceCount); ++s) {
      seats_[static_cast<std::size_t>(s - 1)] = std::move(seats_[static_cast<std::size_t>(s)]);
      event.promotions.push_back({seats_[static_cast<std::size_t>(s - 1)].captain, s + 1, s});
    }
    seats_.back() = AllianceSlot{pool_.front(), {}};
    pool_.erase(pool_.begin());
    event.promotions.push_back({seats_.back().captain, std::nullopt, static_cast<int>(kAllianceCount)});
    // The shift only touches seats below the picker, so `picker` is intact.
    picker.partners.push_back(picked);
  } else {
    throw IneligiblePickError("team " + picked + " is already on an alliance");
  }
  ++picks_made_;
  return event;
}

DraftState new_draft(std::vector<TeamId> ranking, DraftMode mode) { return DraftState(std::move(ranking), std::move(mode)); }

std::pair<DraftState, PickEvent> apply_pick(const DraftState& state, const TeamId& picked) {
  DraftState next = state;
  PickEvent e = next.pick(picked);
  return {std::move(next), std::move(e)};
}

const TeamId& current_picker(const DraftState& state) { return state.current_picker(); }

std::vector<const RobotProfile*> picker_members(const DraftState& state, const ProfileSet& profiles) {
  const auto& slot = state.seats()[static_cast<std::size_t>(state.current_seat() - 1)];
  std::vector<const RobotProfile*> members{&profiles.at(slot.captain)};
  for (const auto& p : slot.partners) members.push_back(&profiles.at(p));
  return members;
}

std::vector<PartnerSuggestion> suggest_for_current_picker(const DraftState& state, const ProfileSet& profiles,
                                                          std::size_t top_k) {
  const auto members = picker_members(state, profiles);
  std::vector<const RobotProfile*> pool;
  for (const auto& t : state.eligible_picks()) pool.push_back(&profiles.at(t));
  return suggest_partner(members, pool, top_k);
}

DraftRun run_optimize_all(DraftState state, const ProfileSet& profiles) {
  for (const auto& t : state.ranking()) (void)profiles.at(t);
  DraftRun run{std::move(state), {}};
  while (!run.state.complete()) {
    const auto best = suggest_for_current_picker(run.state, profiles, 1);
    run.log.push_back(run.state.pick(best.front().team_id));
  }
  return run;
}

OptimizeOneSession::OptimizeOneSession(DraftState state, TeamId our_team, const ProfileSet& profiles)
    : state_(std::move(state)), our_team_(std::move(our_team)), profiles_(&profiles) {
  if (!state_.seat_of_captain(our_team_)) throw DomainError("team " + our_team_ + " is not an alliance captain");
  (void)profiles.at(our_team_);
}

bool OptimizeOneSession::our_turn() const { return !state_.complete() && state_.current_picker() == our_team_; }

std::vector<PartnerSuggestion> OptimizeOneSession::suggestions(std::size_t top_k) const {
  if (!our_turn()) throw DomainError("it is not " + our_team_ + "'s turn to pick");
  return suggest_for_current_picker(state_, *profiles_, top_k);
}

PickEvent OptimizeOneSession::enter_pick(const TeamId& picked) {
  PickEvent e = state_.pick(picked);
  log_.push_back(e);
  return e;
}

std::vector<TeamId> parse_rankings(const json& doc) {
  try {
    std::vector<TeamId> out;
    if (doc.is_array()) {
      for (const auto& k : doc) out.push_back(normalize_team_key(k));
      return out;
    }
    std::vector<std::pair<int, TeamId>> ranked;
    for (const auto& r : doc.at("rankings")) {
      ranked.emplace_back(r.at("rank").get<int>(), normalize_team_key(r.at("team_key")));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [rank, team] : ranked) out.push_back(std::move(team));
    return out;
  } catch (const json::exception& e) {
    throw ValidationError("rankings", e.what());
  }
}

std::vector<TeamId> load_rankings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  json doc = json::parse(ss.str(), nullptr, false);
  if (doc.is_discarded()) throw ValidationError("rankings", path.string() + " is not valid JSON");
  return parse_rankings(doc);
}

json rankings_json(const std::vector<TeamId>& ranking) {
  json list = json::array();
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    list.push_back({{"rank", i + 1}, {"team_key", "frc" + ranking[i]}});
  }
  return json{{"rankings", std::move(list)}};
}

json to_json(const PickEvent& e) {
  json promotions = json::array();
  for (const auto& p : e.promotions) {
    promotions.push_back({{"team", p.team}, {"from", p.from_seat ? json(*p.from_seat) : json(nullptr)}, {"to", p.to_seat}});
  }
  return json{{"pick", e.pick_number},
              {"seat", e.seat},
              {"captain", e.picking_captain},
              {"picked", e.picked},
              {"picked_from_seat", e.picked_from_seat ? json(*e.picked_from_seat) : json(nullptr)},
              {"promotions", std::move(promotions)}};
}

PickEvent pick_event_from_json(const json& j) {
  try {
    PickEvent e;
    e.pick_number = j.at("pick").get<std::size_t>();
    e.seat = j.at("seat").get<int>();
    e.picking_captain = j.at("captain").get<std::string>();
    e.picked = j.at("picked").get<std::string>();
    if (j.contains("picked_from_seat") && !j["picked_from_seat"].is_null()) {
      e.picked_from_seat = j["picked_from_seat"].get<int>();
    }
    for (const auto& p : j.at("promotions")) {
      Promotion pr;
      pr.team = p.at("team").get<std::string>();
      if (!p.at("from").is_null()) pr.from_seat = p["from"].get<int>();
      pr.to_seat = p.at("to").get<int>();
      e.promotions.push_back(std::move(pr));
    }
    return e;
  } catch (const json::exception& ex) {
    throw ValidationError("pick_event", ex.what());
  }
}

json to_json(const DraftState& s) {
  json seats = json::array();
  for (std::size_t i = 0; i < kAllianceCount; ++i) {
    const auto& slot = s.seats()[i];
    seats.push_back({{"seat", i + 1},
                     {"captain", slot.captain},
                     {"captain_rank", s.rank_of(slot.captain)},
                     {"partners", slot.partners}});
  }
  const bool done = s.complete();
  json out{{"ranking", s.ranking()},
           {"seats", std::move(seats)},
           {"pool", s.pool()},
           {"picks_made", s.picks_made()},
           {"complete", done},
           {"mode", s.mode().to_string()}};
  if (done) {
    out["current_seat"] = nullptr;
    out["current_picker"] = nullptr;
    out["eligible"] = json::array();
  } else {
    out["current_seat"] = s.current_seat();
    out["current_picker"] = s.current_picker();
    out["eligible"] = s.eligible_picks();
  }
  return out;
}

void append_pick_log(const std::filesystem::path& path, const PickEvent& e) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out << to_json(e).dump() << '\n';
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

void write_pick_log(const std::filesystem::path& path, const std::vector<PickEvent>& log) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (const auto& e : log) out << to_json(e).dump() << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<PickEvent> read_pick_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<PickEvent> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ValidationError("pick_log", "line " + std::to_string(out.size() + 1) + " is not JSON");
    out.push_back(pick_event_from_json(j));
  }
  return out;
}

DraftState replay_picks(std::vector<TeamId> ranking, const std::vector<PickEvent>& log, DraftMode mode) {
  DraftState state(std::move(ranking), std::move(mode));
  for (const auto& recorded : log) {
    if (state.complete()) throw IneligiblePickError("pick log continues past the end of the draft");
    if (state.current_picker() != recorded.picking_captain) {
      throw IneligiblePickError("pick " + std::to_string(recorded.pick_number) + " was made by " +
                                recorded.picking_captain + " but " + state.current_picker() + " is on the clock");
    }
    const PickEvent replayed = state.pick(recorded.picked);
    if (!(replayed == recorded)) {
      throw IneligiblePickError("pick " + std::to_string(recorded.pick_number) + " replays differently");
    }
  }
  return state;
}

}  // namespace frc
