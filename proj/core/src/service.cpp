#include "frc/service.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "frc/error.hpp"
#include "frc/optimizer.hpp"

namespace frc {

using nlohmann::json;
namespace fs = std::filesystem;

struct DraftService::Session {
  std::string id;
  DraftMode mode;
  DraftState state;
  std::vector<PickEvent> log;
  mutable std::mutex mutex;

  Session(std::string i, DraftState s) : id(std::move(i)), mode(s.mode()), state(std::move(s)) {}
  std::uint64_t revision() const { return log.size(); }
};

namespace {

ServiceResponse reply(int status, json body) { return {status, std::move(body)}; }

ServiceResponse error(int status, const std::string& message, std::uint64_t revision = 0) {
  return {status, json{{"error", message}, {"revision", revision}}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(path);
  while (std::getline(in, part, '/')) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

json profile_json(const RobotProfile& p) {
  return json{{"team", p.team_id},
              {"match_count", p.match_count},
              {"raw_means", p.raw_means},
              {"normalized", p.normalized},
              {"radar", radar_json(p.normalized)}};
}

json suggestion_json(const PartnerSuggestion& s) {
  return json{{"team", s.team_id}, {"area", s.area}, {"effectiveness", s.effectiveness}};
}

std::optional<json> parse_body(const std::string& body) {
  json j = json::parse(body.empty() ? std::string("{}") : body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

ServiceRequest make_request(std::string method, const std::string& target, std::string body) {
  ServiceRequest r;
  r.method = std::move(method);
  r.body = std::move(body);
  const auto q = target.find('?');
  r.path = target.substr(0, q);
  if (q != std::string::npos) {
    std::istringstream in(target.substr(q + 1));
    std::string pair;
    while (std::getline(in, pair, '&')) {
      const auto eq = pair.find('=');
      if (eq == std::string::npos) {
        r.query[pair] = "";
      } else {
        r.query[pair.substr(0, eq)] = pair.substr(eq + 1);
      }
    }
  }
  return r;
}

DraftService::DraftService(ProfileSet profiles, std::optional<TrainedModel> model, std::vector<TeamId> ranking)
    : DraftService(std::move(profiles), std::move(model), std::move(ranking), Options{}) {}

DraftService::DraftService(ProfileSet profiles, std::optional<TrainedModel> model, std::vector<TeamId> ranking,
                           Options options)
    : profiles_(std::move(profiles)),
      model_(std::move(model)),
      ranking_(std::move(ranking)),
      options_(std::move(options)),
      average_(average_alliance(profiles_)) {
  // Validates the ranking once; sessions copy from it.
  (void)DraftState(ranking_);
  for (const auto& t : ranking_) (void)profiles_.at(t);
  if (options_.state_dir) {
    fs::create_directories(*options_.state_dir);
    restore_sessions();
  }
}

DraftService::~DraftService() = default;

std::size_t DraftService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

ServiceResponse DraftService::handle(const ServiceRequest& request) {
  const auto parts = split_path(request.path);
  const bool get = request.method == "GET";
  const bool post = request.method == "POST";
  try {
    if (parts.size() == 1 && parts[0] == "rankings" && get) return get_rankings();
    if (parts.size() == 1 && parts[0] == "average-alliance" && get) return get_average_alliance();
    if (parts.size() == 2 && parts[0] == "profiles" && get) return get_profile(parts[1]);
    if (parts.size() == 1 && parts[0] == "predict" && post) return post_predict(request.body);
    if (parts.size() == 1 && parts[0] == "sessions" && post) return post_session(request.body);
    if (parts.size() == 2 && parts[0] == "sessions" && get) return get_session(parts[1]);
    if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "picks" && post) {
      return post_pick(parts[1], request.body);
    }
    if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "suggestions" && get) {
      return get_suggestions(parts[1], request.query);
    }
    return error(404, "no route for " + request.method + " " + request.path);
  } catch (const Error& e) {
    return error(500, e.what());
  }
}

ServiceResponse DraftService::get_rankings() const {
  json list = json::array();
  for (std::size_t i = 0; i < ranking_.size(); ++i) list.push_back({{"rank", i + 1}, {"team", ranking_[i]}});
  return reply(200, {{"revision", 0}, {"rankings", std::move(list)}});
}

ServiceResponse DraftService::get_profile(const std::string& team) const {
  const auto* p = profiles_.find(team);
  if (!p) return error(404, "unknown team " + team);
  return reply(200, {{"revision", 0}, {"profile", profile_json(*p)}});
}

ServiceResponse DraftService::get_average_alliance() const {
  return reply(200, {{"revision", 0}, {"average_alliance", radar_json(average_)}, {"teams", profiles_.profiles.size()}});
}

ServiceResponse DraftService::post_predict(const std::string& body) const {
  const auto doc = parse_body(body);
  if (!doc) return error(422, "body must be a JSON object");

  // An alliance is either a 7-component vector or a list of team ids.
  auto resolve = [&](const char* key, IndicatorVector& out) -> std::optional<ServiceResponse> {
    if (!doc->contains(key)) {
      if (std::string_view(key) == "blue") {
        out = average_;
        return std::nullopt;
      }
      return error(422, std::string("missing ") + key);
    }
    const json& v = (*doc)[key];
    if (!v.is_array() || v.empty()) return error(422, std::string(key) + " must be a non-empty array");
    if (v[0].is_number()) {
      try {
        out = v.get<IndicatorVector>();
      } catch (const ShapeError& e) {
        return error(422, std::string(key) + ": " + e.what());
      }
      if (!out.is_normalized()) return error(422, std::string(key) + " must lie in [0, 1]");
      return std::nullopt;
    }
    std::vector<const RobotProfile*> members;
    for (const auto& t : v) {
      TeamId id;
      try {
        id = normalize_team_key(t);
      } catch (const ValidationError& e) {
        return error(422, std::string(key) + ": " + e.what());
      }
      const auto* p = profiles_.find(id);
      if (!p) return error(404, "unknown team " + id);
      members.push_back(p);
    }
    try {
      out = alliance_effectiveness(members);
    } catch (const Error& e) {
      return error(422, std::string(key) + ": " + e.what());
    }
    return std::nullopt;
  };

  IndicatorVector red, blue;
  if (auto bad = resolve("red", red)) return *bad;
  if (auto bad = resolve("blue", blue)) return *bad;
  if (!model_) return error(503, "no prediction model loaded");
  const Prediction p = predict(*model_, red, blue);
  return reply(200, {{"revision", 0},
                     {"probability", p.probability},
                     {"red_wins", p.red_wins},
                     {"red", red},
                     {"blue", blue},
                     {"blue_is_average", !doc->contains("blue")}});
}

std::shared_ptr<DraftService::Session> DraftService::find_session(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

namespace {

json session_json(const std::string& id, const DraftState& state, const std::vector<PickEvent>& log) {
  json picks = json::array();
  for (const auto& e : log) picks.push_back(to_json(e));
  return json{{"session_id", id}, {"revision", log.size()}, {"state", to_json(state)}, {"picks", std::move(picks)}};
}

}  // namespace

ServiceResponse DraftService::post_session(const std::string& body) {
  const auto doc = parse_body(body);
  if (!doc) return error(422, "body must be a JSON object");
  DraftMode mode;
  if (doc->contains("mode")) {
    if (!(*doc)["mode"].is_string()) return error(422, "mode must be a string");
    try {
      mode = DraftMode::parse((*doc)["mode"].get<std::string>());
    } catch (const DomainError& e) {
      return error(422, e.what());
    }
  }
  std::optional<DraftState> state;
  try {
    state.emplace(ranking_, mode);
  } catch (const DomainError& e) {
    return error(422, e.what());
  }

  std::shared_ptr<Session> session;
  {
    std::unique_lock lock(sessions_mutex_);
    const std::string id = "s" + std::to_string(next_session_++);
    session = std::make_shared<Session>(id, std::move(*state));
    sessions_.emplace(id, session);
  }
  if (options_.state_dir) {
    const json header{{"session_id", session->id}, {"mode", mode.to_string()}, {"ranking", ranking_}};
    std::ofstream out(*options_.state_dir / (session->id + ".session.json"));
    out << header.dump() << '\n';
    std::ofstream(*options_.state_dir / (session->id + ".picks.jsonl"), std::ios::trunc);
  }
  std::scoped_lock lock(session->mutex);
  return reply(201, session_json(session->id, session->state, session->log));
}

ServiceResponse DraftService::get_session(const std::string& id) const {
  const auto session = find_session(id);
  if (!session) return error(404, "unknown session " + id);
  std::scoped_lock lock(session->mutex);
  return reply(200, session_json(session->id, session->state, session->log));
}

ServiceResponse DraftService::post_pick(const std::string& id, const std::string& body) {
  const auto session = find_session(id);
  if (!session) return error(404, "unknown session " + id);
  const auto doc = parse_body(body);
  if (!doc) return error(422, "body must be a JSON object");
  if (!doc->contains("team")) return error(422, "missing team");
  if (!doc->contains("revision") || !(*doc)["revision"].is_number_unsigned()) {
    return error(422, "missing or invalid revision");
  }
  TeamId team;
  try {
    team = normalize_team_key((*doc)["team"]);
  } catch (const ValidationError& e) {
    return error(422, e.what());
  }
  const auto revision = (*doc)["revision"].get<std::uint64_t>();

  std::scoped_lock lock(session->mutex);
  if (revision != session->revision()) {
    return error(409, "stale revision " + std::to_string(revision), session->revision());
  }
  if (!session->state.contains(team)) return error(404, "unknown team " + team, session->revision());
  PickEvent event;
  try {
    event = session->state.pick(team);
  } catch (const IneligiblePickError& e) {
    return error(409, e.what(), session->revision());
  } catch (const DraftCompleteError& e) {
    return error(409, e.what(), session->revision());
  }
  session->log.push_back(event);
  if (options_.state_dir) append_pick_log(*options_.state_dir / (session->id + ".picks.jsonl"), event);
  return reply(200, {{"session_id", session->id},
                     {"revision", session->revision()},
                     {"event", to_json(event)},
                     {"state", to_json(session->state)}});
}

ServiceResponse DraftService::get_suggestions(const std::string& id,
                                              const std::map<std::string, std::string>& query) const {
  const auto session = find_session(id);
  if (!session) return error(404, "unknown session " + id);
  std::size_t k = 3;
  if (const auto it = query.find("k"); it != query.end()) {
    const auto& text = it->second;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
    if (ec != std::errc() || end != text.data() + text.size() || k == 0) return error(422, "k must be a positive integer");
  }

  std::scoped_lock lock(session->mutex);
  const auto rev = session->revision();
  if (session->state.complete()) return error(409, "the draft is complete", rev);

  const auto members = picker_members(session->state, profiles_);
  const auto suggestions = suggest_for_current_picker(session->state, profiles_, k);
  json current_members = json::array();
  for (const auto* m : members) current_members.push_back(m->team_id);
  const IndicatorVector current = alliance_effectiveness(members);

  json list = json::array();
  for (const auto& s : suggestions) {
    json item = suggestion_json(s);
    item["radar"] = radar_json(s.effectiveness);
    if (model_) item["win_probability_vs_average"] = predict(*model_, s.effectiveness, average_).probability;
    list.push_back(std::move(item));
  }
  const bool our_turn = session->mode.kind == DraftMode::Kind::OptimizeOne &&
                        session->state.current_picker() == session->mode.team;
  return reply(200, {{"session_id", session->id},
                     {"revision", rev},
                     {"picker", session->state.current_picker()},
                     {"seat", session->state.current_seat()},
                     {"our_turn", our_turn},
                     {"current", {{"members", current_members}, {"radar", radar_json(current)}}},
                     {"suggestions", std::move(list)}});
}

void DraftService::restore_sessions() {
  std::vector<fs::path> headers;
  for (const auto& entry : fs::directory_iterator(*options_.state_dir)) {
    const auto name = entry.path().filename().string();
    if (name.size() > 13 && name.ends_with(".session.json")) headers.push_back(entry.path());
  }
  std::sort(headers.begin(), headers.end());
  for (const auto& h : headers) {
    std::ifstream in(h);
    json header = json::parse(in, nullptr, false);
    if (header.is_discarded()) throw IoError("corrupt session header " + h.string());
    const auto id = header.at("session_id").get<std::string>();
    const auto ranking = header.at("ranking").get<std::vector<TeamId>>();
    const auto mode = DraftMode::parse(header.at("mode").get<std::string>());
    const auto log_path = *options_.state_dir / (id + ".picks.jsonl");
    std::vector<PickEvent> log;
    if (fs::exists(log_path)) log = read_pick_log(log_path);
    auto session = std::make_shared<Session>(id, replay_picks(ranking, log, mode));
    session->log = std::move(log);
    sessions_.emplace(id, session);
    if (id.size() > 1 && id[0] == 's') {
      std::uint64_t n = 0;
      std::from_chars(id.data() + 1, id.data() + id.size(), n);
      next_session_ = std::max(next_session_, n + 1);
    }
  }
}

}  // namespace frc
