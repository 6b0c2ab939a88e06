#include "frc/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "frc/error.hpp"

namespace frc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view side_name(Side s) noexcept { return s == Side::Red ? "red" : "blue"; }

std::string_view winner_name(Winner w) noexcept {
  switch (w) {
    case Winner::Red:
      return "red";
    case Winner::Blue:
      return "blue";
    case Winner::Tie:
      break;
  }
  return "";
}

bool TeamIdLess::operator()(std::string_view a, std::string_view b) const noexcept {
  auto digits = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (digits(a) && digits(b) && a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

Winner winner_from_totals(int red_total, int blue_total) noexcept {
  if (red_total > blue_total) return Winner::Red;
  if (blue_total > red_total) return Winner::Blue;
  return Winner::Tie;
}

TeamId normalize_team_key(const json& raw) {
  if (raw.is_number_integer() && raw.get<long long>() > 0) return std::to_string(raw.get<long long>());
  if (!raw.is_string()) throw ValidationError("team_key", "team key must be a string or positive integer");
  std::string key = raw.get<std::string>();
  if (key.rfind("frc", 0) == 0) key.erase(0, 3);
  if (key.empty()) throw ValidationError("team_key", "empty team key");
  return key;
}

namespace {

int year_of_event(const std::string& event_key) {
  if (event_key.size() < 5 ||
      !std::all_of(event_key.begin(), event_key.begin() + 4, [](unsigned char c) { return std::isdigit(c); })) {
    throw ValidationError("event_key", "must start with a four-digit season: '" + event_key + "'");
  }
  return std::stoi(event_key.substr(0, 4));
}

AllianceTeams parse_teams(const json& alliances, const std::string& side) {
  const std::string field = std::string(side) + "_teams";
  if (!alliances.contains(side) || !alliances[side].is_object()) {
    throw ValidationError(field, "alliance is missing");
  }
  const json& a = alliances[side];
  if (!a.contains("team_keys") || !a["team_keys"].is_array()) {
    throw ValidationError(field, "team_keys list is missing");
  }
  const json& keys = a["team_keys"];
  if (keys.size() != 3) {
    throw ValidationError(field, "expected 3 teams, found " + std::to_string(keys.size()));
  }
  AllianceTeams out;
  for (std::size_t i = 0; i < 3; ++i) {
    try {
      out[i] = normalize_team_key(keys[i]);
    } catch (const ValidationError& e) {
      throw ValidationError(field, e.what());
    }
  }
  if (out[0] == out[1] || out[0] == out[2] || out[1] == out[2]) {
    throw ValidationError(field, "team listed twice");
  }
  return out;
}

int parse_total(const json& alliances, const std::string& side) {
  const std::string field = std::string(side) + "_total";
  const json& a = alliances[side];
  if (!a.contains("score") || !a["score"].is_number()) throw ValidationError(field, "score is missing");
  const double score = a["score"].get<double>();
  if (!std::isfinite(score) || score < 0 || score != std::floor(score) || score > 1e9) {
    // TBA reports -1 for matches that were scheduled but never played.
    throw ValidationError(field, "score must be a non-negative integer");
  }
  return static_cast<int>(score);
}

Breakdown parse_breakdown(const json& breakdown, const std::string& side) {
  const std::string field = "score_breakdown." + std::string(side);
  if (!breakdown.contains(side) || !breakdown[side].is_object()) {
    throw ValidationError(field, "breakdown is missing");
  }
  Breakdown out;
  for (const auto& [name, value] : breakdown[side].items()) {
    if (value.is_boolean()) {
      out.emplace(name, value.template get<bool>() ? 1.0 : 0.0);
    } else if (value.is_number()) {
      out.emplace(name, value.template get<double>());
    }
  }
  return out;
}

}  // namespace

MatchRecord parse_match_record(const json& raw) {
  if (!raw.is_object()) throw ValidationError("match", "match must be a JSON object");

  MatchRecord m;
  if (!raw.contains("key") || !raw["key"].is_string() || raw["key"].get<std::string>().empty()) {
    throw ValidationError("match_key", "key is missing");
  }
  m.match_key = raw["key"].get<std::string>();

  if (raw.contains("event_key") && raw["event_key"].is_string()) {
    m.event_key = raw["event_key"].get<std::string>();
  } else {
    const auto cut = m.match_key.find('_');
    if (cut == std::string::npos) throw ValidationError("event_key", "event_key is missing");
    m.event_key = m.match_key.substr(0, cut);
  }
  m.year = year_of_event(m.event_key);

  if (!raw.contains("alliances") || !raw["alliances"].is_object()) {
    throw ValidationError("alliances", "alliances object is missing");
  }
  const json& alliances = raw["alliances"];
  m.red_teams = parse_teams(alliances, "red");
  m.blue_teams = parse_teams(alliances, "blue");
  for (const auto& r : m.red_teams) {
    if (std::find(m.blue_teams.begin(), m.blue_teams.end(), r) != m.blue_teams.end()) {
      throw ValidationError("blue_teams", "team " + r + " is on both alliances");
    }
  }
  m.red_total = parse_total(alliances, "red");
  m.blue_total = parse_total(alliances, "blue");

  if (!raw.contains("score_breakdown") || !raw["score_breakdown"].is_object()) {
    throw ValidationError("score_breakdown", "score breakdown is missing");
  }
  m.red_breakdown = parse_breakdown(raw["score_breakdown"], "red");
  m.blue_breakdown = parse_breakdown(raw["score_breakdown"], "blue");
  m.winner = winner_from_totals(m.red_total, m.blue_total);
  return m;
}

MatchRecord parse_match_record(std::string_view text) {
  json raw = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (raw.is_discarded()) throw ValidationError("json", "not valid JSON");
  return parse_match_record(raw);
}

json to_fixture_json(const MatchRecord& m) {
  auto keys = [](const AllianceTeams& t) {
    json out = json::array();
    for (const auto& id : t) out.push_back("frc" + id);
    return out;
  };
  auto breakdown = [](const Breakdown& b) {
    json out = json::object();
    for (const auto& [k, v] : b) out[k] = v;
    return out;
  };
  return json{
      {"key", m.match_key},
      {"event_key", m.event_key},
      {"alliances",
       {{"red", {{"team_keys", keys(m.red_teams)}, {"score", m.red_total}}},
        {"blue", {{"team_keys", keys(m.blue_teams)}, {"score", m.blue_total}}}}},
      {"score_breakdown", {{"red", breakdown(m.red_breakdown)}, {"blue", breakdown(m.blue_breakdown)}}},
      {"winning_alliance", winner_name(m.winner)},
  };
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string key_hint(const json& raw, const std::string& fallback) {
  if (raw.is_object() && raw.contains("key") && raw["key"].is_string()) return raw["key"].get<std::string>();
  return fallback;
}

class EventBuilder {
 public:
  explicit EventBuilder(EventDataset& ds) : ds_(ds) {}

  void add(const json& raw, const std::string& fallback_key) {
    try {
      MatchRecord m = parse_match_record(raw);
      if (!ds_.event_key.empty() && m.event_key != ds_.event_key) {
        skip(m.match_key, "event_key " + m.event_key + " does not match " + ds_.event_key);
        return;
      }
      if (!keys_.insert(m.match_key).second) {
        skip(m.match_key, "duplicate match key");
        return;
      }
      if (ds_.event_key.empty()) {
        ds_.event_key = m.event_key;
        ds_.year = m.year;
      }
      ds_.matches.push_back(std::move(m));
    } catch (const ValidationError& e) {
      skip(key_hint(raw, fallback_key), e.what());
    }
  }

  void add_document(const std::string& text, const std::string& origin) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
      skip(origin, "not valid JSON");
      return;
    }
    if (doc.is_array()) {
      for (std::size_t i = 0; i < doc.size(); ++i) add(doc[i], origin + "#" + std::to_string(i));
    } else {
      add(doc, origin);
    }
  }

  void skip(std::string key, std::string reason) { ds_.skipped.push_back({std::move(key), std::move(reason)}); }

 private:
  EventDataset& ds_;
  std::set<std::string> keys_;
};

}  // namespace

EventDataset load_event(const fs::path& path) {
  std::error_code ec;
  const auto status = fs::status(path, ec);
  if (ec || !fs::exists(status)) throw IoError("cannot read " + path.string());

  EventDataset ds;
  EventBuilder builder(ds);
  if (fs::is_directory(status)) {
    std::vector<fs::path> files;
    fs::directory_iterator it(path, ec);
    if (ec) throw IoError("cannot list " + path.string() + ": " + ec.message());
    for (const auto& entry : it) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) builder.add_document(read_file(f), f.filename().string());
  } else {
    builder.add_document(read_file(path), path.filename().string());
  }

  if (ds.event_key.empty()) {
    // Nothing parsed; name the event after the path so callers can report it.
    ds.event_key = path.stem().string();
    try {
      ds.year = year_of_event(ds.event_key);
    } catch (const ValidationError&) {
      ds.year = 0;
    }
  }
  return ds;
}

std::vector<EventDataset> load_events(const std::vector<fs::path>& paths) {
  std::vector<std::future<EventDataset>> pending;
  pending.reserve(paths.size());
  for (const auto& p : paths) pending.push_back(std::async(std::launch::async, [p] { return load_event(p); }));
  std::vector<EventDataset> out;
  out.reserve(paths.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

IntegrityReport dataset_integrity_report(const EventDataset& ds) {
  IntegrityReport r;
  r.matches = ds.matches.size();
  r.skipped = ds.skipped.size();
  std::set<std::string_view> teams;
  for (const auto& m : ds.matches) {
    if (m.winner == Winner::Tie) ++r.ties;
    for (const auto& t : m.red_teams) teams.insert(t);
    for (const auto& t : m.blue_teams) teams.insert(t);
  }
  r.teams = teams.size();
  return r;
}

void to_json(json& j, const IntegrityReport& r) {
  j = json{{"matches", r.matches}, {"teams", r.teams}, {"ties", r.ties}, {"skipped", r.skipped}};
}

}  // namespace frc
