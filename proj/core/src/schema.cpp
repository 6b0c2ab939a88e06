#include "frc/schema.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "frc/error.hpp"

namespace frc {

using nlohmann::json;

std::vector<std::string> YearSchema::referenced_fields() const {
  std::set<std::string> names;
  for (const auto& list : terms) {
    for (const auto& t : list) names.insert(t.field);
  }
  names.insert(foul_field);
  return {names.begin(), names.end()};
}

namespace {

std::vector<SchemaTerm> parse_terms(const json& list, std::string_view indicator) {
  const std::string name(indicator);
  if (!list.is_array() || list.empty()) throw SchemaError(name, "expected a non-empty list of {field, weight}");
  std::vector<SchemaTerm> out;
  std::set<std::string> seen;
  for (const auto& item : list) {
    if (!item.is_object() || !item.contains("field") || !item["field"].is_string()) {
      throw SchemaError(name, "term without a field name");
    }
    SchemaTerm t;
    t.field = item["field"].get<std::string>();
    if (t.field.empty()) throw SchemaError(name, "empty field name");
    if (item.contains("weight")) {
      if (!item["weight"].is_number()) throw SchemaError(name, "weight for " + t.field + " is not a number");
      t.weight = item["weight"].get<double>();
    }
    if (!std::isfinite(t.weight)) throw SchemaError(name, "weight for " + t.field + " is not finite");
    if (t.weight < 0) throw SchemaError(name, "weight for " + t.field + " is negative");
    if (!seen.insert(t.field).second) throw SchemaError(name, "field " + t.field + " listed twice");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

YearSchema parse_year_schema(const json& doc) {
  if (!doc.is_object()) throw SchemaError("document", "schema must be a JSON object");
  YearSchema s;
  if (!doc.contains("year") || !doc["year"].is_number_integer()) throw SchemaError("year", "missing integer year");
  s.year = doc["year"].get<int>();

  if (!doc.contains("indicators") || !doc["indicators"].is_object()) {
    throw SchemaError("indicators", "missing indicators object");
  }
  std::array<bool, kPositiveIndicatorCount> present{};
  for (const auto& [name, list] : doc["indicators"].items()) {
    const auto ind = parse_indicator(name);
    if (!ind) throw SchemaError(name, "unknown indicator");
    if (is_penalty_axis(*ind)) {
      throw SchemaError(name, "Fouls and Defense are derived; configure foul_field instead");
    }
    const auto k = static_cast<std::size_t>(*ind);
    s.terms[k] = parse_terms(list, name);
    present[k] = true;
  }
  for (std::size_t k = 0; k < kPositiveIndicatorCount; ++k) {
    if (!present[k]) {
      const auto name = std::string(indicator_name(static_cast<Indicator>(k)));
      throw SchemaError(name, "no mapping for this indicator");
    }
  }

  if (!doc.contains("foul_field") || !doc["foul_field"].is_string() ||
      doc["foul_field"].get<std::string>().empty()) {
    throw SchemaError("foul_field", "missing foul points field");
  }
  s.foul_field = doc["foul_field"].get<std::string>();
  return s;
}

YearSchema parse_year_schema(std::string_view text) {
  // Duplicate keys inside "indicators" would silently overwrite each other in
  // the parsed object, so they are caught while parsing.
  std::set<std::string> indicator_keys;
  std::string duplicate;
  bool in_indicators = false;
  bool pending_indicators = false;
  json::parser_callback_t cb = [&](int depth, json::parse_event_t event, json& parsed) {
    if (event == json::parse_event_t::key) {
      const auto& key = parsed.get_ref<const std::string&>();
      if (depth == 1) {
        pending_indicators = key == "indicators";
      } else if (depth == 2 && in_indicators) {
        if (!indicator_keys.insert(key).second && duplicate.empty()) duplicate = key;
      }
    } else if (event == json::parse_event_t::object_start) {
      if (depth == 1 && pending_indicators) in_indicators = true;
      pending_indicators = false;
    } else if (event == json::parse_event_t::object_end) {
      if (depth == 1 && in_indicators) in_indicators = false;
    } else if (event == json::parse_event_t::value && depth == 1) {
      pending_indicators = false;
    }
    return true;
  };
  json doc = json::parse(text, cb, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw SchemaError("document", "not valid JSON");
  if (!duplicate.empty()) throw SchemaError(duplicate, "indicator mapped more than once");
  return parse_year_schema(doc);
}

YearSchema load_year_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read schema " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_year_schema(std::string_view(ss.str()));
}

json to_json(const YearSchema& s) {
  json indicators = json::object();
  for (std::size_t k = 0; k < kPositiveIndicatorCount; ++k) {
    json list = json::array();
    for (const auto& t : s.terms[k]) list.push_back({{"field", t.field}, {"weight", t.weight}});
    indicators[std::string(indicator_name(static_cast<Indicator>(k)))] = std::move(list);
  }
  return json{{"year", s.year}, {"indicators", std::move(indicators)}, {"foul_field", s.foul_field}};
}

void check_schema_fields(const YearSchema& s, const MatchRecord& m) {
  if (m.year != s.year) throw YearMismatchError(s.year, m.year, "match " + m.match_key);
  for (const auto& field : s.referenced_fields()) {
    for (Side side : {Side::Red, Side::Blue}) {
      if (!m.breakdown(side).contains(field)) {
        throw SchemaError(field, "absent from " + std::string(side_name(side)) + " breakdown of " + m.match_key);
      }
    }
  }
}

void check_schema_fields(const YearSchema& s, const EventDataset& ds) {
  for (const auto& m : ds.matches) check_schema_fields(s, m);
}

IndicatorVector score_alliance(const MatchRecord& m, Side side, const YearSchema& s) {
  if (m.year != s.year) throw YearMismatchError(s.year, m.year, "match " + m.match_key);
  const Breakdown& own = m.breakdown(side);
  const Breakdown& other = m.breakdown(opponent(side));
  auto lookup = [&](const Breakdown& b, const std::string& field) {
    const auto it = b.find(field);
    if (it == b.end()) throw MissingFieldError(field, m.match_key);
    return it->second;
  };

  IndicatorVector v;
  for (std::size_t k = 0; k < kPositiveIndicatorCount; ++k) {
    double sum = 0.0;
    for (const auto& t : s.terms[k]) sum += t.weight * lookup(own, t.field);
    v[k] = sum;
  }
  // The opponent's foul points are the points this side gave away.
  v[Indicator::Fouls] = 0.0 - lookup(other, s.foul_field);
  v[Indicator::Defense] = 0.0 - static_cast<double>(m.total(opponent(side)));
  return v;
}

}  // namespace frc
