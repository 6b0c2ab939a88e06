#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "frc/indicators.hpp"
#include "frc/ingest.hpp"

namespace frc {

struct SchemaTerm {
  std::string field;
  double weight = 1.0;

  friend bool operator==(const SchemaTerm&, const SchemaTerm&) = default;
};

// How one season's score breakdown maps onto the seven axes. The five
// positive axes are weighted sums of breakdown fields; Fouls reads a single
// foul-points field from the opponent's breakdown; Defense is the negated
// opponent total and needs no configuration.
struct YearSchema {
  int year = 0;
  std::array<std::vector<SchemaTerm>, kPositiveIndicatorCount> terms;
  std::string foul_field;

  const std::vector<SchemaTerm>& terms_for(Indicator i) const { return terms.at(static_cast<std::size_t>(i)); }

  // Every breakdown field the schema reads, sorted and de-duplicated.
  std::vector<std::string> referenced_fields() const;

  friend bool operator==(const YearSchema&, const YearSchema&) = default;
};

YearSchema parse_year_schema(std::string_view text);
YearSchema parse_year_schema(const nlohmann::json& doc);
YearSchema load_year_schema(const std::filesystem::path& path);
nlohmann::json to_json(const YearSchema& s);

// Confirms that both breakdowns of `m` carry every referenced field.
// Throws SchemaError naming the first missing field.
void check_schema_fields(const YearSchema& s, const MatchRecord& m);
void check_schema_fields(const YearSchema& s, const EventDataset& ds);

// Raw indicator vector for one side of a match: weighted breakdown sums on
// the five positive axes, Fouls = -(foul points the opponent was awarded),
// Defense = -(opponent total).
IndicatorVector score_alliance(const MatchRecord& m, Side side, const YearSchema& s);

}  // namespace frc
