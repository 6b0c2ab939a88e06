#include "frc/indicators.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "frc/error.hpp"

namespace frc {

namespace {
constexpr std::array<std::string_view, kIndicatorCount> kNames = {
    "TraditionalLow", "TraditionalHigh", "Technical", "Autonomous",
    "Endgame",        "Fouls",           "Defense",
};
}  // namespace

std::string_view indicator_name(Indicator i) noexcept {
  return kNames[static_cast<std::size_t>(i)];
}

std::optional<Indicator> parse_indicator(std::string_view name) noexcept {
  for (std::size_t k = 0; k < kIndicatorCount; ++k) {
    if (kNames[k] == name) return static_cast<Indicator>(k);
  }
  return std::nullopt;
}

bool IndicatorVector::is_normalized() const noexcept {
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
  }
  return true;
}

void to_json(nlohmann::json& j, const IndicatorVector& v) {
  j = nlohmann::json::array();
  for (double x : v.values) j.push_back(x);
}

void from_json(const nlohmann::json& j, IndicatorVector& v) {
  if (!j.is_array() || j.size() != kIndicatorCount) {
    throw ShapeError("indicator vector must be an array of 7 numbers");
  }
  for (std::size_t k = 0; k < kIndicatorCount; ++k) {
    if (!j[k].is_number()) throw ShapeError("indicator vector component is not a number");
    v.values[k] = j[k].get<double>();
  }
}

}  // namespace frc
