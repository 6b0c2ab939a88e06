#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace frc {

// The seven generalized performance axes. The enumerator order is the axis
// order used everywhere a vector is consumed: model features, radar area and
// any plot data handed to a front end.
enum class Indicator : std::size_t {
  TraditionalLow = 0,
  TraditionalHigh,
  Technical,
  Autonomous,
  Endgame,
  Fouls,
  Defense,
};

inline constexpr std::size_t kIndicatorCount = 7;
inline constexpr std::size_t kPositiveIndicatorCount = 5;

inline constexpr std::array<Indicator, kIndicatorCount> kAllIndicators = {
    Indicator::TraditionalLow, Indicator::TraditionalHigh, Indicator::Technical,
    Indicator::Autonomous,     Indicator::Endgame,         Indicator::Fouls,
    Indicator::Defense,
};

std::string_view indicator_name(Indicator i) noexcept;
std::optional<Indicator> parse_indicator(std::string_view name) noexcept;

// Fouls and Defense carry non-positive raw values.
constexpr bool is_penalty_axis(Indicator i) noexcept {
  return i == Indicator::Fouls || i == Indicator::Defense;
}

struct IndicatorVector {
  std::array<double, kIndicatorCount> values{};

  constexpr double& operator[](Indicator i) noexcept { return values[static_cast<std::size_t>(i)]; }
  constexpr double operator[](Indicator i) const noexcept {
    return values[static_cast<std::size_t>(i)];
  }
  constexpr double& operator[](std::size_t i) noexcept { return values[i]; }
  constexpr double operator[](std::size_t i) const noexcept { return values[i]; }

  static constexpr IndicatorVector filled(double v) noexcept {
    IndicatorVector out;
    out.values.fill(v);
    return out;
  }

  // True when every component lies in [0, 1] (and is finite).
  bool is_normalized() const noexcept;

  friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;
};

void to_json(nlohmann::json& j, const IndicatorVector& v);
void from_json(const nlohmann::json& j, IndicatorVector& v);

}  // namespace frc
