#include "frc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "frc/error.hpp"
#include "frc/random.hpp"

namespace frc::synthetic {

ProfileSet random_profiles(const std::vector<TeamId>& teams, std::uint64_t seed, int year) {
  Rng rng(seed);
  RawProfileTable raw;
  raw.year = year;
  for (const auto& t : teams) {
    RawAggregate agg;
    agg.match_count = 10;
    for (Indicator ind : kAllIndicators) {
      const double u = rng.uniform();
      agg.raw_means[ind] = is_penalty_axis(ind) ? u - 1.0 : u;
    }
    raw.teams.emplace(t, agg);
  }
  return normalize_profiles(raw);
}

ProfileSet random_profiles(std::size_t n_teams, std::uint64_t seed, int year) {
  std::vector<TeamId> teams;
  for (std::size_t i = 1; i <= n_teams; ++i) teams.push_back(std::to_string(i));
  return random_profiles(teams, seed, year);
}

std::vector<PredictionSample> oracle_match_samples(const MatchSampleOptions& o) {
  if (o.robots < 6) throw DomainError("need at least 6 robots to form two alliances");
  Rng rng(o.seed);
  std::vector<IndicatorVector> robots(o.robots);
  for (auto& r : robots) {
    for (auto& v : r.values) v = rng.uniform();
  }

  std::vector<PredictionSample> out;
  out.reserve(o.matches);
  std::vector<std::size_t> ids(o.robots);
  std::iota(ids.begin(), ids.end(), 0);
  auto mean_of = [&](std::size_t a, std::size_t b, std::size_t c) {
    IndicatorVector v;
    for (std::size_t k = 0; k < kIndicatorCount; ++k) v[k] = (robots[a][k] + robots[b][k] + robots[c][k]) / 3.0;
    return v;
  };
  auto sum_of = [](const IndicatorVector& v) { return std::accumulate(v.values.begin(), v.values.end(), 0.0); };

  while (out.size() < o.matches) {
    // Partial Fisher-Yates: six distinct robots.
    for (std::size_t i = 0; i < 6; ++i) std::swap(ids[i], ids[i + rng.below(o.robots - i)]);
    IndicatorVector red = mean_of(ids[0], ids[1], ids[2]);
    IndicatorVector blue = mean_of(ids[3], ids[4], ids[5]);
    const double diff = sum_of(red) - sum_of(blue);
    if (diff == 0.0) continue;
    const int wanted = static_cast<int>(out.size() % 2);
    if ((diff > 0.0 ? 1 : 0) != wanted) std::swap(red, blue);
    out.push_back(make_sample(red, blue, wanted));
  }

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < out.size(); ++i) by_class[out[i].label].push_back(i);
  for (auto& cls : by_class) {
    rng.shuffle(std::span<std::size_t>(cls));
    const auto flips = static_cast<std::size_t>(std::llround(o.label_noise * static_cast<double>(cls.size())));
    for (std::size_t i = 0; i < flips; ++i) out[cls[i]].label ^= 1;
  }
  return out;
}

SyntheticEvent generate_event(const YearSchema& schema, const EventOptions& o) {
  if (o.teams < 6) throw DomainError("a synthetic event needs at least 6 teams");
  Rng rng(o.seed);

  std::vector<TeamId> teams;
  std::vector<IndicatorVector> skill;
  for (std::size_t i = 0; i < o.teams; ++i) {
    teams.push_back(std::to_string(100 + 37 * i + rng.below(30)));
    IndicatorVector s;
    for (std::size_t k = 0; k < kPositiveIndicatorCount; ++k) s[k] = rng.uniform(0.0, 12.0);
    s[Indicator::Fouls] = rng.uniform(0.0, 1.5);  // expected foul points handed to the opponent
    skill.push_back(s);
  }

  const std::size_t n_matches = (o.teams * o.matches_per_team + 5) / 6;
  SyntheticEvent ev;
  ev.dataset.event_key = o.event_key;
  ev.dataset.year = schema.year;

  auto alliance_breakdown = [&](const std::array<std::size_t, 3>& members, double& points) {
    Breakdown b;
    points = 0.0;
    for (std::size_t k = 0; k < kPositiveIndicatorCount; ++k) {
      double value = 0.0;
      for (auto m : members) value += skill[m][k];
      value = std::max(0.0, value + rng.uniform(-4.0, 4.0));
      const auto& terms = schema.terms[k];
      for (const auto& t : terms) {
        const double share = value / static_cast<double>(terms.size());
        const double field = t.weight > 0 ? std::round(share / t.weight) : 0.0;
        b[t.field] += field;
        points += field * t.weight;
      }
    }
    return b;
  };

  std::vector<int> played(o.teams, 0);
  std::vector<std::size_t> order(o.teams);
  std::vector<std::uint64_t> jitter(o.teams);
  for (std::size_t m = 0; m < n_matches; ++m) {
    // The six least-played teams, ties broken at random, alternate sides.
    std::iota(order.begin(), order.end(), 0);
    for (auto& j : jitter) j = rng.next();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (played[a] != played[b]) return played[a] < played[b];
      return jitter[a] < jitter[b];
    });
    for (std::size_t i = 0; i < 6; ++i) ++played[order[i]];
    std::array<std::size_t, 3> red{order[0], order[2], order[4]};
    std::array<std::size_t, 3> blue{order[1], order[3], order[5]};

    MatchRecord rec;
    rec.event_key = o.event_key;
    rec.year = schema.year;
    rec.match_key = o.event_key + "_qm" + std::to_string(m + 1);
    for (std::size_t i = 0; i < 3; ++i) {
      rec.red_teams[i] = teams[red[i]];
      rec.blue_teams[i] = teams[blue[i]];
    }
    double red_points = 0.0, blue_points = 0.0;
    rec.red_breakdown = alliance_breakdown(red, red_points);
    rec.blue_breakdown = alliance_breakdown(blue, blue_points);

    // Fouls committed by one side are credited to the other side's breakdown.
    auto fouls_by = [&](const std::array<std::size_t, 3>& members) {
      double f = 0.0;
      for (auto mm : members) f += skill[mm][Indicator::Fouls] * rng.uniform(0.0, 2.0);
      return std::round(f);
    };
    const double red_foul_points = fouls_by(blue);
    const double blue_foul_points = fouls_by(red);
    rec.red_breakdown[schema.foul_field] += red_foul_points;
    rec.blue_breakdown[schema.foul_field] += blue_foul_points;
    rec.red_total = static_cast<int>(std::lround(red_points + red_foul_points));
    rec.blue_total = static_cast<int>(std::lround(blue_points + blue_foul_points));
    rec.winner = winner_from_totals(rec.red_total, rec.blue_total);
    ev.dataset.matches.push_back(std::move(rec));
  }

  // Qualification order: wins, then average score.
  struct Record {
    int wins = 0;
    double points = 0.0;
    int played = 0;
  };
  std::map<TeamId, Record> table;
  for (const auto& t : teams) table[t];
  for (const auto& m : ev.dataset.matches) {
    for (Side side : {Side::Red, Side::Blue}) {
      for (const auto& t : m.teams(side)) {
        auto& r = table[t];
        ++r.played;
        r.points += m.total(side);
        if ((side == Side::Red && m.winner == Winner::Red) || (side == Side::Blue && m.winner == Winner::Blue)) {
          ++r.wins;
        }
      }
    }
  }
  ev.ranking = teams;
  std::stable_sort(ev.ranking.begin(), ev.ranking.end(), [&](const TeamId& a, const TeamId& b) {
    const auto& ra = table[a];
    const auto& rb = table[b];
    if (ra.wins != rb.wins) return ra.wins > rb.wins;
    const double pa = ra.played ? ra.points / ra.played : 0.0;
    const double pb = rb.played ? rb.points / rb.played : 0.0;
    if (pa != pb) return pa > pb;
    return TeamIdLess{}(a, b);
  });
  return ev;
}

}  // namespace frc::synthetic
