#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "frc/ingest.hpp"
#include "frc/model.hpp"
#include "frc/schema.hpp"
#include "frc/stats.hpp"

namespace frc::synthetic {

// Teams "1".."n" with uniformly random normalized vectors. Raw means are
// set equal to the normalized values on positive axes and to value - 1 on
// penalty axes so the set is self-consistent.
ProfileSet random_profiles(std::size_t n_teams, std::uint64_t seed, int year = 2019);
ProfileSet random_profiles(const std::vector<TeamId>& teams, std::uint64_t seed, int year = 2019);

struct MatchSampleOptions {
  std::size_t matches = 10000;
  std::size_t robots = 300;
  double label_noise = 0.10;
  std::uint64_t seed = 0;
};

// Alliances of three distinct random robots. The clean label is "red's
// effectiveness sum exceeds blue's"; alliances are swapped so exactly half
// the matches are red wins, then exactly label_noise of each class is
// flipped.
std::vector<PredictionSample> oracle_match_samples(const MatchSampleOptions& options);

struct EventOptions {
  std::string event_key = "2019synth";
  std::size_t teams = 24;
  std::size_t matches_per_team = 10;
  std::uint64_t seed = 0;
};

struct SyntheticEvent {
  EventDataset dataset;
  std::vector<TeamId> ranking;  // by qualification record
};

// Qualification schedule whose score breakdowns carry every field the schema
// references. Each team has a latent skill per axis; an alliance scores the
// sum of its members' skills plus noise, split across the indicator's terms.
SyntheticEvent generate_event(const YearSchema& schema, const EventOptions& options);

}  // namespace frc::synthetic
