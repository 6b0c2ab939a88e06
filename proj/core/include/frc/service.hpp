#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frc/draft.hpp"
#include "frc/model.hpp"
#include "frc/stats.hpp"

namespace frc {

struct ServiceRequest {
  std::string method;  // "GET", "POST"
  std::string path;    // without the query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct ServiceResponse {
  int status = 200;
  nlohmann::json body;
};

// Draft-assistant API over immutable profiles, an optional model and the
// event ranking. Only draft sessions are mutable; each session's writes are
// serialized and versioned by a revision that equals its pick count.
//
//   GET  /rankings                      GET  /profiles/{team}
//   GET  /average-alliance              POST /predict
//   POST /sessions                      GET  /sessions/{id}
//   POST /sessions/{id}/picks           GET  /sessions/{id}/suggestions?k=3
class DraftService {
 public:
  struct Options {
    // When set, every session is mirrored to <dir>/<id>.session.json plus an
    // append-only <id>.picks.jsonl, and sessions found there are restored by
    // replay at construction.
    std::optional<std::filesystem::path> state_dir;
  };

  DraftService(ProfileSet profiles, std::optional<TrainedModel> model, std::vector<TeamId> ranking);
  DraftService(ProfileSet profiles, std::optional<TrainedModel> model, std::vector<TeamId> ranking,
               Options options);
  ~DraftService();

  DraftService(const DraftService&) = delete;
  DraftService& operator=(const DraftService&) = delete;

  // Safe to call from many threads.
  ServiceResponse handle(const ServiceRequest& request);

  std::size_t session_count() const;

 private:
  struct Session;

  ServiceResponse get_rankings() const;
  ServiceResponse get_profile(const std::string& team) const;
  ServiceResponse get_average_alliance() const;
  ServiceResponse post_predict(const std::string& body) const;
  ServiceResponse post_session(const std::string& body);
  ServiceResponse get_session(const std::string& id) const;
  ServiceResponse post_pick(const std::string& id, const std::string& body);
  ServiceResponse get_suggestions(const std::string& id, const std::map<std::string, std::string>& query) const;

  std::shared_ptr<Session> find_session(const std::string& id) const;
  void restore_sessions();

  ProfileSet profiles_;
  std::optional<TrainedModel> model_;
  std::vector<TeamId> ranking_;
  Options options_;
  IndicatorVector average_;

  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t next_session_ = 1;
};

// Splits "a/b?x=1&y=2" into a request; percent-decoding is not needed for
// the ids this API uses.
ServiceRequest make_request(std::string method, const std::string& target, std::string body = {});

}  // namespace frc
