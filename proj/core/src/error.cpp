#include "frc/error.hpp"

namespace frc {

ValidationError::ValidationError(std::string field, const std::string& detail)
    : Error("invalid match: " + field + ": " + detail), field_(std::move(field)) {}

SchemaError::SchemaError(std::string subject, const std::string& detail)
    : Error("schema error: " + subject + ": " + detail), subject_(std::move(subject)) {}

MissingFieldError::MissingFieldError(std::string field, std::string match_key)
    : Error("match " + match_key + " has no breakdown field '" + field + "'"),
      field_(std::move(field)),
      match_key_(std::move(match_key)) {}

YearMismatchError::YearMismatchError(int expected, int actual, const std::string& where)
    : Error("year mismatch in " + where + ": expected " + std::to_string(expected) + ", got " +
            std::to_string(actual)) {}

DuplicateMemberError::DuplicateMemberError(const std::string& team_id)
    : Error("team " + team_id + " appears more than once in the alliance") {}

MissingProfileError::MissingProfileError(std::string team_id)
    : Error("no profile for team " + team_id), team_id_(std::move(team_id)) {}

}  // namespace frc
