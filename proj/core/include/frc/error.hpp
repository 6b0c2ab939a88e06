#pragma once

#include <stdexcept>
#include <string>

namespace frc {

// Root of every error raised by the library. Callers that only need to know
// "the input was bad" catch this; the CLI maps it to exit status 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// A match object that does not satisfy the fixture contract. field() names
// the offending key ("blue_teams", "red_total", "score_breakdown", ...).
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& detail);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Bad schema-config document. subject() is the indicator or field at fault.
class SchemaError : public Error {
 public:
  SchemaError(std::string subject, const std::string& detail);
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

class MissingFieldError : public Error {
 public:
  MissingFieldError(std::string field, std::string match_key);
  const std::string& field() const noexcept { return field_; }
  const std::string& match_key() const noexcept { return match_key_; }

 private:
  std::string field_;
  std::string match_key_;
};

class YearMismatchError : public Error {
 public:
  YearMismatchError(int expected, int actual, const std::string& where);
};

class DuplicateMemberError : public Error {
 public:
  explicit DuplicateMemberError(const std::string& team_id);
};

class MissingProfileError : public Error {
 public:
  explicit MissingProfileError(std::string team_id);
  const std::string& team_id() const noexcept { return team_id_; }

 private:
  std::string team_id_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// predictor
class ConfigError : public Error {
 public:
  using Error::Error;
};
class DivergenceError : public Error {
 public:
  using Error::Error;
};
class TooFewSamplesError : public Error {
 public:
  using Error::Error;
};
class ShapeError : public Error {
 public:
  using Error::Error;
};
class FormatVersionError : public Error {
 public:
  using Error::Error;
};

// optimizer
class EmptyPoolError : public Error {
 public:
  using Error::Error;
};

// draft
class TooFewTeamsError : public Error {
 public:
  using Error::Error;
};
class IneligiblePickError : public Error {
 public:
  using Error::Error;
};
class DraftCompleteError : public Error {
 public:
  using Error::Error;
};

}  // namespace frc
