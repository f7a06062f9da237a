#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ranpower {

enum class ErrorKind {
  Domain,
  RatingExceeded,
  MissingParameter,
  InconsistentModel,
  ConstraintViolation,
  Underdetermined,
  NonPhysical,
  AmbiguousAttribution,
  IncompleteRecord,
  Parse,
  Schema,
  Duplicate,
  EmptyDataset,
  Infeasible,
  Io,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UnderdeterminedError : public Error {
 public:
  UnderdeterminedError(const std::string& what, std::vector<std::string> parameters)
      : Error(ErrorKind::Underdetermined, what), parameters_(std::move(parameters)) {}

  // Parameters that cannot be separated by the supplied observations.
  const std::vector<std::string>& parameters() const noexcept { return parameters_; }

 private:
  std::vector<std::string> parameters_;
};

class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double max_achievable_mbps)
      : Error(ErrorKind::Infeasible, what), max_achievable_(max_achievable_mbps) {}

  double max_achievable() const noexcept { return max_achievable_; }

 private:
  double max_achievable_;
};

}  // namespace ranpower
