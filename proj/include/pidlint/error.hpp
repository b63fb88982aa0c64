#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pidlint {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TaxonomyError : public Error {
 public:
  using Error::Error;
};

// Violation of graph referential integrity or id uniqueness.
class GraphError : public Error {
 public:
  using Error::Error;
};

// Malformed document. `location` is a JSON path such as `$.edges[3].source`.
class ParseError : public Error {
 public:
  ParseError(std::string location, const std::string& reason)
      : Error(location.empty() ? reason : location + ": " + reason),
        location_(std::move(location)),
        reason_(reason) {}

  const std::string& location() const noexcept { return location_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string location_;
  std::string reason_;
};

class RuleError : public Error {
 public:
  using Error::Error;
};

// A match refers to elements that were removed or changed since it was found.
class StaleMatchError : public Error {
 public:
  using Error::Error;
};

// A rule kept firing past EngineConfig::max_applications_per_rule.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(std::string rule_id, int iterations)
      : Error("rule " + rule_id + " did not converge after " + std::to_string(iterations) +
              " applications"),
        rule_id_(std::move(rule_id)) {}

  const std::string& rule_id() const noexcept { return rule_id_; }

 private:
  std::string rule_id_;
};

}  // namespace pidlint
