#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qkdplan {

// Base class of every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text is not well-formed (e.g. a config file that is not valid JSON).
class ParseError : public Error {
 public:
  using Error::Error;
};

// A value violates a domain invariant. When the value came from a config
// document, path() locates it, e.g. "channels[0].occupancy_mhz".
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message) : Error(message) {}
  ValidationError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

// Exact-match capacity lookup found no table entry.
class UnknownCapacityError : public Error {
 public:
  using Error::Error;
};

// No channel mix meets the demanded throughput within the band's spectrum.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// A simulation would generate more rekey events than the configured cap,
// signaling an unreasonable horizon/rate combination.
class EventExplosionError : public Error {
 public:
  using Error::Error;
};

// The simulation horizon is too short to decide the threshold question.
class InconclusiveHorizonError : public Error {
 public:
  using Error::Error;
};

}  // namespace qkdplan
