#pragma once

#include <stdexcept>
#include <string>

namespace ecaopt {

// Malformed input text (JSON syntax, bad numbers in files).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that violates the data model (dangling
// endpoints, probabilities out of range, duplicate ids, ...).
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds what this build can do (oracle size cap, forcing an
// unsupported kernel ISA).
struct CapabilityError : std::runtime_error {
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ecaopt
