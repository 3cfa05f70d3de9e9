#pragma once

#include <stdexcept>
#include <string>

namespace qkernel {

// Malformed or out-of-contract input (non-finite entries, dimension mismatch,
// parameters outside their domain).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A linear system or inverse was requested for a (numerically) singular
// matrix. Callers usually recover by calibrating the kernel or raising ridge.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix expected to be positive semidefinite has a significant negative
// eigenvalue.
class NotPsdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kernel carries the wrong provenance for the requested stage.
class ProvenanceError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qkernel
