#pragma once

#include <stdexcept>
#include <string>

namespace asg {

/// Bad caller input: dimension mismatch, empty sample grid, malformed config.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition does not hold (e.g. a point outside its set).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested scenario lies outside what the implementation supports.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state encountered while simulating.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, long last_good_record)
      : std::runtime_error(what), last_good_record_(last_good_record) {}

  long last_good_record() const { return last_good_record_; }

 private:
  long last_good_record_;
};

}  // namespace asg
