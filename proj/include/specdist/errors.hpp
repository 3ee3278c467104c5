#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace specdist {

// Input outside an operation's domain (bad ratio, v <= 0, shape mismatch...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what,
                        double achieved = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), achieved_(achieved) {}

  // Best error estimate reached before giving up (NaN if not applicable).
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace specdist
