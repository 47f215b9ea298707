#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tntomo {

using cplx = std::complex<double>;

inline constexpr double kDefaultTol = 1e-10;

/// Thrown on precondition violations (bad shapes, labels, windows, configs).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numeric routine fails at runtime (non-finite loss, zero norm).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InvalidArgument(msg);
}

}  // namespace tntomo
