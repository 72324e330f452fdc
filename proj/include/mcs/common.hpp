// Shared aliases and error types for the crowdsensing solver library.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace mcs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Dimension mismatch carrying the offending vector's name and sizes.
class DimensionError : public Error {
 public:
  DimensionError(const std::string& name, long expected, long got)
      : Error("dimension mismatch: '" + name + "' has size " + std::to_string(got) +
              ", expected " + std::to_string(expected)),
        name_(name),
        expected_(expected),
        got_(got) {}
  const std::string& name() const { return name_; }
  long expected() const { return expected_; }
  long got() const { return got_; }

 private:
  std::string name_;
  long expected_;
  long got_;
};

class NumericsError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void check_dim(const char* name, long expected, long got) {
  if (expected != got) throw DimensionError(name, expected, got);
}

// Compensated (Neumaier) summation; used where 1e-9 absolute agreement between
// independently derived sums is asserted.
class KahanSum {
 public:
  void add(double v) {
    double t = s_ + v;
    if (std::abs(s_) >= std::abs(v))
      c_ += (s_ - t) + v;
    else
      c_ += (v - t) + s_;
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace mcs
