#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace inls {

/// Violation of an analytic hypothesis (parameter ranges, admissibility, ...).
/// Carries one entry per failed inequality so callers can report all of them.
class HypothesisError : public std::runtime_error {
public:
  explicit HypothesisError(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "hypothesis violation:";
    for (const auto& e : v) s += "\n  " + e;
    return s;
  }
  std::vector<std::string> violations_;
};

/// Numerical failure at run time: non-contraction, detected blow-up, ...
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace inls
