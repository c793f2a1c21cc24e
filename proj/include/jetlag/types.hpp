#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetlag {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a state lies outside the region where a field (or a derived
/// geometric object) is defined. `slot` is the offending component index.
class DomainError : public std::domain_error {
 public:
  DomainError(std::size_t slot, std::string slot_name, const std::string& what)
      : std::domain_error(what), slot_(slot), slot_name_(std::move(slot_name)) {}

  std::size_t slot() const noexcept { return slot_; }
  const std::string& slot_name() const noexcept { return slot_name_; }

 private:
  std::size_t slot_;
  std::string slot_name_;
};

/// Verdict of an admissibility check. When `ok` is false, `slot` and `reason`
/// identify the first offending component.
struct Admissibility {
  bool ok = true;
  std::size_t slot = 0;
  std::string slot_name;
  std::string reason;

  static Admissibility accept() { return {}; }
  static Admissibility reject(std::size_t slot, std::string name, std::string why) {
    return {false, slot, std::move(name), std::move(why)};
  }
  explicit operator bool() const noexcept { return ok; }

  [[noreturn]] void raise() const { throw DomainError(slot, slot_name, reason); }
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace jetlag
