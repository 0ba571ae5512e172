#pragma once

#include <stdexcept>

namespace jumpsde {

/// Implicit solver exhausted its iteration budget without reaching tolerance.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every simulated path overflowed before some requested step, so the moment
/// estimate at that step has no surviving samples.
class AllPathsOverflowed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fewer than three usable points remain in the requested fit window.
class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jumpsde
