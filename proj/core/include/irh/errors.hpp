#pragma once

#include <stdexcept>
#include <string>

namespace irh {

// Quadrature failed to converge; carries the last two estimates in the message.
class quadrature_error : public std::runtime_error {
public:
  quadrature_error(const std::string& what, double last, double previous)
      : std::runtime_error(what), last_estimate(last), previous_estimate(previous) {}
  double last_estimate;
  double previous_estimate;
};

// Fock-space truncation could not be certified (cutoff cap reached or the
// result still moves when the cutoff is enlarged).
class cutoff_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A root/maximizer search failed in a way that indicates a bug or a
// numerically violated structural assumption (e.g. superstability).
class solver_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace irh
