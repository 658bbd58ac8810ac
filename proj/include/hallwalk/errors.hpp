#ifndef HALLWALK_ERRORS_HPP
#define HALLWALK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hallwalk {

struct HallwalkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input matrix is not a finite-type Cartan matrix (shape, signs,
// symmetrizability or positive definiteness failed).
struct CartanError : HallwalkError {
  using HallwalkError::HallwalkError;
};

// A closure (roots or Weyl group) exceeded the configured element cap.
// Distinct from CartanError so callers can tell "too big" from "malformed".
struct CapExceeded : HallwalkError {
  using HallwalkError::HallwalkError;
};

// A structural guarantee failed at runtime: probabilities not summing to
// one, a non-dominant argument, exact division leaving a remainder.
struct InvariantViolation : HallwalkError {
  using HallwalkError::HallwalkError;
};

// p-adic computation ran out of certified digits.
struct PrecisionExhausted : HallwalkError {
  using HallwalkError::HallwalkError;
};

struct ConfigError : HallwalkError {
  using HallwalkError::HallwalkError;
};

}  // namespace hallwalk

#endif
