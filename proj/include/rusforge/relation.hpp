#pragma once

#include <stdexcept>
#include <string>

#include "rusforge/ring.hpp"

namespace rusforge {

// Stage 1 of the synthesis pipeline: find a small z in Z[w] whose phase ratio
// z*/z approximates a requested rotation e^{i theta}.
//
// Writing z = a w^3 + b w^2 + c w + d, the ratio z*/z lands within epsilon of
// e^{i theta} exactly when the integer combination
//
//   a (cos(t/2) - sin(t/2)) + b sqrt(2) cos(t/2)
//     + c (cos(t/2) + sin(t/2)) + d sqrt(2) sin(t/2)       (t = theta)
//
// is small compared with eps * |z| - an integer-relation problem in four real
// coefficients, solved here with a PSLQ search at adaptive precision.

struct PhaseTarget {
  double theta = 0.0;    // rotation angle, radians
  double epsilon = 0.0;  // target bound on |z*/z - e^{i theta}|
};

// Raised when the relation is not found within the iteration cap even after
// the working-precision retries.
struct PrecisionExhausted : std::runtime_error {
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct PhaseApproximation {
  CyclotomicInt z;
  int iterations = 0;    // PSLQ iterations consumed (0 for the exact cases)
  int precisionBits = 0; // working precision of the successful attempt
};

// Full search result.  Requires 0 < epsilon < 1.  Deterministic: identical
// targets produce identical z.  Angles that are (within epsilon/2) multiples
// of pi/4 are answered exactly by a unit, skipping the search.
PhaseApproximation approximatePhaseDetailed(const PhaseTarget& target);

// Just the ring element.
CyclotomicInt approximatePhase(const PhaseTarget& target);

// Iterations a fresh run of the search consumes for this target; feeds the
// benchmark tables.
int pslqIterationCount(const PhaseTarget& target);

}  // namespace rusforge
