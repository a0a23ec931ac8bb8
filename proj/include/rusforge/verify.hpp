#pragma once

#include "rusforge/gates.hpp"
#include "rusforge/mp.hpp"
#include "rusforge/rus2q.hpp"

#include <array>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rusforge {

// Raised when a circuit contains a gate outside the exactly representable set.
struct NonRingGate : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Raised when a simulated protocol branch disagrees with its claim; the
// message carries a diff of the expected and simulated branch operators.
struct ProtocolMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// State vector over Z[w] with a global denominator 1/sqrt(2)^L.  Gate
// application is exact; the norm identity sum |amp_i|^2 == 2^L certifies
// unitarity of the whole history.
struct RingState {
  int nQubits = 1;
  int L = 0;
  std::vector<CyclotomicInt> amp;

  static RingState basis(int nQubits, int index);

  void applyGate(const GateOp& op);
  void applyCircuit(const CircuitN& c);
  // Strip common sqrt(2) factors while L > 0.
  void reduce();

  // Sum of |amp_i|^2 as an element of Z[sqrt2]; equals 2^L for a unit vector.
  Root2Int normSquared() const;
  bool normConserved() const;

  std::vector<std::complex<double>> floatAmplitudes() const;
};

RingState simulateExact(const CircuitN& c, int basisIndex);

// Plain floating-point state-vector simulation of the same gate set; used
// only where the comparison target is irrational.  Agrees with the exact
// simulator to ~1e-10 on moderate circuits.
std::vector<std::complex<double>> simulateFloat(const CircuitN& c, int basisIndex);

using CMat2 = std::array<std::array<std::complex<double>, 2>, 2>;

// Global-phase-invariant distance d(u, v) = sqrt(1 - |tr(u^dag v)| / 2),
// evaluated as a phase-aligned Frobenius norm so that distances far below
// the rounding floor of 1 - |tr|/2 are still resolved.  Inputs must be
// unitary to 1e-12.
double distance(const CMat2& u, const CMat2& v);

// One measurement branch of a protocol run on (arbitrary target) (x) |0>.
struct BranchReport {
  int outcome = 0;
  // Exact branch probability probabilityNumerator / 2^probabilityDenomExp,
  // in lowest terms, plus its floating value.
  Root2Int probabilityNumerator = Root2Int::zero();
  int probabilityDenomExp = 0;
  double probability = 0.0;
  // Unnormalized operator applied to the target (entries over sqrt2^L).
  RingMatrix inducedUnitary = RingMatrix(2, 0);
  bool matchesExpected = false;
  // Success branch only: d-metric distance of the induced rotation from
  // Rz(targetTheta).
  double distanceToTarget = 0.0;
};

// Simulates the design exactly on both target basis states and checks every
// claim the protocol makes: the success branch equals the stored diagonal
// operator, the failure branch equals the twirl-induced Clifford that the
// stored correction undoes, and the exact branch probabilities match the
// stored numerator and sum to one.  Returns {success report, failure report}.
std::pair<BranchReport, BranchReport> validateProtocol(const RusProtocol& p,
                                                       double targetTheta);

// Distance between the z-rotation realized by the exact diagonal action
// diag(u, uPrime) (angle theta' = arg(uPrime/u)) and the target Rz(theta):
//   d = sqrt(1 - |cos((theta' - theta)/2)|),
// which is phase-invariant and evaluated in extended precision so that values
// far below double rounding of 1-cos are still resolved.
double rotationDistance(const CyclotomicInt& u, const CyclotomicInt& uPrime,
                        const MpFloat& theta);
double rotationDistance(const CyclotomicInt& u, const CyclotomicInt& uPrime,
                        double theta);
double rotationDistanceAngles(const MpFloat& thetaPrime, const MpFloat& theta);

// Realized rotation angle arg(uPrime/u), reduced into (-pi, pi].
MpFloat realizedAngle(const CyclotomicInt& u, const CyclotomicInt& uPrime);

// Average T-cost of a repeat-until-success protocol: each attempt costs
// designTcount, each failure additionally costs correctionTcount, and attempts
// succeed independently with probability pSuccess.
double expectedCost(double designTcount, double correctionTcount, double pSuccess);

}  // namespace rusforge
