#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rusforge/normeq.hpp"
#include "rusforge/relation.hpp"
#include "rusforge/ring.hpp"
#include "rusforge/synth1q.hpp"

namespace rusforge {

// Randomized normalization search and the single-qubit design loop.
//
// Given a phase witness z from the integer-relation stage, the search looks
// for a real-ring factor r and a cyclotomic y completing the unitary
//
//          1       [ r*z      y    ]
//   V = ------- *  [               ]        |r*z|^2 + |y|^2 = 2^L,
//       sqrt2^L    [ -y~   (r*z)~  ]
//
// (~ is complex conjugation).  The top-left entry carries the phase ratio
// (r*z)~/(r*z) = z~/z, the denominator exponent L is the exact ceiling of
// log2|r*z|^2, and the one-round success probability is p = |r*z|^2 / 2^L.
// Candidates are scored by expected cost tc = Tcount(V)/p and the best is
// kept under a deterministic tie-break.

struct SearchParams {
  double delta = 0.25;        // domain exponent factor, 0 < delta <= 1
  int sz = 4;                 // sample budget factor (capped search)
  double pMin = 0.5;          // success-probability floor (exhaustive search)
  std::uint64_t rngSeed = 0;  // seed for the shuffled sampling order
};

// Throws std::invalid_argument unless 0 < delta <= 1, sz >= 1 and
// 0.5 <= pMin < 1.
void validateParams(const SearchParams& params);

struct Candidate {
  Root2Int r;          // normalizing factor sampled from the lattice domain
  CyclotomicInt y;     // norm-equation solution, |y|^2 = 2^Lr - |r*z|^2
  int Lr = 0;          // denominator exponent, exact ceiling of log2|r*z|^2
  double p = 1.0;      // success probability |r*z|^2 / 2^Lr (floated)
  double tc = 0.0;     // score: T-count of the design matrix divided by p
  Root2Int pNumerator; // exact |r*z|^2, so p = pNumerator / 2^Lr exactly
  int designTcount = 0;
};

// The design matrix (1/sqrt2^L) [[rz, y], [-conj(y), conj(rz)]], reduced.
RingUnitary designMatrix(const CyclotomicInt& rz, const CyclotomicInt& y,
                         int L);

// The sampling domain for |z|^2 with exact-ceiling exponent L1: all lattice
// points a + b*sqrt(2) with |a + b*sqrt2| < 2^{delta*L1/2} and
// |a - b*sqrt2| < 2^{delta*L1/2}, excluding zero, in canonical (a, b) order.
std::vector<Root2Int> sampleDomain(int L1, double delta);

struct SearchStats {
  long long samplesTried = 0;     // candidates drawn from the domain
  long long equationsSolved = 0;  // of those, easily solvable norm equations
};

struct SearchTraceEntry {
  Root2Int r;
  int Lr = 0;
  bool solvable = false;
  double p = 0.0;   // meaningful when solvable
  double tc = 0.0;  // meaningful when solvable
};

// Capped random search: draws at most sz*delta*L1^2 samples (without
// replacement, order fixed by rngSeed) and returns the best easily solvable
// candidate by tc, or nullopt when none of the drawn samples is solvable.
// Ties break toward smaller Lr, then smaller |r| under the real embedding.
// Requires z != 0.  A unit z short-circuits to r = 1, y = 0, L = 0, p = 1.
std::optional<Candidate> randNormalization1(const CyclotomicInt& z,
                                            const SearchParams& params,
                                            SearchStats* stats = nullptr,
                                            std::vector<SearchTraceEntry>* trace = nullptr);

// Exhaustive variant: scans the whole domain and additionally requires
// p > pMin for a candidate to qualify.
std::optional<Candidate> randNormalization2(const CyclotomicInt& z,
                                            const SearchParams& params,
                                            SearchStats* stats = nullptr,
                                            std::vector<SearchTraceEntry>* trace = nullptr);

struct IterationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DesignResult {
  RingUnitary matrix;  // the design unitary V
  CyclotomicInt z;     // phase witness from the integer-relation stage
  Root2Int r;          // normalizing factor (1 for degenerate angles)
  CyclotomicInt rz;    // r * z, the top-left numerator of V
  CyclotomicInt y;     // norm-equation solution
  int L = 0;           // denominator exponent of the unreduced design form
  double p = 1.0;      // one-round success probability
  Root2Int pNumerator; // exact |r*z|^2, p = pNumerator / 2^L exactly
  int designTcount = 0;
  double expectedTcount = 0.0;    // designTcount / p
  double epsilonUsed = 0.0;       // running epsilon of the successful attempt
  double achievedDistance = 0.0;  // |(rz)~/(rz) - e^{i theta}|, high precision
  int pslqIterations = 0;         // from the successful relation attempt
  long long normEquationsSolved = 0;  // accumulated across the whole design
  // Angles that are exact multiples of pi/4 bypass the search: degenerate is
  // set and diagPower holds k mod 8 for theta = k*pi/4.  For even k the
  // matrix is diag(z, conj(z)) and still of the design form; for odd k it is
  // the monomial diag(1, omega^k), which realizes the rotation exactly
  // (global phase free) but has no conjugate-pair diagonal in the ring.
  bool degenerate = false;
  int diagPower = -1;
};

// The design loop: runs the integer-relation stage at the running precision,
// then the capped normalization search, halving the precision after each
// failure.  After 16 halvings the loop restarts once with the sample budget
// sz quadrupled and the domain factor raised to its maximum (loose-precision
// witnesses have tiny domains that a larger budget alone cannot enlarge); a
// second exhaustion throws IterationCapExceeded.  Each attempt draws its
// sampling order from a deterministic substream of rngSeed, with attempt 0
// using rngSeed itself.  Requires 0 < epsilon < 1 and finite theta.
DesignResult singleQubitDesign(double theta, double epsilon,
                               const SearchParams& params,
                               std::vector<SearchTraceEntry>* trace = nullptr);

// Axial decomposition u = e^{i delta} Rz(alpha) H Rz(beta) H Rz(gamma) with
// Rz(t) = diag(e^{-it/2}, e^{it/2}).  Requires u unitary to 1e-12 (throws
// NotUnitary); the recomposition matches u to well under 1e-10.
using CMat2 = std::array<std::array<std::complex<double>, 2>, 2>;

struct ZxzAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

ZxzAngles decomposeZXZ(const CMat2& u);
ZxzAngles decomposeZXZ(const RingMatrix& u);

// Recompose the axial form; useful for verification.
CMat2 composeZXZ(const ZxzAngles& angles);

// Convert a 2x2 ring unitary to floating entries (includes 1/sqrt2^L).
CMat2 toComplexMatrix(const RingMatrix& m);

}  // namespace rusforge
