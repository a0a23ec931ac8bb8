#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rusforge/ring.hpp"

namespace rusforge {

// Solving |y|^2 = xi for y in Z[w] given xi in Z[sqrt(2)].
//
// The relative norm |y|^2 = y * conj(y) lands in Z[sqrt(2)] and is totally
// positive (nonnegative under both real embeddings).  Whether xi is
// representable is decided prime-by-prime:
//
//   * sqrt(2)-associates (|field norm| = 2) are representable: |1+w|^2 =
//     2 + sqrt(2).
//   * primes of prime rational norm p with p = 1 (mod 8) are representable
//     (the norm equation splits further over Z[w]);
//   * primes of prime rational norm p with p = 7 (mod 8) are NOT: they stay
//     inert under the extension, so only even powers can appear;
//   * rational primes p that stay prime in Z[sqrt(2)] (p = 3, 5 mod 8) are
//     always representable.
//
// Up to those local conditions, total positivity of xi fixes the remaining
// unit ambiguity: any leftover unit is an even power of 1 + sqrt(2) and can
// be absorbed into y.

enum class ResidualStatus { provenPrime, probablePrime, unknown };

enum class SolvabilityReason {
  goodPrimeResidual,       // residual is a representable prime
  evenBadPowers,           // fully factored; non-representable primes all even
  badResidual,             // residual (or an odd-power factor) obstructs
  negativeUnderEmbedding,  // xi is negative under a real embedding
  timeout,                 // factoring budget exhausted before a verdict
};

struct SolvabilityVerdict {
  bool easilySolvable = false;
  SolvabilityReason reason = SolvabilityReason::badResidual;
};

// Partial factorization xi = unitPart * prod(prime_i ^ exp_i) * residual,
// exact by construction.  Primes are drawn from a fixed table of Z[sqrt(2)]
// primes of rational norm at most 1000 (sqrt(2) itself, split primes a +/-
// b*sqrt(2), and inert rational primes); the residual carries whatever is
// left, with its primality status tracked honestly.
struct LimitedFactorization {
  Root2Int unitPart = Root2Int::one();
  std::vector<std::pair<Root2Int, int>> factors;  // (prime, exponent > 0)
  Root2Int residual = Root2Int::one();
  ResidualStatus residualStatus = ResidualStatus::provenPrime;
  SolvabilityVerdict verdict;

  // "unit * (p1)^e1 * ... * residual" in the Root2Int display syntax.
  std::string toString() const;
};

// True when a prime xi of Z[sqrt(2)] (up to unit multiples) has |y|^2 = xi
// solvable in principle: a sqrt(2)-associate, a split prime of rational norm
// = 1 (mod 8), or a rational prime != 7 (mod 8).  Throws std::invalid_argument
// on xi = 0.  Composite xi generally returns false; rational primes are
// recognized even when they split (they are representable as a whole).
bool classifyGoodPrime(const Root2Int& xi);

// Greedy trial division by the fixed small-prime table, followed by a
// primality test (40 Miller-Rabin rounds, deterministically seeded) and
// classification of the residual.  The budget is a deterministic work-unit
// count scaled from budgetMs, so results are reproducible machine to machine.
// Exhausting it yields residualStatus = unknown and easilySolvable = false
// with reason timeout.  xi must be nonzero; inputs that are negative under
// either real embedding come back immediately unsolvable.
LimitedFactorization limitedFactor(const Root2Int& xi, int budgetMs = 50);

// Raised when solveNormEquation cannot deliver on a promised verdict; an
// easilySolvable = true verdict that still lands here indicates a classifier
// bug and is meant to surface loudly.
struct NoSolution : std::runtime_error {
  explicit NoSolution(const std::string& what) : std::runtime_error(what) {}
};

// Solve |y|^2 = xi exactly using the verdict and factor data in fact.
// Requires fact.verdict.easilySolvable; the result is re-verified in-ring
// (absSquared(y) == xi) before it is returned.
CyclotomicInt solveNormEquation(const Root2Int& xi, const LimitedFactorization& fact);

}  // namespace rusforge
