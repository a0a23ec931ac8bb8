#include "doctest.h"

#include "rusforge/normeq.hpp"

#include <boost/multiprecision/miller_rabin.hpp>

#include <cmath>
#include <cstdlib>
#include <optional>
#include <random>
#include <vector>

using namespace rusforge;

namespace {

long long isqrtLL(long long n) {
  if (n < 0) return -1;
  long long r = std::llround(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool isRationalPrimeLL(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Oracle: is a + b*sqrt(2) prime in Z[sqrt(2)]?  Its field norm must be (up
// to sign) a rational prime, or the square of one with the element an
// associate of that rational prime.
bool oracleRingPrime(long long a, long long b) {
  const long long norm = a * a - 2 * b * b;
  const long long n = std::llabs(norm);
  if (n <= 1) return false;
  if (isRationalPrimeLL(n)) return true;
  const long long m = isqrtLL(n);
  if (m * m == n && isRationalPrimeLL(m) && a % m == 0 && b % m == 0) {
    const long long qa = a / m, qb = b / m;
    return std::llabs(qa * qa - 2 * qb * qb) == 1;
  }
  return false;
}

// Oracle: exhaustive search for y with |y|^2 = xi.  If y = a3 w^3 + a2 w^2 +
// a1 w + a0 solves it, summing |y|^2 over both real embeddings gives
// a3^2 + a2^2 + a1^2 + a0^2 = xi.a exactly, which bounds every coefficient.
std::optional<CyclotomicInt> bruteSolve(const Root2Int& xi) {
  if (xi.a < 0) return std::nullopt;
  const long long target = xi.a.convert_to<long long>();
  const long long bound = isqrtLL(target);
  for (long long a3 = -bound; a3 <= bound; ++a3) {
    const long long r3 = target - a3 * a3;
    if (r3 < 0) continue;
    for (long long a2 = -bound; a2 <= bound; ++a2) {
      const long long r2 = r3 - a2 * a2;
      if (r2 < 0) continue;
      for (long long a1 = -bound; a1 <= bound; ++a1) {
        const long long r1 = r2 - a1 * a1;
        if (r1 < 0) continue;
        for (long long a0 = -bound; a0 <= bound; ++a0) {
          if (a0 * a0 != r1) continue;  // coefficient sum must hit xi.a exactly
          const CyclotomicInt y{a3, a2, a1, a0};
          if (y.absSquared() == xi) return y;
        }
      }
    }
  }
  return std::nullopt;
}

int exponentOf(const LimitedFactorization& fact, const Root2Int& prime) {
  for (const auto& [p, e] : fact.factors)
    if (p == prime) return e;
  return 0;
}

Root2Int reconstruct(const LimitedFactorization& fact) {
  Root2Int prod = fact.unitPart;
  for (const auto& [p, e] : fact.factors)
    for (int i = 0; i < e; ++i) prod = prod * p;
  return prod * fact.residual;
}

// In-test search for a split-prime element of a given rational norm.
Root2Int findSplitElement(long long p) {
  for (long long b = 1; b <= 4000; ++b) {
    const long long aa = p + 2 * b * b;
    const long long a = isqrtLL(aa);
    if (a * a == aa) return Root2Int{a, b};
  }
  REQUIRE(false);
  return Root2Int::one();
}

}  // namespace

TEST_CASE("good-prime classification matches the worked examples") {
  CHECK(classifyGoodPrime(Root2Int{2, 1}));    // 2 + sqrt(2)
  CHECK(classifyGoodPrime(Root2Int{5, -2}));   // norm 17 = 1 (mod 8)
  CHECK_FALSE(classifyGoodPrime(Root2Int{7, 0}));  // 7 = 7 (mod 8)

  CHECK(classifyGoodPrime(Root2Int{3, 0}));    // rational, stays prime
  CHECK(classifyGoodPrime(Root2Int{5, 0}));
  CHECK(classifyGoodPrime(Root2Int::root2()));
  CHECK_FALSE(classifyGoodPrime(Root2Int{3, 1}));   // norm 7 = 7 (mod 8)
  CHECK_FALSE(classifyGoodPrime(Root2Int{1, 1}));   // unit
  CHECK_FALSE(classifyGoodPrime(Root2Int{49, 0}));  // composite
  CHECK_THROWS_AS(classifyGoodPrime(Root2Int::zero()), std::invalid_argument);
}

TEST_CASE("classification agrees with brute-force solvability on small primes") {
  int primesSeen = 0, solvable = 0, obstructed = 0;
  for (long long a = -30; a <= 30; ++a) {
    for (long long b = -30; b <= 30; ++b) {
      if (a == 0 && b == 0) continue;
      if (!oracleRingPrime(a, b)) continue;
      ++primesSeen;
      const Root2Int xi{a, b};
      const bool brute = bruteSolve(xi).has_value();
      const bool predicted = classifyGoodPrime(xi) && xi.isTotallyPositive();
      CAPTURE(a);
      CAPTURE(b);
      CHECK(brute == predicted);
      if (brute)
        ++solvable;
      else
        ++obstructed;
    }
  }
  // The sweep must actually have covered a rich set of cases.
  CHECK(primesSeen > 100);
  CHECK(solvable > 10);
  CHECK(obstructed > 10);
}

TEST_CASE("the worked composite splits into the advertised primes and solves exactly") {
  const Root2Int xi{1270080, 211680};
  const LimitedFactorization fact = limitedFactor(xi);

  CHECK(fact.verdict.easilySolvable);
  CHECK(fact.verdict.reason == SolvabilityReason::evenBadPowers);
  CHECK(fact.residual == Root2Int::one());
  CHECK(fact.residualStatus == ResidualStatus::provenPrime);
  CHECK(fact.unitPart == Root2Int{1, 1});  // one stray fundamental unit

  // 2^5 * (2 + sqrt(2)) contributes sqrt(2)^11; 3 and 5 stay prime; 7 splits
  // into the conjugate pair 3 +/- sqrt(2), each squared; norm 17 appears once.
  CHECK(fact.factors.size() == 6);
  CHECK(exponentOf(fact, Root2Int::root2()) == 11);
  CHECK(exponentOf(fact, Root2Int{3, 0}) == 3);
  CHECK(exponentOf(fact, Root2Int{5, 0}) == 1);
  CHECK(exponentOf(fact, Root2Int{3, 1}) == 2);
  CHECK(exponentOf(fact, Root2Int{3, -1}) == 2);
  CHECK(exponentOf(fact, Root2Int{5, -2}) == 1);

  CHECK(reconstruct(fact) == xi);

  const CyclotomicInt y = solveNormEquation(xi, fact);
  CHECK(y.absSquared() == xi);

  // The debugging rendering mentions the repeated factors.
  const std::string s = fact.toString();
  CHECK(s.find("^11") != std::string::npos);
  CHECK(s.find("^2") != std::string::npos);
  CHECK(s.find("*") != std::string::npos);
}

TEST_CASE("norm equation solutions match the pinned small cases") {
  SUBCASE("2 + sqrt(2) is |1 + w|^2") {
    const Root2Int xi{2, 1};
    const auto fact = limitedFactor(xi);
    CHECK(fact.verdict.easilySolvable);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y == CyclotomicInt{0, 0, 1, 1});
  }
  SUBCASE("2 is |sqrt(2)|^2") {
    const Root2Int xi{2, 0};
    const auto fact = limitedFactor(xi);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y == CyclotomicInt{-1, 0, 1, 0});  // w - w^3
  }
  SUBCASE("17 splits and solves; brute force agrees it is solvable") {
    const Root2Int xi{17, 0};
    const auto fact = limitedFactor(xi);
    CHECK(fact.verdict.easilySolvable);
    CHECK(exponentOf(fact, Root2Int{5, 2}) == 1);
    CHECK(exponentOf(fact, Root2Int{5, -2}) == 1);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y.absSquared() == xi);
    const auto brute = bruteSolve(xi);
    REQUIRE(brute.has_value());
    CHECK(brute->absSquared() == xi);
  }
  SUBCASE("1 factors trivially") {
    const Root2Int xi = Root2Int::one();
    const auto fact = limitedFactor(xi);
    CHECK(fact.verdict.easilySolvable);
    CHECK(fact.factors.empty());
    CHECK(fact.residual == Root2Int::one());
    CHECK(fact.unitPart == Root2Int::one());
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y.absSquared() == xi);
  }
  SUBCASE("a square unit is absorbed into y") {
    const Root2Int xi{3, 2};  // lambda^2
    const auto fact = limitedFactor(xi);
    CHECK(fact.verdict.easilySolvable);
    CHECK(fact.unitPart == xi);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y == Root2Int{1, 1}.toCyclotomic());
    CHECK(y.absSquared() == xi);
  }
}

TEST_CASE("odd powers of obstructed primes are refused, even powers solve") {
  const Root2Int odd{14, 7};  // 7 * (2 + sqrt(2))
  const auto factOdd = limitedFactor(odd);
  CHECK_FALSE(factOdd.verdict.easilySolvable);
  CHECK(factOdd.verdict.reason == SolvabilityReason::badResidual);
  CHECK(reconstruct(factOdd) == odd);
  CHECK_THROWS_AS(solveNormEquation(odd, factOdd), NoSolution);
  CHECK_FALSE(bruteSolve(odd).has_value());  // brute force confirms

  const Root2Int even{98, 49};  // 49 * (2 + sqrt(2))
  const auto factEven = limitedFactor(even);
  CHECK(factEven.verdict.easilySolvable);
  CHECK(exponentOf(factEven, Root2Int{3, 1}) == 2);
  CHECK(exponentOf(factEven, Root2Int{3, -1}) == 2);
  const CyclotomicInt y = solveNormEquation(even, factEven);
  CHECK(y.absSquared() == even);
}

TEST_CASE("negative embeddings are rejected up front") {
  for (const Root2Int& xi : {Root2Int{-3, 0}, Root2Int{1, 1}, Root2Int{0, 1}}) {
    CAPTURE(xi.toString());
    const auto fact = limitedFactor(xi);
    CHECK_FALSE(fact.verdict.easilySolvable);
    CHECK(fact.verdict.reason == SolvabilityReason::negativeUnderEmbedding);
    CHECK(fact.residual == xi);
    CHECK(reconstruct(fact) == xi);
    CHECK_THROWS_AS(solveNormEquation(xi, fact), NoSolution);
  }
  CHECK_THROWS_AS(limitedFactor(Root2Int::zero()), std::invalid_argument);
}

TEST_CASE("a zero budget times out honestly") {
  const Root2Int xi{1270080, 211680};
  const auto fact = limitedFactor(xi, 0);
  CHECK_FALSE(fact.verdict.easilySolvable);
  CHECK(fact.verdict.reason == SolvabilityReason::timeout);
  CHECK(fact.residualStatus == ResidualStatus::unknown);
  CHECK(fact.factors.empty());
  CHECK(reconstruct(fact) == xi);
}

TEST_CASE("every factorization reconstructs its input exactly") {
  std::mt19937_64 rng(0x5eedf00dULL);
  std::uniform_int_distribution<long long> coeff(-1000000, 1000000);
  for (int trial = 0; trial < 200; ++trial) {
    const Root2Int xi{coeff(rng), coeff(rng)};
    if (xi.isZero()) continue;
    const auto fact = limitedFactor(xi);
    CAPTURE(xi.toString());
    CHECK(reconstruct(fact) == xi);
    for (const auto& [prime, e] : fact.factors) {
      CHECK(e > 0);
      // Every table factor has a rational norm that is 2, a prime, or the
      // square of a prime (verified against the independent oracle).
      const long long n = std::llabs(prime.norm().convert_to<long long>());
      const long long m = isqrtLL(n);
      CHECK((n == 2 || isRationalPrimeLL(n) || (m * m == n && isRationalPrimeLL(m))));
    }
  }
}

TEST_CASE("random products of representable primes solve and verify") {
  std::mt19937_64 rng(0xabcdef12345ULL);
  const std::vector<Root2Int> goodPool = {
      Root2Int::root2(), Root2Int{3, 0}, Root2Int{5, 0}, Root2Int{11, 0},
      Root2Int{5, 2},    Root2Int{5, -2}, Root2Int{7, 2},
  };
  const std::vector<Root2Int> badPool = {Root2Int{3, 1}, Root2Int{3, -1}, Root2Int{5, 1}};
  std::uniform_int_distribution<int> goodExp(0, 2);
  std::uniform_int_distribution<int> badExp(0, 1);
  std::uniform_int_distribution<int> unitExp(0, 2);

  for (int trial = 0; trial < 60; ++trial) {
    Root2Int xi = Root2Int::one();
    for (const Root2Int& g : goodPool)
      for (int i = goodExp(rng); i > 0; --i) xi = xi * g;
    for (const Root2Int& b : badPool)
      for (int i = 2 * badExp(rng); i > 0; --i) xi = xi * b;  // even powers only
    for (int i = unitExp(rng); i > 0; --i) xi = xi * Root2Int{3, 2};  // lambda^2
    if (!xi.isTotallyPositive()) xi = xi * Root2Int{1, 1};  // fix the embedding sign
    REQUIRE(xi.isTotallyPositive());

    const auto fact = limitedFactor(xi);
    CAPTURE(xi.toString());
    CHECK(fact.verdict.easilySolvable);
    CHECK(reconstruct(fact) == xi);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y.absSquared() == xi);
  }
}

TEST_CASE("prime residuals beyond the table are classified and solved") {
  SUBCASE("split prime of norm 1009 = 1 (mod 8)") {
    const Root2Int pi = findSplitElement(1009);
    REQUIRE(pi.norm() == 1009);
    const auto fact = limitedFactor(pi);
    CHECK(fact.verdict.easilySolvable);
    CHECK(fact.verdict.reason == SolvabilityReason::goodPrimeResidual);
    CHECK(fact.residual == pi);
    CHECK(fact.residualStatus == ResidualStatus::provenPrime);
    const CyclotomicInt y = solveNormEquation(pi, fact);
    CHECK(y.absSquared() == pi);
  }
  SUBCASE("split prime of norm 1031 = 7 (mod 8) is obstructed") {
    const Root2Int pi = findSplitElement(1031);
    REQUIRE(pi.norm() == 1031);
    const auto fact = limitedFactor(pi);
    CHECK_FALSE(fact.verdict.easilySolvable);
    CHECK(fact.verdict.reason == SolvabilityReason::badResidual);
    CHECK(fact.residualStatus == ResidualStatus::provenPrime);
    CHECK_THROWS_AS(solveNormEquation(pi, fact), NoSolution);
  }
  SUBCASE("rational prime 1009 beyond the table") {
    const Root2Int xi{1009, 0};
    const auto fact = limitedFactor(xi);
    CHECK(fact.verdict.easilySolvable);
    CHECK(fact.verdict.reason == SolvabilityReason::goodPrimeResidual);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y.absSquared() == xi);
  }
}

TEST_CASE("huge probable-prime residuals go through the modular-root path") {
  std::mt19937_64 rng(0x600dca5eULL);
  std::uniform_int_distribution<long long> aDist(300000000LL, 1000000000LL);
  std::uniform_int_distribution<long long> bDist(1, 10000000LL);

  bool exercised = false;
  for (int attempt = 0; attempt < 100000 && !exercised; ++attempt) {
    const long long a = aDist(rng), b = bDist(rng);
    const BigInt norm = BigInt(a) * a - 2 * BigInt(b) * b;
    if (norm <= 0 || norm % 8 != 1) continue;
    std::mt19937_64 mrGen(0x12345ULL);
    if (!boost::multiprecision::miller_rabin_test(norm, 40, mrGen)) continue;

    const Root2Int xi{a, b};
    REQUIRE(xi.isTotallyPositive());
    const auto fact = limitedFactor(xi);
    CHECK(fact.verdict.easilySolvable);
    CHECK(fact.verdict.reason == SolvabilityReason::goodPrimeResidual);
    CHECK(fact.residualStatus == ResidualStatus::probablePrime);
    const CyclotomicInt y = solveNormEquation(xi, fact);
    CHECK(y.absSquared() == xi);
    exercised = true;
  }
  CHECK(exercised);
}
