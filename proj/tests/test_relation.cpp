#include "doctest.h"

#include "rusforge/relation.hpp"

#include "rusforge/mp.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace rusforge;

namespace {

constexpr double kPi = 3.14159265358979323846;

int mod8i(long long k) { return static_cast<int>(((k % 8) + 8) % 8); }

// Independent residual oracle |z*/z - e^{i theta}| at the given precision.
double residualOracle(const CyclotomicInt& z, double theta, unsigned digits) {
  setMpDigits(digits);
  const auto [re, im] = complexValueMp(z);
  const MpFloat den = re * re + im * im;
  REQUIRE(den > 0);
  const MpFloat ratioRe = (re * re - im * im) / den;
  const MpFloat ratioIm = -2 * re * im / den;
  const MpFloat dr = ratioRe - cos(MpFloat(theta));
  const MpFloat di = ratioIm - sin(MpFloat(theta));
  return sqrt(dr * dr + di * di).convert_to<double>();
}

// Double-precision residual via the plain complex evaluation (second oracle).
double residualDouble(const CyclotomicInt& z, double theta) {
  const std::complex<double> v = z.complexValue();
  const std::complex<double> ratio = std::conj(v) / v;
  return std::abs(ratio - std::exp(std::complex<double>(0.0, theta)));
}

}  // namespace

TEST_CASE("quarter-turn multiples come back as exact units") {
  for (long long k = -8; k <= 8; ++k) {
    const double theta = static_cast<double>(k) * (kPi / 4.0);
    const PhaseApproximation res = approximatePhaseDetailed({theta, 1e-9});
    CAPTURE(k);
    CHECK_FALSE(res.z.isZero());
    CHECK(res.iterations == 0);
    // z*/z = w^k exactly, as a ring identity.
    CHECK(res.z.conj() == res.z * CyclotomicInt::omega(mod8i(k)));
  }
  CHECK(approximatePhase({0.0, 0.5}) == CyclotomicInt::one());
  CHECK(pslqIterationCount({0.0, 0.5}) == 0);
}

TEST_CASE("a loose quarter-rotation target is answered within tolerance") {
  // Brute-force oracle: the coefficient box [-3,3]^4 contains witnesses.
  int witnesses = 0;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b)
      for (int c = -3; c <= 3; ++c)
        for (int d = -3; d <= 3; ++d) {
          const CyclotomicInt z{a, b, c, d};
          if (z.isZero()) continue;
          if (residualDouble(z, kPi / 2) < 0.3) ++witnesses;
        }
  CHECK(witnesses > 0);

  const CyclotomicInt z = approximatePhase({kPi / 2, 0.3});
  CHECK(residualDouble(z, kPi / 2) < 0.3);
}

TEST_CASE("non-degenerate targets meet their bound at every epsilon") {
  const double theta = 0.7137;
  for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
    CAPTURE(eps);
    const PhaseApproximation res = approximatePhaseDetailed({theta, eps});
    CHECK_FALSE(res.z.isZero());
    CHECK(res.iterations > 0);
    CHECK(residualOracle(res.z, theta, 80) < eps);

    // Determinism: identical targets, identical results.
    const PhaseApproximation again = approximatePhaseDetailed({theta, eps});
    CHECK(again.z == res.z);
    CHECK(again.iterations == res.iterations);
  }
}

TEST_CASE("the pi/64 rotation at 1e-11 yields a verified small witness") {
  const PhaseTarget target{kPi / 64, 1e-11};
  const PhaseApproximation res = approximatePhaseDetailed(target);
  CHECK(res.iterations > 0);
  CHECK(residualOracle(res.z, target.theta, 100) < 1e-11);
  // Loose single-instance size sanity: |z| ~ kappa * eps^{-1/4} with kappa
  // around 3; allow a generous factor.
  const double zAbs = std::sqrt(res.z.absSquared().toDouble());
  CHECK(zAbs < 10.0 * std::pow(1e11, 0.25));
  CHECK(zAbs >= 1.0);
}

TEST_CASE("witness sizes track the quarter-power law on average") {
  std::mt19937_64 rng(0x9b5ba7d1ULL);
  std::uniform_real_distribution<double> angle(0.08, 3.05);
  const double eps = 1e-8;
  double sum = 0;
  int count = 0;
  while (count < 30) {
    const double theta = angle(rng);
    const double nearest = std::round(theta / (kPi / 4)) * (kPi / 4);
    if (std::abs(theta - nearest) < 0.02) continue;
    const CyclotomicInt z = approximatePhase({theta, eps});
    CHECK(residualOracle(z, theta, 80) < eps);
    sum += std::sqrt(z.absSquared().toDouble());
    ++count;
  }
  const double meanScaled = (sum / count) * std::pow(eps, 0.25);
  CHECK(meanScaled <= 4.5);
}

TEST_CASE("iteration counts grow as epsilon tightens") {
  std::mt19937_64 rng(0x17ac3ULL);
  std::uniform_real_distribution<double> angle(0.1, 3.0);
  std::vector<double> thetas;
  while (thetas.size() < 8) {
    const double theta = angle(rng);
    const double nearest = std::round(theta / (kPi / 4)) * (kPi / 4);
    if (std::abs(theta - nearest) >= 0.03) thetas.push_back(theta);
  }
  double meanLoose = 0, meanTight = 0;
  for (double theta : thetas) {
    meanLoose += pslqIterationCount({theta, 1e-5});
    meanTight += pslqIterationCount({theta, 1e-13});
  }
  meanLoose /= thetas.size();
  meanTight /= thetas.size();
  CHECK(meanLoose > 0);
  CHECK(meanTight > meanLoose);
}

TEST_CASE("invalid targets are rejected") {
  CHECK_THROWS_AS(approximatePhase({0.3, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(approximatePhase({0.3, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(approximatePhase({0.3, -0.25}), std::invalid_argument);
  CHECK_THROWS_AS(approximatePhase({std::numeric_limits<double>::infinity(), 0.1}),
                  std::invalid_argument);
}
