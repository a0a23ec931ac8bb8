#include "rusforge/relation.hpp"

#include <array>
#include <cmath>
#include <optional>

#include "rusforge/mp.hpp"

namespace rusforge {
namespace {

int mod8(long long k) { return static_cast<int>(((k % 8) + 8) % 8); }

// Exact answers for angles that are multiples of pi/4: z*/z of a unit w^j is
// w^{-2j}, and the extra half-step is covered by 1 - w^3, whose phase ratio
// contributes w^{+1}.
CyclotomicInt degenerateUnit(long long k) {
  if (k % 2 == 0) return CyclotomicInt::omega(mod8(-k / 2));
  const CyclotomicInt oneMinusOmega3{-1, 0, 0, 1};
  return CyclotomicInt::omega(mod8((1 - k) / 2)) * oneMinusOmega3;
}

struct PslqOutcome {
  CyclotomicInt z;
  int iterations = 0;
};

// One PSLQ attempt at a fixed working precision.  Returns the first ring
// element that passes the full acceptance test (relation inequality with a
// rounding guard band, then a fresh residual evaluation), or nullopt if the
// iteration cap or numerical floor is hit first.
std::optional<PslqOutcome> runPslq(double theta, double eps, int bits, int iterationCap) {
  setMpDigits(digitsForBits(bits));
  constexpr int n = 4;

  const MpFloat half = MpFloat(theta) / 2;
  const MpFloat ch = cos(half), sh = sin(half);
  const MpFloat r2 = mpSqrt2();
  // Coefficient vector of the relation, in the (a, b, c, d) basis order.
  const std::array<MpFloat, n> x = {ch - sh, r2 * ch, ch + sh, r2 * sh};

  const MpFloat cosTheta = cos(MpFloat(theta));
  const MpFloat sinTheta = sin(MpFloat(theta));
  const MpFloat epsMp(eps);
  const MpFloat tiny = ldexp(MpFloat(1), -bits + 12);

  // Accept z built from an integer column m when the relation value is below
  // eps |z| / sqrt(2) with margin twice the evaluation error, and the directly
  // recomputed residual |z*/z - e^{i theta}| is below eps.
  const auto accept = [&](const std::array<BigInt, n>& m) -> std::optional<CyclotomicInt> {
    const CyclotomicInt z{m[0], m[1], m[2], m[3]};
    if (z.isZero()) return std::nullopt;
    MpFloat dot = 0, sumAbs = 0;
    for (int i = 0; i < n; ++i) {
      const MpFloat term = x[i] * mpFromBigInt(m[i]);
      dot += term;
      sumAbs += abs(term);
    }
    const MpFloat errBound = ldexp(sumAbs + 1, -bits + 6);
    const MpFloat zAbs = sqrt(valueMp(z.absSquared()));
    if (abs(dot) >= epsMp * zAbs / r2 - 2 * errBound) return std::nullopt;

    const auto [re, im] = complexValueMp(z);
    const MpFloat den = re * re + im * im;
    if (den == 0) return std::nullopt;
    const MpFloat ratioRe = (re * re - im * im) / den;
    const MpFloat ratioIm = -2 * re * im / den;
    const MpFloat dr = ratioRe - cosTheta, di = ratioIm - sinTheta;
    if (dr * dr + di * di >= epsMp * epsMp) return std::nullopt;
    return z;
  };

  // --- standard PSLQ state, n = 4, gamma = 2/sqrt(3) ---
  const MpFloat gamma = 2 / sqrt(MpFloat(3));

  std::array<MpFloat, n> s;
  for (int k = n - 1; k >= 0; --k) {
    MpFloat acc = x[k] * x[k];
    if (k + 1 < n) acc += s[k + 1] * s[k + 1];
    s[k] = sqrt(acc);
  }
  std::array<MpFloat, n> y;
  for (int k = 0; k < n; ++k) y[k] = x[k] / s[0];
  {
    const MpFloat s0 = s[0];
    for (int k = 0; k < n; ++k) s[k] /= s0;
  }

  MpFloat H[n][n - 1];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n - 1; ++j) H[i][j] = 0;
  for (int j = 0; j < n - 1; ++j) H[j][j] = s[j + 1] / s[j];
  for (int i = 1; i < n; ++i)
    for (int j = 0; j < i && j < n - 1; ++j) H[i][j] = -y[i] * y[j] / (s[j] * s[j + 1]);

  BigInt A[n][n], B[n][n];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = B[i][j] = (i == j ? 1 : 0);

  // Hermite reduction of H with matching updates of y, A, B.
  const auto reduce = [&]() -> bool {
    for (int i = 1; i < n; ++i) {
      for (int j = std::min(i - 1, n - 2); j >= 0; --j) {
        if (abs(H[j][j]) < tiny) return false;
        const MpFloat tR = round(H[i][j] / H[j][j]);
        if (tR == 0) continue;
        const BigInt t = tR.convert_to<BigInt>();
        y[j] += tR * y[i];
        for (int k = 0; k <= j; ++k) H[i][k] -= tR * H[j][k];
        for (int k = 0; k < n; ++k) {
          A[i][k] -= t * A[j][k];
          B[k][j] += t * B[k][i];
        }
      }
    }
    return true;
  };

  const auto candidates = [&]() -> std::optional<CyclotomicInt> {
    for (int j = 0; j < n; ++j) {
      std::array<BigInt, n> m;
      for (int k = 0; k < n; ++k) m[k] = B[k][j];
      if (const auto z = accept(m)) return z;
    }
    return std::nullopt;
  };

  if (!reduce()) return std::nullopt;
  if (const auto z = candidates()) return PslqOutcome{*z, 0};

  for (int iter = 1; iter <= iterationCap; ++iter) {
    // Pivot row: maximize gamma^i |H[i][i]|.
    int r = 0;
    {
      MpFloat best = -1, pw = 1;
      for (int i = 0; i < n - 1; ++i) {
        pw *= gamma;
        const MpFloat val = pw * abs(H[i][i]);
        if (val > best) {
          best = val;
          r = i;
        }
      }
    }

    std::swap(y[r], y[r + 1]);
    for (int k = 0; k < n - 1; ++k) std::swap(H[r][k], H[r + 1][k]);
    for (int k = 0; k < n; ++k) {
      std::swap(A[r][k], A[r + 1][k]);
      std::swap(B[k][r], B[k][r + 1]);
    }

    if (r < n - 2) {
      const MpFloat t0 = sqrt(H[r][r] * H[r][r] + H[r][r + 1] * H[r][r + 1]);
      if (t0 < tiny) return std::nullopt;
      const MpFloat t1 = H[r][r] / t0, t2 = H[r][r + 1] / t0;
      for (int i = r; i < n; ++i) {
        const MpFloat t3 = H[i][r], t4 = H[i][r + 1];
        H[i][r] = t1 * t3 + t2 * t4;
        H[i][r + 1] = t1 * t4 - t2 * t3;
      }
    }

    if (!reduce()) return std::nullopt;
    if (const auto z = candidates()) return PslqOutcome{*z, iter};
  }
  return std::nullopt;
}

}  // namespace

PhaseApproximation approximatePhaseDetailed(const PhaseTarget& target) {
  if (!std::isfinite(target.theta))
    throw std::invalid_argument("approximatePhase: theta must be finite");
  if (!(target.epsilon > 0.0) || !(target.epsilon < 1.0))
    throw std::invalid_argument("approximatePhase: epsilon must lie in (0, 1)");

  // Multiples of pi/4 (up to a discrepancy the target cannot see) are
  // answered exactly by units.
  const double quarter = 3.14159265358979323846 / 4.0;
  const long long k = std::llround(target.theta / quarter);
  if (std::abs(target.theta - static_cast<double>(k) * quarter) < target.epsilon / 2)
    return {degenerateUnit(k), 0, 0};

  const double invEps = 1.0 / target.epsilon;
  int bits = 64 + 4 * static_cast<int>(std::ceil(std::log2(invEps)));
  const int cap =
      std::max(250, static_cast<int>(20.0 * (3.86 * std::log10(invEps) - 6.77)));

  for (int attempt = 0; attempt < 4; ++attempt) {
    if (const auto out = runPslq(target.theta, target.epsilon, bits, cap))
      return {out->z, out->iterations, bits};
    bits *= 2;
  }
  throw PrecisionExhausted("integer-relation search exceeded its iteration cap at maximum precision");
}

CyclotomicInt approximatePhase(const PhaseTarget& target) {
  return approximatePhaseDetailed(target).z;
}

int pslqIterationCount(const PhaseTarget& target) {
  return approximatePhaseDetailed(target).iterations;
}

}  // namespace rusforge
