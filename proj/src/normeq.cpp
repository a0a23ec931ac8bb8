#include "rusforge/normeq.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>

#include <boost/multiprecision/miller_rabin.hpp>

namespace rusforge {
namespace {

// ---------------------------------------------------------------------------
// Small-prime machinery.  The factor table covers every prime of Z[sqrt(2)]
// whose rational norm is at most kTableNormBound: sqrt(2) itself (above 2),
// one conjugate pair a +/- b*sqrt(2) for each rational prime p = +-1 (mod 8),
// and the rational primes p = +-3 (mod 8), which stay prime.
// ---------------------------------------------------------------------------

constexpr int kTableNormBound = 1000;

const std::vector<int>& smallPrimes() {
  static const std::vector<int> primes = [] {
    std::vector<bool> composite(kTableNormBound + 1, false);
    std::vector<int> out;
    for (int n = 2; n <= kTableNormBound; ++n) {
      if (composite[n]) continue;
      out.push_back(n);
      for (int m = 2 * n; m <= kTableNormBound; m += n) composite[m] = true;
    }
    return out;
  }();
  return primes;
}

struct SplitEntry {
  int p;
  Root2Int pi;  // a + b*sqrt(2) with a, b > 0 minimal and a^2 - 2 b^2 = p
};

const std::vector<SplitEntry>& splitTable() {
  static const std::vector<SplitEntry> table = [] {
    std::vector<SplitEntry> out;
    for (int p : smallPrimes()) {
      const int r = p % 8;
      if (r != 1 && r != 7) continue;
      bool found = false;
      for (long long b = 1; b <= 4000 && !found; ++b) {
        const long long aa = p + 2 * b * b;
        long long a = std::llround(std::sqrt(static_cast<double>(aa)));
        while (a > 0 && a * a > aa) --a;
        while ((a + 1) * (a + 1) <= aa) ++a;
        if (a * a == aa) {
          out.push_back({p, Root2Int{a, b}});
          found = true;
        }
      }
      if (!found) throw std::logic_error("split prime table: no representation found");
    }
    return out;
  }();
  return table;
}

const Root2Int& splitPrimeFor(int p) {
  for (const SplitEntry& e : splitTable())
    if (e.p == p) return e.pi;
  throw std::logic_error("split prime table: rational prime not covered");
}

// ---------------------------------------------------------------------------
// Integer helpers.
// ---------------------------------------------------------------------------

BigInt modPow(BigInt base, BigInt exp, const BigInt& mod) {
  base %= mod;
  if (base < 0) base += mod;
  BigInt result = 1;
  while (exp > 0) {
    if ((exp & 1) != 0) result = result * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return result;
}

// Square root of a modulo the odd prime p (Tonelli-Shanks).  a must be a
// quadratic residue; the smallest non-residue seeds the descent, so the
// result is deterministic.
BigInt modSqrt(BigInt a, const BigInt& p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  if (p % 4 == 3) return modPow(a, (p + 1) / 4, p);
  BigInt q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  BigInt z = 2;
  while (modPow(z, (p - 1) / 2, p) != p - 1) ++z;
  BigInt c = modPow(z, q, p);
  BigInt t = modPow(a, q, p);
  BigInt r = modPow(a, (q + 1) / 2, p);
  while (t != 1) {
    int i = 0;
    BigInt probe = t;
    while (probe != 1) {
      probe = probe * probe % p;
      ++i;
    }
    BigInt b = c;
    for (int j = 0; j < s - i - 1; ++j) b = b * b % p;
    s = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

// 40 Miller-Rabin rounds with a seed derived from n itself: reproducible
// across runs and machines while still drawing random witnesses.
bool probablePrime(const BigInt& n) {
  if (n < 2) return false;
  const auto seed = static_cast<std::uint64_t>(n & 0xffffffffffffffffULL);
  std::mt19937_64 gen(seed ^ 0x9e3779b97f4a7c15ULL);
  return boost::multiprecision::miller_rabin_test(n, 40, gen);
}

struct PrimalityCheck {
  bool prime;
  bool proven;  // exact below kTableNormBound^2, probabilistic beyond
};

PrimalityCheck checkPrime(const BigInt& n) {
  if (n < 2) return {false, true};
  for (int p : smallPrimes()) {
    if (n == p) return {true, true};
    if (n % p == 0) return {false, true};
  }
  if (n < BigInt(kTableNormBound) * kTableNormBound) return {true, true};
  return {probablePrime(n), false};
}

std::optional<BigInt> exactSqrt(const BigInt& n) {
  if (n < 0) return std::nullopt;
  const BigInt r = boost::multiprecision::sqrt(n);
  if (r * r == n) return r;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Units of Z[sqrt(2)]: +- lambda^k with lambda = 1 + sqrt(2).
// ---------------------------------------------------------------------------

const Root2Int kLambda{1, 1};
const Root2Int kLambdaInv{-1, 1};

bool isUnit(const Root2Int& x) {
  const BigInt n = x.norm();
  return n == 1 || n == -1;
}

// Writes the unit q as sign * lambda^k.
std::optional<std::pair<int, int>> unitLog(Root2Int q) {
  if (!isUnit(q)) return std::nullopt;
  const int sign = q.sign();
  if (sign < 0) q = -q;
  const Root2Int one = Root2Int::one();
  int k = 0;
  for (int guard = 0; guard < 1000000 && q != one; ++guard) {
    if ((q - one).sign() > 0) {
      q = q * kLambdaInv;  // q > 1: walk down
      ++k;
    } else {
      q = q * kLambda;  // 0 < q < 1: walk up
      --k;
    }
  }
  if (q != one) return std::nullopt;
  return std::make_pair(sign, k);
}

Root2Int powRoot2Int(const Root2Int& base, int e) {
  Root2Int r = Root2Int::one();
  for (int i = 0; i < e; ++i) r = r * base;
  return r;
}

CyclotomicInt powCyclotomic(const CyclotomicInt& base, int e) {
  CyclotomicInt r = CyclotomicInt::one();
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

Root2Int lambdaPower(int k) {
  return k >= 0 ? powRoot2Int(kLambda, k) : powRoot2Int(kLambdaInv, -k);
}

// ---------------------------------------------------------------------------
// Prime classification shared by classifyGoodPrime and the solver.
// ---------------------------------------------------------------------------

struct PrimeClass {
  enum Kind { kUnit, kRamified, kSplit, kRational, kComposite } kind;
  BigInt p;     // rational prime underneath (when meaningful)
  bool good;    // |y|^2 = (this prime) solvable up to units
  bool proven;  // primality knowledge exact rather than probabilistic
};

PrimeClass classifyElement(const Root2Int& xi) {
  BigInt n = xi.norm();
  if (n < 0) n = -n;
  if (n == 0) throw std::invalid_argument("classify: zero has no prime class");
  if (n == 1) return {PrimeClass::kUnit, BigInt(1), false, true};
  if (n == 2) return {PrimeClass::kRamified, BigInt(2), true, true};
  const PrimalityCheck pc = checkPrime(n);
  if (pc.prime) {
    // Split prime: representable exactly when the norm is 1 mod 8.
    return {PrimeClass::kSplit, n, n % 8 == 1, pc.proven};
  }
  if (const auto m = exactSqrt(n)) {
    const PrimalityCheck mc = checkPrime(*m);
    if (mc.prime) {
      const auto q = xi.divideExact(Root2Int{*m, 0});
      if (q && isUnit(*q)) {
        // Associate of a rational prime: representable unless it is 7 mod 8
        // (in which case it splits into two non-representable conjugates).
        return {PrimeClass::kRational, *m, *m % 8 != 7, mc.proven};
      }
    }
  }
  return {PrimeClass::kComposite, BigInt(0), false, false};
}

// ---------------------------------------------------------------------------
// Per-prime solutions of |y|^2 = prime, each exact by construction and
// verified by the caller's final unit alignment.
// ---------------------------------------------------------------------------

const CyclotomicInt kOnePlusOmega{0, 0, 1, 1};  // |1+w|^2 = 2 + sqrt(2)

// Split prime pi of rational norm p = 1 (mod 8): over Z[w] it splits again,
// and gcd(pi, w^2 - t) with t^2 = -1 (mod p) picks out one factor y with
// |y|^2 an associate of pi.
CyclotomicInt solveSplitGood(const Root2Int& pi, const BigInt& p) {
  const BigInt t = modSqrt(p - 1, p);
  CyclotomicInt g = gcdCyclotomic(pi.toCyclotomic(), CyclotomicInt{0, 1, 0, -t});
  auto q = pi.divideExact(g.absSquared());
  if (!q || !isUnit(*q)) {
    g = g.bulletAdjoint();
    q = pi.divideExact(g.absSquared());
  }
  if (!q || !isUnit(*q)) throw NoSolution("split-prime descent failed to align");
  return g;
}

// Rational prime p != 7 (mod 8): use sqrt(-1) mod p when p = 1 (mod 4) and
// sqrt(-2) mod p when p = 3 (mod 8); w^2 and w + w^3 realize those roots in
// Z[w], so a gcd with p extracts y with |y|^2 an associate of p.
CyclotomicInt solveRational(const BigInt& p) {
  const CyclotomicInt target = CyclotomicInt::fromInt(p);
  CyclotomicInt g;
  if (p % 4 == 1) {
    const BigInt t = modSqrt(p - 1, p);
    g = gcdCyclotomic(target, CyclotomicInt{0, 1, 0, -t});
  } else if (p % 8 == 3) {
    const BigInt w = modSqrt(p - 2, p);
    g = gcdCyclotomic(target, CyclotomicInt{1, 0, 1, -w});
  } else {
    throw NoSolution("rational prime 7 mod 8 is not representable");
  }
  const auto q = Root2Int{p, 0}.divideExact(g.absSquared());
  if (!q || !isUnit(*q)) throw NoSolution("rational-prime descent failed to align");
  return g;
}

CyclotomicInt solvePrimePower(const Root2Int& prime, int e) {
  const PrimeClass c = classifyElement(prime);
  switch (c.kind) {
    case PrimeClass::kRamified: {
      // sqrt(2)^e: paired copies give 2^(e/2); an odd leftover costs 1 + w.
      CyclotomicInt part = Root2Int::pow2Half(e / 2).toCyclotomic();
      if (e % 2 != 0) part *= kOnePlusOmega;
      return part;
    }
    case PrimeClass::kSplit:
      if (c.good) return powCyclotomic(solveSplitGood(prime, c.p), e);
      if (e % 2 != 0) throw NoSolution("odd power of a non-representable prime");
      return powRoot2Int(prime, e / 2).toCyclotomic();
    case PrimeClass::kRational:
      if (!c.good) {
        if (e % 2 != 0) throw NoSolution("odd power of a non-representable prime");
        return powRoot2Int(prime, e / 2).toCyclotomic();
      }
      return powCyclotomic(solveRational(c.p), e);
    default:
      throw NoSolution("factor is not a tractable prime");
  }
}

}  // namespace

std::string LimitedFactorization::toString() const {
  std::ostringstream os;
  bool first = true;
  const auto emit = [&](const std::string& s) {
    if (!first) os << " * ";
    os << s;
    first = false;
  };
  if (unitPart != Root2Int::one()) emit("(" + unitPart.toString() + ")");
  for (const auto& [prime, e] : factors) {
    std::string s = "(" + prime.toString() + ")";
    if (e != 1) s += "^" + std::to_string(e);
    emit(s);
  }
  if (residual != Root2Int::one()) emit("(" + residual.toString() + ")");
  if (first) os << "1";
  return os.str();
}

bool classifyGoodPrime(const Root2Int& xi) {
  if (xi.isZero()) throw std::invalid_argument("classifyGoodPrime: xi must be nonzero");
  return classifyElement(xi).good;
}

LimitedFactorization limitedFactor(const Root2Int& xi, int budgetMs) {
  if (xi.isZero()) throw std::invalid_argument("limitedFactor: xi must be nonzero");
  LimitedFactorization out;
  out.residual = xi;
  out.residualStatus = ResidualStatus::unknown;
  if (!xi.isTotallyPositive()) {
    out.verdict = {false, SolvabilityReason::negativeUnderEmbedding};
    return out;
  }

  // Deterministic budget: one unit per divisibility probe, scaled so the
  // default 50 "ms" is far more than the pipeline ever needs.
  long long workUnits = budgetMs <= 0 ? 0 : static_cast<long long>(budgetMs) * 20000;
  bool timedOut = false;
  const auto spend = [&]() {
    if (workUnits < 1) {
      timedOut = true;
      return false;
    }
    --workUnits;
    return true;
  };

  Root2Int remaining = xi;
  BigInt n = xi.norm();  // positive: xi is totally positive

  for (int p : smallPrimes()) {
    if (timedOut || n == 1) break;
    if (!spend()) break;
    if (n % p != 0) continue;
    if (p == 2) {
      int e = 0;
      while (remaining.a % 2 == 0) {  // sqrt(2) | (a + b*sqrt(2)) iff a is even
        if (!spend()) break;
        remaining = Root2Int{remaining.b, remaining.a / 2};
        n /= 2;
        ++e;
      }
      if (e > 0) out.factors.emplace_back(Root2Int::root2(), e);
    } else if (p % 8 == 1 || p % 8 == 7) {
      const Root2Int pi = splitPrimeFor(p);
      for (const Root2Int& q : {pi, pi.conjBullet()}) {
        int e = 0;
        while (!timedOut) {
          if (!spend()) break;
          const auto div = remaining.divideExact(q);
          if (!div) break;
          remaining = *div;
          n /= p;
          ++e;
        }
        if (e > 0) out.factors.emplace_back(q, e);
      }
    } else {
      int e = 0;
      while (remaining.a % p == 0 && remaining.b % p == 0) {
        if (!spend()) break;
        remaining = Root2Int{remaining.a / p, remaining.b / p};
        n /= p;
        n /= p;
        ++e;
      }
      if (e > 0) out.factors.emplace_back(Root2Int{p, 0}, e);
    }
  }

  if (timedOut) {
    out.residual = remaining;
    out.residualStatus = ResidualStatus::unknown;
    out.verdict = {false, SolvabilityReason::timeout};
    return out;
  }

  bool allEvenBad = true;
  for (const auto& [prime, e] : out.factors) {
    const PrimeClass c = classifyElement(prime);
    if (!c.good && e % 2 != 0) allEvenBad = false;
  }

  if (isUnit(remaining)) {
    out.unitPart = remaining;
    out.residual = Root2Int::one();
    out.residualStatus = ResidualStatus::provenPrime;  // nothing left to test
    out.verdict = allEvenBad ? SolvabilityVerdict{true, SolvabilityReason::evenBadPowers}
                             : SolvabilityVerdict{false, SolvabilityReason::badResidual};
    return out;
  }

  out.residual = remaining;
  const PrimeClass rc = classifyElement(remaining);
  switch (rc.kind) {
    case PrimeClass::kRamified:
    case PrimeClass::kSplit:
    case PrimeClass::kRational:
      // Status reflects what we know about the rational prime underneath.
      out.residualStatus =
          rc.proven ? ResidualStatus::provenPrime : ResidualStatus::probablePrime;
      out.verdict = (rc.good && allEvenBad)
                        ? SolvabilityVerdict{true, SolvabilityReason::goodPrimeResidual}
                        : SolvabilityVerdict{false, SolvabilityReason::badResidual};
      break;
    default:
      out.residualStatus = ResidualStatus::unknown;
      out.verdict = {false, SolvabilityReason::badResidual};
      break;
  }
  return out;
}

CyclotomicInt solveNormEquation(const Root2Int& xi, const LimitedFactorization& fact) {
  if (!fact.verdict.easilySolvable)
    throw NoSolution("verdict does not promise a solution");

  CyclotomicInt y = CyclotomicInt::one();
  for (const auto& [prime, e] : fact.factors) y *= solvePrimePower(prime, e);

  if (fact.residual != Root2Int::one()) {
    const PrimeClass rc = classifyElement(fact.residual);
    if (!rc.good) throw NoSolution("residual is not a representable prime");
    switch (rc.kind) {
      case PrimeClass::kRamified:
        y *= kOnePlusOmega;
        break;
      case PrimeClass::kSplit:
        y *= solveSplitGood(fact.residual, rc.p);
        break;
      case PrimeClass::kRational:
        y *= solveRational(rc.p);
        break;
      default:
        throw NoSolution("residual is not a tractable prime");
    }
  }

  // The prime parts match xi up to a unit; total positivity forces that unit
  // to be an even (possibly negative) power of lambda, absorbed into y.
  const auto q = xi.divideExact(y.absSquared());
  if (!q) throw NoSolution("prime parts do not divide xi");
  const auto ul = unitLog(*q);
  if (!ul || ul->first < 0 || ul->second % 2 != 0)
    throw NoSolution("leftover unit is not an even power of the fundamental unit");
  y *= lambdaPower(ul->second / 2).toCyclotomic();

  if (y.absSquared() != xi) throw NoSolution("verification failed: |y|^2 != xi");
  return y;
}

}  // namespace rusforge
