#include "rusforge/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rusforge/mp.hpp"

namespace rusforge {

namespace {

constexpr double kQuarterTurn = 3.14159265358979323846 / 4.0;

int mod8(long long k) {
  int m = static_cast<int>(k % 8);
  return m < 0 ? m + 8 : m;
}

// Deterministic bounded draw and shuffle: the sampling order must be a pure
// function of the seed, independent of the standard library implementation.
std::uint64_t boundedDraw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

void seededShuffle(std::vector<Root2Int>& items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(boundedDraw(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

struct Evaluation {
  bool solvable = false;
  Candidate cand;
};

// Evaluate one normalization factor r for the witness z: compute the exact
// denominator exponent, try the norm equation, and score the design matrix.
Evaluation evaluate(const CyclotomicInt& z, const Root2Int& r) {
  Evaluation out;
  CyclotomicInt rz = z * r.toCyclotomic();
  Root2Int num = rz.absSquared();
  int Lr = exactCeilLog2(num);
  Root2Int xi = Root2Int{BigInt(1) << Lr, 0} - num;

  CyclotomicInt y = CyclotomicInt::zero();
  if (!(xi == Root2Int::zero())) {
    if (!xi.isTotallyPositive()) return out;
    LimitedFactorization fact = limitedFactor(xi);
    if (!fact.verdict.easilySolvable) return out;
    y = solveNormEquation(xi, fact);
  }

  out.solvable = true;
  out.cand.r = r;
  out.cand.y = y;
  out.cand.Lr = Lr;
  out.cand.pNumerator = num;
  out.cand.p = std::ldexp(num.toDouble(), -Lr);
  out.cand.designTcount = tcountOf(designMatrix(rz, y, Lr));
  out.cand.tc = static_cast<double>(out.cand.designTcount) / out.cand.p;
  return out;
}

Root2Int embeddingAbs(const Root2Int& r) { return r.sign() < 0 ? -r : r; }

// Strict-weak order for the best candidate: smaller score, then smaller
// denominator exponent, then smaller |r| under the real embedding, with a
// final coefficient-lex fallback for full determinism.
bool betterThan(const Candidate& a, const Candidate& b) {
  if (a.tc != b.tc) return a.tc < b.tc;
  if (a.Lr != b.Lr) return a.Lr < b.Lr;
  Root2Int d = embeddingAbs(a.r) - embeddingAbs(b.r);
  int s = d.sign();
  if (s != 0) return s < 0;
  if (a.r.a != b.r.a) return a.r.a < b.r.a;
  return a.r.b < b.r.b;
}

std::optional<Candidate> searchImpl(const CyclotomicInt& z,
                                    const SearchParams& params,
                                    bool exhaustive, SearchStats* stats,
                                    std::vector<SearchTraceEntry>* trace) {
  validateParams(params);
  if (z == CyclotomicInt::zero())
    throw std::invalid_argument("randNormalization: z must be nonzero");

  Root2Int zNorm = z.absSquared();
  if (zNorm == Root2Int::one()) {
    // Unit witness: the matrix diag(z, conj(z)) already has the design form
    // with r = 1, y = 0, L = 0 and certain success.
    Candidate c;
    c.r = Root2Int::one();
    c.y = CyclotomicInt::zero();
    c.Lr = 0;
    c.p = 1.0;
    c.pNumerator = Root2Int::one();
    c.designTcount = tcountOf(designMatrix(z, CyclotomicInt::zero(), 0));
    c.tc = static_cast<double>(c.designTcount);
    return c;
  }

  int L1 = exactCeilLog2(zNorm);
  std::vector<Root2Int> domain = sampleDomain(L1, params.delta);
  seededShuffle(domain, params.rngSeed);

  std::size_t budget = domain.size();
  if (!exhaustive) {
    double cap = params.sz * params.delta * static_cast<double>(L1) *
                 static_cast<double>(L1);
    double draws = std::floor(cap) + 1.0;  // the loop guard is (cnt++) <= cap
    if (draws < static_cast<double>(budget))
      budget = static_cast<std::size_t>(draws);
  }

  std::optional<Candidate> best;
  for (std::size_t i = 0; i < budget; ++i) {
    Evaluation ev = evaluate(z, domain[i]);
    if (stats) {
      ++stats->samplesTried;
      if (ev.solvable) ++stats->equationsSolved;
    }
    if (trace) {
      SearchTraceEntry entry;
      entry.r = domain[i];
      entry.solvable = ev.solvable;
      if (ev.solvable) {
        entry.Lr = ev.cand.Lr;
        entry.p = ev.cand.p;
        entry.tc = ev.cand.tc;
      }
      trace->push_back(entry);
    }
    if (!ev.solvable) continue;
    if (exhaustive && !(ev.cand.p > params.pMin)) continue;
    if (!best || betterThan(ev.cand, *best)) best = ev.cand;
  }
  return best;
}

// High-precision |conj(u)/u - e^{i theta}| for nonzero u.
double phaseDistance(const CyclotomicInt& u, double theta) {
  ensureMpDigits(80);
  auto [re, im] = complexValueMp(u);
  MpFloat den = re * re + im * im;
  MpFloat ratioRe = (re * re - im * im) / den;
  MpFloat ratioIm = MpFloat(-2) * re * im / den;
  MpFloat t(theta);
  MpFloat dr = ratioRe - cos(t);
  MpFloat di = ratioIm - sin(t);
  return sqrt(dr * dr + di * di).convert_to<double>();
}

// |e^{i k pi/4} - e^{i theta}| for the monomial designs.
double octantDistance(int k, double theta) {
  ensureMpDigits(80);
  MpFloat phi = mpPi() * MpFloat(k) / MpFloat(4);
  MpFloat t(theta);
  MpFloat dr = cos(phi) - cos(t);
  MpFloat di = sin(phi) - sin(t);
  return sqrt(dr * dr + di * di).convert_to<double>();
}

DesignResult degenerateDesign(double theta, long long k) {
  DesignResult res;
  res.degenerate = true;
  res.diagPower = mod8(k);
  res.r = Root2Int::one();
  res.y = CyclotomicInt::zero();
  res.L = 0;
  res.p = 1.0;
  res.pNumerator = Root2Int::one();
  res.normEquationsSolved = 0;
  res.pslqIterations = 0;
  res.epsilonUsed = 0.0;

  if (k % 2 == 0) {
    // diag(z, conj(z)) with the unit z = omega^{-k/2} realizes the phase
    // ratio conj(z)/z = omega^k exactly and keeps the design form.
    res.z = CyclotomicInt::omega(mod8(-(k / 2)));
    res.rz = res.z;
    res.matrix = designMatrix(res.rz, res.y, 0);
    res.achievedDistance = phaseDistance(res.rz, theta);
  } else {
    // Odd eighth turns have no conjugate-pair diagonal in the ring; the
    // monomial diag(1, omega^k) realizes the rotation exactly up to global
    // phase at the cost of a single T gate.
    res.z = CyclotomicInt::omega(mod8((1 - k) / 2)) *
            (CyclotomicInt::one() - CyclotomicInt::omega(3));
    res.rz = CyclotomicInt::one();
    RingMatrix m(2, 0);
    m.at(0, 0) = CyclotomicInt::one();
    m.at(1, 1) = CyclotomicInt::omega(res.diagPower);
    res.matrix = m;
    res.achievedDistance = octantDistance(res.diagPower, theta);
  }
  res.designTcount = tcountOf(res.matrix);
  res.expectedTcount = static_cast<double>(res.designTcount);
  return res;
}

}  // namespace

void validateParams(const SearchParams& params) {
  if (!(params.delta > 0.0) || !(params.delta <= 1.0))
    throw std::invalid_argument("SearchParams: delta must be in (0, 1]");
  if (params.sz < 1)
    throw std::invalid_argument("SearchParams: sz must be at least 1");
  if (!(params.pMin >= 0.5) || !(params.pMin < 1.0))
    throw std::invalid_argument("SearchParams: pMin must be in [0.5, 1)");
}

RingUnitary designMatrix(const CyclotomicInt& rz, const CyclotomicInt& y,
                         int L) {
  RingMatrix m(2, L);
  m.at(0, 0) = rz;
  m.at(0, 1) = y;
  m.at(1, 0) = -y.conj();
  m.at(1, 1) = rz.conj();
  m.reduce();
  return m;
}

std::vector<Root2Int> sampleDomain(int L1, double delta) {
  if (L1 < 0) throw std::invalid_argument("sampleDomain: L1 must be >= 0");
  const double bound = std::pow(2.0, delta * L1 / 2.0);
  const double sqrt2 = std::sqrt(2.0);
  const long long aMax = static_cast<long long>(std::floor(bound));
  const long long bMax = static_cast<long long>(std::floor(bound / sqrt2));
  std::vector<Root2Int> domain;
  for (long long a = -aMax; a <= aMax; ++a) {
    for (long long b = -bMax; b <= bMax; ++b) {
      if (a == 0 && b == 0) continue;
      double s = static_cast<double>(a) + static_cast<double>(b) * sqrt2;
      double t = static_cast<double>(a) - static_cast<double>(b) * sqrt2;
      if (std::abs(s) < bound && std::abs(t) < bound)
        domain.push_back(Root2Int{BigInt(a), BigInt(b)});
    }
  }
  return domain;
}

std::optional<Candidate> randNormalization1(const CyclotomicInt& z,
                                            const SearchParams& params,
                                            SearchStats* stats,
                                            std::vector<SearchTraceEntry>* trace) {
  return searchImpl(z, params, /*exhaustive=*/false, stats, trace);
}

std::optional<Candidate> randNormalization2(const CyclotomicInt& z,
                                            const SearchParams& params,
                                            SearchStats* stats,
                                            std::vector<SearchTraceEntry>* trace) {
  return searchImpl(z, params, /*exhaustive=*/true, stats, trace);
}

namespace {

// Deterministic per-attempt substream: attempt 0 keeps the caller's seed so a
// first-try design matches a standalone search with the same parameters.
std::uint64_t splitSeed(std::uint64_t seed, int attempt) {
  if (attempt == 0) return seed;
  std::uint64_t x =
      seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(attempt) + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace

DesignResult singleQubitDesign(double theta, double epsilon,
                               const SearchParams& params,
                               std::vector<SearchTraceEntry>* trace) {
  if (!std::isfinite(theta))
    throw std::invalid_argument("singleQubitDesign: theta must be finite");
  if (!(epsilon > 0.0) || !(epsilon < 1.0))
    throw std::invalid_argument("singleQubitDesign: epsilon must be in (0, 1)");
  validateParams(params);

  const long long k = std::llround(theta / kQuarterTurn);
  if (std::abs(theta - static_cast<double>(k) * kQuarterTurn) < epsilon / 2.0)
    return degenerateDesign(theta, k);

  SearchParams current = params;
  long long solvedTotal = 0;
  for (int round = 0; round < 2; ++round) {
    double eps = epsilon;
    for (int halving = 0; halving <= 16; ++halving) {
      PhaseApproximation pa = approximatePhaseDetailed({theta, eps});
      SearchStats st;
      SearchParams attemptParams = current;
      attemptParams.rngSeed = splitSeed(params.rngSeed, round * 17 + halving);
      std::optional<Candidate> cand =
          randNormalization1(pa.z, attemptParams, &st, trace);
      solvedTotal += st.equationsSolved;
      if (cand) {
        DesignResult res;
        res.z = pa.z;
        res.r = cand->r;
        res.rz = pa.z * cand->r.toCyclotomic();
        res.y = cand->y;
        res.L = cand->Lr;
        res.p = cand->p;
        res.pNumerator = cand->pNumerator;
        res.designTcount = cand->designTcount;
        res.expectedTcount = cand->tc;
        res.epsilonUsed = eps;
        res.achievedDistance = phaseDistance(res.rz, theta);
        res.pslqIterations = pa.iterations;
        res.normEquationsSolved = solvedTotal;
        res.matrix = designMatrix(res.rz, res.y, res.L);
        return res;
      }
      eps /= 2.0;
    }
    // Escalation before the single restart: a bigger sample budget alone is
    // useless once the tiny loose-precision domains are exhausted, so the
    // domain factor is also raised to its invariant maximum.
    current.sz *= 4;
    current.delta = 1.0;
  }
  std::ostringstream msg;
  msg << "singleQubitDesign: no solvable normalization found for theta="
      << theta << " after 2x17 precision steps (final sz=" << current.sz
      << ")";
  throw IterationCapExceeded(msg.str());
}

CMat2 toComplexMatrix(const RingMatrix& m) {
  if (m.n != 2)
    throw std::invalid_argument("toComplexMatrix: expected a 2x2 matrix");
  auto rows = m.complexEntries();
  return CMat2{{{rows[0][0], rows[0][1]}, {rows[1][0], rows[1][1]}}};
}

ZxzAngles decomposeZXZ(const CMat2& u) {
  // Unitarity to 1e-12: max-entry deviation of u * u^dagger from identity.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::complex<double> s = u[i][0] * std::conj(u[j][0]) +
                               u[i][1] * std::conj(u[j][1]);
      if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12)
        throw NotUnitary("decomposeZXZ: input is not unitary to 1e-12");
    }
  }

  std::complex<double> det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
  double delta = std::arg(det) / 2.0;
  std::complex<double> phase = std::polar(1.0, -delta);
  // e^{-i delta} u = [[A, B], [-conj(B), conj(A)]] up to rounding.
  std::complex<double> A = phase * u[0][0];
  std::complex<double> B = phase * u[0][1];

  // A = cos(beta/2) e^{-i(alpha+gamma)/2}, B = -i sin(beta/2) e^{-i(alpha-gamma)/2}.
  double beta = 2.0 * std::atan2(std::abs(B), std::abs(A));
  constexpr double kAxisTol = 1e-14;
  double sum = 0.0;   // alpha + gamma
  double diff = 0.0;  // alpha - gamma
  if (std::abs(A) > kAxisTol) sum = -2.0 * std::arg(A);
  if (std::abs(B) > kAxisTol) diff = -2.0 * std::arg(B) - 3.14159265358979323846;

  ZxzAngles angles;
  angles.beta = beta;
  angles.delta = delta;
  if (std::abs(B) <= kAxisTol) {
    angles.alpha = sum;  // pure z-rotation: absorb everything into alpha
    angles.gamma = 0.0;
  } else if (std::abs(A) <= kAxisTol) {
    angles.alpha = diff;
    angles.gamma = 0.0;
  } else {
    angles.alpha = (sum + diff) / 2.0;
    angles.gamma = (sum - diff) / 2.0;
  }
  return angles;
}

ZxzAngles decomposeZXZ(const RingMatrix& u) {
  return decomposeZXZ(toComplexMatrix(u));
}

CMat2 composeZXZ(const ZxzAngles& angles) {
  const std::complex<double> i01(0.0, 1.0);
  double half = angles.beta / 2.0;
  std::complex<double> a =
      std::cos(half) * std::polar(1.0, -(angles.alpha + angles.gamma) / 2.0);
  std::complex<double> b =
      -i01 * std::sin(half) *
      std::polar(1.0, -(angles.alpha - angles.gamma) / 2.0);
  std::complex<double> g = std::polar(1.0, angles.delta);
  return CMat2{{{g * a, g * b}, {g * (-std::conj(b)), g * std::conj(a)}}};
}

}  // namespace rusforge
