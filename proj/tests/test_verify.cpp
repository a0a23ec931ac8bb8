#include "doctest.h"

#include "rusforge/verify.hpp"

#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rusforge/pipeline.hpp"

using namespace rusforge;
using testutil::cd;

namespace {

// Exact comparison of a state against a matrix column after rescaling both to
// a common denominator exponent.
void checkStateEqualsColumn(const RingState& s, const RingMatrix& m, int col) {
  REQUIRE(static_cast<int>(s.amp.size()) == m.n);
  const int Lmax = std::max(s.L, m.L);
  for (int i = 0; i < m.n; ++i) {
    CyclotomicInt lhs = s.amp[static_cast<size_t>(i)] *
                        CyclotomicInt::root2Pow(Lmax - s.L);
    CyclotomicInt rhs = m.at(i, col) * CyclotomicInt::root2Pow(Lmax - m.L);
    CHECK(lhs == rhs);
  }
}

CircuitN randomCircuit(std::mt19937_64& rng, int nQubits, int len) {
  // Two-qubit kinds need two distinct wires; exclude them on one qubit.
  std::uniform_int_distribution<int> kindDist(0, nQubits >= 2 ? 10 : 8);
  std::uniform_int_distribution<int> qubitDist(0, nQubits - 1);
  std::uniform_int_distribution<int> phaseDist(0, 7);
  CircuitN c;
  c.nQubits = nQubits;
  for (int i = 0; i < len; ++i) {
    GateOp op;
    op.kind = static_cast<GN>(kindDist(rng));
    op.q0 = qubitDist(rng);
    op.q1 = -1;
    op.k = 0;
    if (op.kind == GN::CNOT || op.kind == GN::CZ) {
      do {
        op.q1 = qubitDist(rng);
      } while (op.q1 == op.q0);
    } else if (op.kind == GN::OmegaPhase) {
      op.k = phaseDist(rng);
    }
    c.ops.push_back(op);
  }
  return c;
}

}  // namespace

TEST_CASE("basis states and elementary gate action") {
  RingState s = RingState::basis(2, 0);
  CHECK(s.normSquared() == Root2Int::one());
  CHECK(s.normConserved());

  // H on qubit 0: (|00> + |10>)/sqrt2.
  s.applyGate(GateOp{GN::H, 0, -1, 0});
  CHECK(s.L == 1);
  CHECK(s.amp[0] == CyclotomicInt::one());
  CHECK(s.amp[1].isZero());
  CHECK(s.amp[2] == CyclotomicInt::one());
  CHECK(s.amp[3].isZero());
  CHECK(s.normConserved());

  // CNOT(0,1) completes a Bell state: (|00> + |11>)/sqrt2.
  s.applyGate(GateOp{GN::CNOT, 0, 1, 0});
  CHECK(s.amp[0] == CyclotomicInt::one());
  CHECK(s.amp[2].isZero());
  CHECK(s.amp[3] == CyclotomicInt::one());
  CHECK(s.normConserved());

  // T on qubit 1 phases only the |.1> components.
  s.applyGate(GateOp{GN::T, 1, -1, 0});
  CHECK(s.amp[0] == CyclotomicInt::one());
  CHECK(s.amp[3] == CyclotomicInt::omega(1));

  // Two H's in a row double the denominator, reduce() strips it again.
  RingState t = RingState::basis(1, 0);
  t.applyGate(GateOp{GN::H, 0, -1, 0});
  t.applyGate(GateOp{GN::H, 0, -1, 0});
  CHECK(t.L == 2);
  CHECK(t.normConserved());
  t.reduce();
  CHECK(t.L == 0);
  CHECK(t.amp[0] == CyclotomicInt::one());
  CHECK(t.amp[1].isZero());
  CHECK(t.normConserved());
}

TEST_CASE("exact simulation matches circuit matrices column by column") {
  std::mt19937_64 rng(20240817);
  for (int nQubits : {1, 2, 3}) {
    for (int trial = 0; trial < 12; ++trial) {
      CircuitN c = randomCircuit(rng, nQubits, 18);
      RingMatrix u = evalCircuitN(c);
      for (int col = 0; col < (1 << nQubits); ++col) {
        RingState s = simulateExact(c, col);
        checkStateEqualsColumn(s, u, col);
      }
    }
  }
}

TEST_CASE("norm is conserved exactly through long random histories") {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 30; ++trial) {
    const int nQubits = 2 + (trial % 2);
    CircuitN c = randomCircuit(rng, nQubits, 30);
    RingState s = RingState::basis(nQubits, trial % (1 << nQubits));
    for (const GateOp& op : c.ops) {
      s.applyGate(op);
      REQUIRE(s.normConserved());
    }
    s.reduce();
    CHECK(s.normConserved());
  }
}

TEST_CASE("float amplitudes agree with a complex oracle") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    CircuitN c = randomCircuit(rng, 2, 25);
    const int start = trial % 4;
    RingState s = simulateExact(c, start);
    std::vector<cd> v(4, cd(0));
    v[static_cast<size_t>(start)] = cd(1);
    for (const GateOp& op : c.ops) v = testutil::cMatVec(testutil::oracleOp(op, 2), v);
    auto got = s.floatAmplitudes();
    for (int i = 0; i < 4; ++i)
      CHECK(std::abs(got[static_cast<size_t>(i)] - v[static_cast<size_t>(i)]) < 1e-9);
  }
}

TEST_CASE("rotation distance at ordinary scales matches a double oracle") {
  setMpDigits(64);
  // u = 1, u' = i realizes Rz(pi/2) up to phase.
  const CyclotomicInt one = CyclotomicInt::one();
  const CyclotomicInt i = CyclotomicInt::omega(2);
  const double theta = 0.5;
  const double delta = M_PI / 2 - theta;
  const double expect = std::sqrt(1.0 - std::abs(std::cos(delta / 2)));
  CHECK(rotationDistance(one, i, theta) == doctest::Approx(expect).epsilon(1e-12));

  // Angle wrap-around and global phase invariance.
  CHECK(rotationDistance(one, i, theta - 4 * M_PI) ==
        doctest::Approx(expect).epsilon(1e-12));
  const CyclotomicInt w3 = CyclotomicInt::omega(3);
  CHECK(rotationDistance(w3, w3 * i, theta) == doctest::Approx(expect).epsilon(1e-12));

  CHECK(realizedAngle(one, CyclotomicInt::omega(3)).convert_to<double>() ==
        doctest::Approx(3 * M_PI / 4).epsilon(1e-12));
  CHECK(realizedAngle(CyclotomicInt::omega(7), one).convert_to<double>() ==
        doctest::Approx(M_PI / 4).epsilon(1e-12));
}

TEST_CASE("rotation distance resolves angles far below double rounding") {
  setMpDigits(64);
  const CyclotomicInt one = CyclotomicInt::one();
  const CyclotomicInt w = CyclotomicInt::omega(1);

  // Exact hit: diag(1, w) is Rz(pi/4) on the nose.
  const MpFloat exact = mpPi() / 4;
  CHECK(rotationDistance(one, w, exact) < 1e-25);

  // Tiny offset: d ~ |delta| / (2 sqrt(2)), far below the resolution of a
  // double-precision 1 - cos computation.
  const double off = 1e-13;
  const MpFloat theta = mpPi() / 4 + MpFloat(off);
  const double d = rotationDistance(one, w, theta);
  const double asym = off / (2 * std::sqrt(2.0));
  CHECK(d == doctest::Approx(asym).epsilon(1e-3));

  // The same offset through the double-theta overload.
  const double dd = rotationDistanceAngles(MpFloat(1e-14), MpFloat(0));
  CHECK(dd == doctest::Approx(1e-14 / (2 * std::sqrt(2.0))).epsilon(1e-3));
}

TEST_CASE("expected repeat-until-success cost") {
  CHECK(expectedCost(10, 2, 0.5) == doctest::Approx(22.0));
  CHECK(expectedCost(50, 2, 1.0) == doctest::Approx(50.0));
  CHECK(expectedCost(58, 2, 0.9885) == doctest::Approx(58.6981).epsilon(1e-4));

  // Monte-Carlo cross check with a geometric number of attempts: the sample
  // mean must land within three standard errors of the formula.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double p = 0.7, design = 12, corr = 3;
  double total = 0, totalSq = 0;
  const int runs = 1000000;
  for (int run = 0; run < runs; ++run) {
    double cost = 0;
    for (;;) {
      cost += design;
      if (unif(rng) < p) break;
      cost += corr;
    }
    total += cost;
    totalSq += cost * cost;
  }
  const double mean = total / runs;
  const double var = totalSq / runs - mean * mean;
  const double sigma = std::sqrt(var / runs);
  CHECK(std::abs(mean - expectedCost(design, corr, p)) <= 3 * sigma);
}

namespace {

CMat2 randomUnitary(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double alpha = 2 * M_PI * unif(rng);
  const double beta = 2 * M_PI * unif(rng);
  const double delta = 2 * M_PI * unif(rng);
  const double t = std::asin(std::sqrt(unif(rng)));
  const cd phase = std::polar(1.0, delta);
  const double c = std::cos(t), s = std::sin(t);
  return CMat2{{{phase * std::polar(c, alpha), phase * std::polar(s, beta)},
                {phase * -std::polar(s, -beta), phase * std::polar(c, -alpha)}}};
}

CMat2 rzMatrix(double theta) {
  return CMat2{{{std::polar(1.0, -theta / 2), 0.0},
                {0.0, std::polar(1.0, theta / 2)}}};
}

RingUnitary goldenDesign() {
  return designMatrix(CyclotomicInt{-603, 1694, -1510, -7501},
                      CyclotomicInt{755, -1973, 860, -358}, 26);
}

}  // namespace

TEST_CASE("phase-invariant distance between unitaries") {
  std::mt19937_64 rng(1213);
  for (int trial = 0; trial < 50; ++trial) {
    const CMat2 u = randomUnitary(rng);
    CHECK(distance(u, u) <= 1e-12);
    // global phases are invisible
    CMat2 v = u;
    const cd phase = std::polar(1.0, 2 * M_PI * 0.01 * trial);
    for (auto& row : v)
      for (auto& x : row) x *= phase;
    CHECK(distance(u, v) <= 1e-7);
  }

  // d(I, Z) is maximal; d(I, Rz(theta)) matches the angle formula.
  const CMat2 eye = rzMatrix(0);
  CHECK(distance(eye, CMat2{{{1.0, 0.0}, {0.0, -1.0}}}) == doctest::Approx(1.0));
  std::uniform_real_distribution<double> angle(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double theta = angle(rng);
    CHECK(distance(eye, rzMatrix(theta)) ==
          doctest::Approx(rotationDistanceAngles(MpFloat(theta), MpFloat(0)))
              .epsilon(1e-9));
  }

  // resolution far below the rounding floor of 1 - |tr|/2 in doubles
  const double off = 2e-12;
  const double d = distance(rzMatrix(0), rzMatrix(off));
  CHECK(d == doctest::Approx(off / (2 * std::sqrt(2.0))).epsilon(1e-3));

  CMat2 shear{{{1.0, 1.0}, {0.0, 1.0}}};
  CHECK_THROWS_AS(distance(shear, eye), NotUnitary);
  CHECK_THROWS_AS(distance(eye, shear), NotUnitary);
}

TEST_CASE("distance satisfies the metric properties") {
  std::mt19937_64 rng(141414);
  for (int trial = 0; trial < 200; ++trial) {
    const CMat2 u = randomUnitary(rng);
    const CMat2 v = randomUnitary(rng);
    const CMat2 w = randomUnitary(rng);
    const double duv = distance(u, v);
    const double dvu = distance(v, u);
    const double dvw = distance(v, w);
    const double duw = distance(u, w);
    CHECK(duv >= 0.0);
    CHECK(duv <= 1.0);
    CHECK(duv == doctest::Approx(dvu).epsilon(1e-12));
    CHECK(duw <= duv + dvw + 1e-12);
  }
}

TEST_CASE("float simulator agrees with the exact simulator") {
  std::mt19937_64 rng(171717);
  for (int trial = 0; trial < 10; ++trial) {
    const int nQubits = 2 + (trial % 3);
    CircuitN c = randomCircuit(rng, nQubits, 200);
    const int start = trial % (1 << nQubits);
    RingState exact = simulateExact(c, start);
    REQUIRE(exact.L <= 64);
    const auto expect = exact.floatAmplitudes();
    const auto got = simulateFloat(c, start);
    REQUIRE(got.size() == expect.size());
    for (size_t i = 0; i < got.size(); ++i)
      CHECK(std::abs(got[i] - expect[i]) <= 1e-10);
  }
}

TEST_CASE("non-ring gates are rejected by both simulators") {
  CircuitN c;
  c.nQubits = 1;
  c.ops.push_back(GateOp{static_cast<GN>(99), 0, -1, 0});
  CHECK_THROWS_AS(simulateExact(c, 0), NonRingGate);
  CHECK_THROWS_AS(simulateFloat(c, 0), NonRingGate);
}

TEST_CASE("protocol validation confirms both branches of the published design") {
  setMpDigits(64);
  const RingUnitary v = goldenDesign();
  const double theta = M_PI / 64;

  for (RusVariant variant : {RusVariant::Plain, RusVariant::Best}) {
    RusProtocol proto = rusSynthesis(v, variant);
    auto [success, failure] = validateProtocol(proto, theta);
    CHECK(success.outcome == 0);
    CHECK(failure.outcome == 1);
    CHECK(success.matchesExpected);
    CHECK(failure.matchesExpected);
    CHECK(success.probability == doctest::Approx(0.988509).epsilon(1e-4));
    CHECK(success.distanceToTarget <= 1.1e-12);
    // exact probabilities over the same denominator sum to one
    const int e = std::max(success.probabilityDenomExp, failure.probabilityDenomExp);
    const BigInt scaleS = BigInt(1) << (e - success.probabilityDenomExp);
    const BigInt scaleF = BigInt(1) << (e - failure.probabilityDenomExp);
    CHECK(success.probabilityNumerator.a * scaleS +
              failure.probabilityNumerator.a * scaleF ==
          BigInt(1) << e);
    CHECK(success.probabilityNumerator.b * scaleS +
              failure.probabilityNumerator.b * scaleF ==
          0);
  }
}

TEST_CASE("protocol validation passes randomized pipeline designs") {
  std::mt19937_64 rng(0x76616c69ULL);
  std::uniform_real_distribution<double> angle(0.1, 1.4);
  int ran = 0;
  for (int i = 0; i < 8 && ran < 5; ++i) {
    const double theta = angle(rng);
    const double eps = (i % 2 == 0) ? 1e-3 : 1e-4;
    SearchParams params;
    params.rngSeed = 9000 + i;
    DesignResult res = singleQubitDesign(theta, eps, params);
    if (res.degenerate || res.p <= 0.5) continue;
    ++ran;
    RusProtocol proto = rusSynthesis(res.matrix, RusVariant::Best);
    auto [success, failure] = validateProtocol(proto, theta);
    CHECK(success.matchesExpected);
    CHECK(failure.matchesExpected);
    CHECK(success.distanceToTarget <= eps);
    CHECK(success.probability == doctest::Approx(res.p).epsilon(1e-12));
  }
  CHECK(ran >= 3);
}

TEST_CASE("protocol validation handles the trivial rotation") {
  RusProtocol proto = rusSynthesis(RingMatrix::identity(2));
  auto [success, failure] = validateProtocol(proto, 0.0);
  CHECK(success.matchesExpected);
  CHECK(failure.matchesExpected);
  CHECK(success.probability == doctest::Approx(1.0));
  CHECK(failure.probability == doctest::Approx(0.0));
  CHECK(failure.probabilityNumerator.isZero());
  CHECK(success.distanceToTarget <= 1e-15);
}

TEST_CASE("protocol validation rejects tampered designs") {
  const RingUnitary v = goldenDesign();
  RusProtocol proto = rusSynthesis(v, RusVariant::Plain);

  RusProtocol extraPhase = proto;
  extraPhase.design.push_back(Gate2Q::onTarget(Gate1Q{G1::T, 0}));
  CHECK_THROWS_AS(validateProtocol(extraPhase, M_PI / 64), ProtocolMismatch);

  RusProtocol flipped = proto;
  flipped.design.push_back(Gate2Q::onAncilla(Gate1Q{G1::Z, 0}));
  CHECK_THROWS_AS(validateProtocol(flipped, M_PI / 64), ProtocolMismatch);

  RusProtocol wrongClaim = proto;
  wrongClaim.pNumerator = wrongClaim.pNumerator + Root2Int::one();
  CHECK_THROWS_AS(validateProtocol(wrongClaim, M_PI / 64), ProtocolMismatch);
}
