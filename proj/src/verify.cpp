#include "rusforge/verify.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace rusforge {

RingState RingState::basis(int nQubits, int index) {
  RingState s;
  s.nQubits = nQubits;
  s.L = 0;
  s.amp.assign(static_cast<size_t>(1) << nQubits, CyclotomicInt::zero());
  s.amp[static_cast<size_t>(index)] = CyclotomicInt::one();
  return s;
}

void RingState::applyGate(const GateOp& op) {
  const int dim = 1 << nQubits;

  if (op.kind == GN::OmegaPhase) {
    const CyclotomicInt w = CyclotomicInt::omega(op.k);
    for (CyclotomicInt& a : amp) a = a * w;
    return;
  }

  if (op.kind == GN::CNOT || op.kind == GN::CZ) {
    assert(op.q0 >= 0 && op.q0 < nQubits && op.q1 >= 0 && op.q1 < nQubits &&
           op.q0 != op.q1);
    const int cbit = 1 << (nQubits - 1 - op.q0);
    const int tbit = 1 << (nQubits - 1 - op.q1);
    for (int i = 0; i < dim; ++i) {
      if (!(i & cbit)) continue;
      if (op.kind == GN::CNOT) {
        if (i & tbit) continue;  // visit each control-set pair once
        std::swap(amp[static_cast<size_t>(i)], amp[static_cast<size_t>(i | tbit)]);
      } else if (i & tbit) {
        amp[static_cast<size_t>(i)] = -amp[static_cast<size_t>(i)];
      }
    }
    return;
  }

  assert(op.q0 >= 0 && op.q0 < nQubits);
  const int bit = 1 << (nQubits - 1 - op.q0);

  auto phaseOnSet = [&](int k) {
    const CyclotomicInt w = CyclotomicInt::omega(k);
    for (int i = 0; i < dim; ++i)
      if (i & bit) amp[static_cast<size_t>(i)] = amp[static_cast<size_t>(i)] * w;
  };

  switch (op.kind) {
    case GN::H:
      ++L;
      for (int i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const CyclotomicInt a0 = amp[static_cast<size_t>(i)];
        const CyclotomicInt a1 = amp[static_cast<size_t>(i | bit)];
        amp[static_cast<size_t>(i)] = a0 + a1;
        amp[static_cast<size_t>(i | bit)] = a0 - a1;
      }
      break;
    case GN::T: phaseOnSet(1); break;
    case GN::S: phaseOnSet(2); break;
    case GN::Z: phaseOnSet(4); break;
    case GN::Sdg: phaseOnSet(6); break;
    case GN::Tdg: phaseOnSet(7); break;
    case GN::X:
      for (int i = 0; i < dim; ++i) {
        if (i & bit) continue;
        std::swap(amp[static_cast<size_t>(i)], amp[static_cast<size_t>(i | bit)]);
      }
      break;
    case GN::Y:
      for (int i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const CyclotomicInt a0 = amp[static_cast<size_t>(i)];
        const CyclotomicInt a1 = amp[static_cast<size_t>(i | bit)];
        amp[static_cast<size_t>(i)] = a1 * CyclotomicInt::omega(6);       // -i a1
        amp[static_cast<size_t>(i | bit)] = a0 * CyclotomicInt::omega(2);  // +i a0
      }
      break;
    default:
      throw NonRingGate("applyGate: gate kind is not exactly representable");
  }
}

void RingState::applyCircuit(const CircuitN& c) {
  assert(c.nQubits == nQubits);
  for (const GateOp& op : c.ops) applyGate(op);
}

void RingState::reduce() {
  while (L > 0) {
    bool allDiv = true;
    for (const CyclotomicInt& a : amp)
      if (!a.divisibleByRoot2()) {
        allDiv = false;
        break;
      }
    if (!allDiv) break;
    for (CyclotomicInt& a : amp) a = *a.divRoot2();
    --L;
  }
}

Root2Int RingState::normSquared() const {
  Root2Int sum = Root2Int::zero();
  for (const CyclotomicInt& a : amp) sum = sum + a.absSquared();
  return sum;
}

bool RingState::normConserved() const {
  return normSquared() == Root2Int(BigInt(1) << L, 0);
}

std::vector<std::complex<double>> RingState::floatAmplitudes() const {
  const double scale = std::pow(2.0, -0.5 * L);
  std::vector<std::complex<double>> out;
  out.reserve(amp.size());
  for (const CyclotomicInt& a : amp) out.push_back(a.complexValue() * scale);
  return out;
}

RingState simulateExact(const CircuitN& c, int basisIndex) {
  RingState s = RingState::basis(c.nQubits, basisIndex);
  s.applyCircuit(c);
  return s;
}

std::vector<std::complex<double>> simulateFloat(const CircuitN& c, int basisIndex) {
  const int dim = 1 << c.nQubits;
  std::vector<std::complex<double>> amp(static_cast<size_t>(dim), 0.0);
  amp[static_cast<size_t>(basisIndex)] = 1.0;
  const double invRt2 = 1.0 / std::sqrt(2.0);
  auto omegaF = [](int k) {
    const double a = 0.25 * M_PI * k;
    return std::complex<double>(std::cos(a), std::sin(a));
  };
  for (const GateOp& op : c.ops) {
    if (op.kind == GN::OmegaPhase) {
      const std::complex<double> w = omegaF(op.k);
      for (auto& a : amp) a *= w;
      continue;
    }
    if (op.kind == GN::CNOT || op.kind == GN::CZ) {
      const int cbit = 1 << (c.nQubits - 1 - op.q0);
      const int tbit = 1 << (c.nQubits - 1 - op.q1);
      for (int i = 0; i < dim; ++i) {
        if (!(i & cbit)) continue;
        if (op.kind == GN::CNOT) {
          if (i & tbit) continue;
          std::swap(amp[static_cast<size_t>(i)], amp[static_cast<size_t>(i | tbit)]);
        } else if (i & tbit) {
          amp[static_cast<size_t>(i)] = -amp[static_cast<size_t>(i)];
        }
      }
      continue;
    }
    const int bit = 1 << (c.nQubits - 1 - op.q0);
    auto phaseOnSet = [&](int k) {
      const std::complex<double> w = omegaF(k);
      for (int i = 0; i < dim; ++i)
        if (i & bit) amp[static_cast<size_t>(i)] *= w;
    };
    switch (op.kind) {
      case GN::H:
        for (int i = 0; i < dim; ++i) {
          if (i & bit) continue;
          const std::complex<double> a0 = amp[static_cast<size_t>(i)];
          const std::complex<double> a1 = amp[static_cast<size_t>(i | bit)];
          amp[static_cast<size_t>(i)] = (a0 + a1) * invRt2;
          amp[static_cast<size_t>(i | bit)] = (a0 - a1) * invRt2;
        }
        break;
      case GN::T: phaseOnSet(1); break;
      case GN::S: phaseOnSet(2); break;
      case GN::Z: phaseOnSet(4); break;
      case GN::Sdg: phaseOnSet(6); break;
      case GN::Tdg: phaseOnSet(7); break;
      case GN::X:
        for (int i = 0; i < dim; ++i) {
          if (i & bit) continue;
          std::swap(amp[static_cast<size_t>(i)], amp[static_cast<size_t>(i | bit)]);
        }
        break;
      case GN::Y:
        for (int i = 0; i < dim; ++i) {
          if (i & bit) continue;
          const std::complex<double> a0 = amp[static_cast<size_t>(i)];
          const std::complex<double> a1 = amp[static_cast<size_t>(i | bit)];
          amp[static_cast<size_t>(i)] = std::complex<double>(0, -1) * a1;
          amp[static_cast<size_t>(i | bit)] = std::complex<double>(0, 1) * a0;
        }
        break;
      default:
        throw NonRingGate("simulateFloat: gate kind is not exactly representable");
    }
  }
  return amp;
}

namespace {

bool unitaryToTol(const CMat2& m) {
  auto dot = [&m](int r1, int r2) {
    return std::conj(m[static_cast<size_t>(r1)][0]) * m[static_cast<size_t>(r2)][0] +
           std::conj(m[static_cast<size_t>(r1)][1]) * m[static_cast<size_t>(r2)][1];
  };
  return std::abs(dot(0, 0) - std::complex<double>(1)) <= 1e-12 &&
         std::abs(dot(1, 1) - std::complex<double>(1)) <= 1e-12 &&
         std::abs(dot(0, 1)) <= 1e-12;
}

}  // namespace

double distance(const CMat2& u, const CMat2& v) {
  if (!unitaryToTol(u) || !unitaryToTol(v))
    throw NotUnitary("distance: inputs must be unitary to 1e-12");
  std::complex<double> tr = 0.0;
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) tr += std::conj(u[i][j]) * v[i][j];
  const double a = std::abs(tr);
  if (a == 0.0) return 1.0;
  const std::complex<double> phi = tr / a;
  // ||v - phi u||_F^2 == 4 - 2 |tr|, so this equals sqrt(1 - |tr|/2) but
  // stays accurate when the difference is tiny.
  double sq = 0.0;
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 2; ++j) sq += std::norm(v[i][j] - phi * u[i][j]);
  return std::sqrt(sq) / 2.0;
}

namespace {

// Reduce num / 2^e to lowest terms.
void reduceDyadic(Root2Int& num, int& e) {
  if (num.isZero()) {
    e = 0;
    return;
  }
  while (e > 0 && num.a % 2 == 0 && num.b % 2 == 0) {
    num.a /= 2;
    num.b /= 2;
    --e;
  }
}

int phaseMod8(int k) { return ((k % 8) + 8) % 8; }

}  // namespace

std::pair<BranchReport, BranchReport> validateProtocol(const RusProtocol& p,
                                                       double targetTheta) {
  const CircuitN design = toCircuitN(p.design);
  if (design.nQubits != 2)
    throw ProtocolMismatch("validateProtocol: design must act on two qubits");
  if (p.successOutcome != 0 && p.successOutcome != 1)
    throw ProtocolMismatch("validateProtocol: success outcome must be 0 or 1");
  // Columns of the design for target basis inputs |0>|0> and |1>|0>.
  const RingState col0 = simulateExact(design, 0);
  const RingState col1 = simulateExact(design, 2);
  if (!col0.normConserved() || !col1.normConserved() || col0.L != col1.L)
    throw ProtocolMismatch("validateProtocol: simulation lost normalization");
  const int Lc = col0.L;

  std::array<BranchReport, 2> reports;
  for (int outcome = 0; outcome < 2; ++outcome) {
    BranchReport r;
    r.outcome = outcome;
    RingMatrix m(2, Lc);
    m.at(0, 0) = col0.amp[static_cast<size_t>(outcome)];
    m.at(1, 0) = col0.amp[static_cast<size_t>(2 + outcome)];
    m.at(0, 1) = col1.amp[static_cast<size_t>(outcome)];
    m.at(1, 1) = col1.amp[static_cast<size_t>(2 + outcome)];
    m.reduce();
    r.inducedUnitary = m;
    const Root2Int prob0 = col0.amp[static_cast<size_t>(outcome)].absSquared() +
                           col0.amp[static_cast<size_t>(2 + outcome)].absSquared();
    const Root2Int prob1 = col1.amp[static_cast<size_t>(outcome)].absSquared() +
                           col1.amp[static_cast<size_t>(2 + outcome)].absSquared();
    if (!(prob0 == prob1))
      throw ProtocolMismatch(
          "validateProtocol: outcome probability depends on the input state");
    Root2Int num = prob0;
    int e = Lc;
    reduceDyadic(num, e);
    r.probabilityNumerator = num;
    r.probabilityDenomExp = e;
    r.probability = std::ldexp(num.toDouble(), -e);
    reports[static_cast<size_t>(outcome)] = r;
  }

  BranchReport& success = reports[static_cast<size_t>(p.successOutcome)];
  BranchReport& failure = reports[static_cast<size_t>(1 - p.successOutcome)];

  // Success branch: must equal the stored diagonal operator exactly, and its
  // probability must reproduce the stored numerator.
  RingMatrix expectedSuccess = p.successUnitary;
  expectedSuccess.reduce();
  success.matchesExpected = success.inducedUnitary == expectedSuccess;
  {
    Root2Int claimed = p.pNumerator;
    int e = p.L;
    reduceDyadic(claimed, e);
    if (!(claimed == success.probabilityNumerator) ||
        e != success.probabilityDenomExp)
      success.matchesExpected = false;
  }
  if (success.matchesExpected) {
    const CyclotomicInt u = success.inducedUnitary.at(0, 0);
    const CyclotomicInt uPrime = success.inducedUnitary.at(1, 1);
    success.distanceToTarget =
        (u.isZero() || uPrime.isZero()) ? 1.0
                                        : rotationDistance(u, uPrime, targetTheta);
  }

  // Failure branch: the twirled design leaves diag(-conj y, i^{d1} conj y),
  // the S^{d1} Z operator (up to the common factor conj y) that the stored
  // correction undoes.
  const CyclotomicInt y = p.v.at(0, 1);
  RingMatrix expectedFailure(2, p.v.L);
  expectedFailure.at(0, 0) = -y.conj();
  expectedFailure.at(1, 1) = CyclotomicInt::omega(phaseMod8(2 * p.d1)) * y.conj();
  expectedFailure.reduce();
  failure.matchesExpected = failure.inducedUnitary == expectedFailure;

  if (!success.matchesExpected || !failure.matchesExpected)
    throw ProtocolMismatch(
        "validateProtocol: branch operators diverge from the claim\n"
        "  success expected: " + expectedSuccess.toString() +
        "\n  success simulated: " + success.inducedUnitary.toString() +
        "\n  failure expected: " + expectedFailure.toString() +
        "\n  failure simulated: " + failure.inducedUnitary.toString());

  return {success, failure};
}

namespace {

// Reduce x into (-pi, pi].
MpFloat reduceAngle(MpFloat x) {
  const MpFloat twoPi = 2 * mpPi();
  x -= twoPi * floor(x / twoPi + MpFloat(1) / 2);
  if (x <= -mpPi()) x += twoPi;  // boundary tie from floor rounding
  return x;
}

}  // namespace

MpFloat realizedAngle(const CyclotomicInt& u, const CyclotomicInt& uPrime) {
  ensureMpDigits(64);
  if (u.isZero() || uPrime.isZero())
    throw std::invalid_argument("realizedAngle requires nonzero diagonal entries");
  const auto [re0, im0] = complexValueMp(u);
  const auto [re1, im1] = complexValueMp(uPrime);
  return reduceAngle(atan2(im1, re1) - atan2(im0, re0));
}

double rotationDistanceAngles(const MpFloat& thetaPrime, const MpFloat& theta) {
  ensureMpDigits(64);
  const MpFloat half = reduceAngle(thetaPrime - theta) / 2;
  MpFloat inner = 1 - abs(cos(half));
  if (inner < 0) inner = 0;
  return sqrt(inner).convert_to<double>();
}

double rotationDistance(const CyclotomicInt& u, const CyclotomicInt& uPrime,
                        const MpFloat& theta) {
  return rotationDistanceAngles(realizedAngle(u, uPrime), theta);
}

double rotationDistance(const CyclotomicInt& u, const CyclotomicInt& uPrime,
                        double theta) {
  ensureMpDigits(64);
  return rotationDistance(u, uPrime, MpFloat(theta));
}

double expectedCost(double designTcount, double correctionTcount, double pSuccess) {
  assert(pSuccess > 0 && pSuccess <= 1);
  return (designTcount + correctionTcount * (1 - pSuccess)) / pSuccess;
}

}  // namespace rusforge
