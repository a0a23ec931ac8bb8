#include "rusforge/rus2q.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <random>

#include <boost/multiprecision/miller_rabin.hpp>

namespace rusforge {
namespace {

int mod8(int k) {
  int r = k % 8;
  return r < 0 ? r + 8 : r;
}

// Diagonal phase power T^k (k mod 8) as plain gates; one T gate iff k is odd.
std::vector<Gate1Q> expandTPower(int k) {
  switch (mod8(k)) {
    case 0: return {};
    case 1: return {{G1::T, 0}};
    case 2: return {{G1::S, 0}};
    case 3: return {{G1::S, 0}, {G1::T, 0}};
    case 4: return {{G1::Z, 0}};
    case 5: return {{G1::Z, 0}, {G1::T, 0}};
    case 6: return {{G1::Sdg, 0}};
    default: return {{G1::Tdg, 0}};
  }
}

GN toGN(G1 g) {
  switch (g) {
    case G1::H: return GN::H;
    case G1::T: return GN::T;
    case G1::Tdg: return GN::Tdg;
    case G1::S: return GN::S;
    case G1::Sdg: return GN::Sdg;
    case G1::X: return GN::X;
    case G1::Y: return GN::Y;
    case G1::Z: return GN::Z;
    case G1::OmegaPhase: return GN::OmegaPhase;
  }
  return GN::H;
}

void appendOn(Circuit2& out, bool ancilla, const std::vector<Gate1Q>& gs) {
  for (const Gate1Q& g : gs)
    out.push_back(ancilla ? Gate2Q::onAncilla(g) : Gate2Q::onTarget(g));
}

// T cost of the phase-gadget realization of a controlled monomial
// w^j S^a X^b: one T for the control phase when j+a is odd, two for the
// ancilla pair when a is odd.
int monomialCost(int j, int a, int) {
  return ((j + a) % 2 != 0 ? 1 : 0) + (a % 2 != 0 ? 2 : 0);
}

bool isPlainPauli(const CliffordGate& g, Pauli& p) {
  for (Pauli q : {Pauli::X, Pauli::Y, Pauli::Z}) {
    if (g.mat() == pauliMatrix(q)) {
      p = q;
      return true;
    }
  }
  return false;
}

// Gadget for a controlled monomial, application order.  Operator product:
//   (T^{j+a} (x) I) (I (x) T^{a}) CNOT (I (x) T^{-a}) CNOT CNOT^b.
void emitControlledMonomial(Circuit2& out, const CliffordGate& m) {
  Pauli p = Pauli::I;
  if (isPlainPauli(m, p)) {
    out.push_back(Gate2Q::controlledPauli(p));
    return;
  }
  int j = 0, a = 0, b = 0;
  m.monomialParts(j, a, b);
  if (monomialCost(j, a, b) == 0) {
    out.push_back(Gate2Q::controlledClifford(m));
    return;
  }
  if (b != 0) out.push_back(Gate2Q::controlledPauli(Pauli::X));
  int c3 = mod8(-a);
  if (c3 != 0) {
    out.push_back(Gate2Q::controlledPauli(Pauli::X));
    appendOn(out, true, expandTPower(c3));
    out.push_back(Gate2Q::controlledPauli(Pauli::X));
  }
  appendOn(out, true, expandTPower(a));
  appendOn(out, false, expandTPower(j + a));
}

// Fixed two-T controlled-H template, application order.  Operator product
// (I (x) S'HT') CNOT (I (x) THS) evaluates to diag(I, H) exactly.
void emitControlledH(Circuit2& out) {
  out.push_back(Gate2Q::onAncilla({G1::S, 0}));
  out.push_back(Gate2Q::onAncilla({G1::H, 0}));
  out.push_back(Gate2Q::onAncilla({G1::T, 0}));
  out.push_back(Gate2Q::controlledPauli(Pauli::X));
  out.push_back(Gate2Q::onAncilla({G1::Tdg, 0}));
  out.push_back(Gate2Q::onAncilla({G1::H, 0}));
  out.push_back(Gate2Q::onAncilla({G1::Sdg, 0}));
}

// Shortest-cost realization of /\(g) over all Cliffords g.  Blocks of the
// form /\(mu), mu in the free subgroup F = {w^{2k} P : P Pauli}, are free;
// a w phase on the control costs one T; a conjugated template c h c^dag with
// h in {w^-1 S, H} costs two.  Since F is normal in the Clifford group, the
// search lives on the quotient (12 cosets): a Dijkstra pass gives, for every
// g, the cheapest word  g = mu * s_1 * ... * s_k  over those step elements.
struct WrapStep {
  int kind = 0;       // 0: w phase step, 1: conjugated template step
  int conj = 0;       // Clifford index of c (kind 1)
  int h = 0;          // 0: w^-1 S, 1: H (kind 1)
  int prevCoset = 0;
};

struct WrapTable {
  std::vector<int> cosetOf;    // element index -> coset id
  std::vector<int> dist;       // coset id -> minimal T cost
  std::vector<WrapStep> via;   // last step on a cheapest path
  int omegaIdx = 0;
  int hIdx[2] = {0, 0};        // element indices of w^-1 S and H
  int startCoset = 0;
};

const WrapTable& wrapTable() {
  static const WrapTable table = [] {
    const CliffordTable& ct = CliffordTable::instance();
    const int n = ct.size();
    WrapTable wt;
    wt.cosetOf.assign(static_cast<size_t>(n), -1);
    std::vector<int> freeSub;
    for (int i = 0; i < n; ++i) {
      const auto& e = ct.entry(i);
      if (e.monomial && e.a % 2 == 0 && (e.j + e.a) % 2 == 0)
        freeSub.push_back(i);
    }
    std::vector<int> reps;
    for (int i = 0; i < n; ++i) {
      if (wt.cosetOf[static_cast<size_t>(i)] >= 0) continue;
      int id = static_cast<int>(reps.size());
      reps.push_back(i);
      for (int mu : freeSub)
        wt.cosetOf[static_cast<size_t>(ct.mul(i, mu))] = id;
    }
    const int nc = static_cast<int>(reps.size());
    wt.omegaIdx = ct.indexOfGate(G1::OmegaPhase, 1);
    wt.hIdx[0] =
        ct.mul(ct.indexOfGate(G1::OmegaPhase, 7), ct.indexOfGate(G1::S));
    wt.hIdx[1] = ct.indexOfGate(G1::H);
    struct EdgeDef {
      int elem = 0;
      int cost = 0;
      WrapStep step;
    };
    std::vector<EdgeDef> edges;
    edges.push_back({wt.omegaIdx, 1, WrapStep{0, 0, 0, 0}});
    for (int c : ct.classReps())
      for (int h = 0; h < 2; ++h) {
        int e = ct.mul(ct.mul(c, wt.hIdx[h]), ct.adjointIndex(c));
        edges.push_back({e, 2, WrapStep{1, c, h, 0}});
      }
    wt.dist.assign(static_cast<size_t>(nc), std::numeric_limits<int>::max());
    wt.via.assign(static_cast<size_t>(nc), WrapStep{});
    wt.startCoset = wt.cosetOf[static_cast<size_t>(ct.identityIndex())];
    using QE = std::pair<int, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
    wt.dist[static_cast<size_t>(wt.startCoset)] = 0;
    pq.push({0, wt.startCoset});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d != wt.dist[static_cast<size_t>(u)]) continue;
      for (const EdgeDef& ed : edges) {
        int v = wt.cosetOf[static_cast<size_t>(
            ct.mul(reps[static_cast<size_t>(u)], ed.elem))];
        if (d + ed.cost < wt.dist[static_cast<size_t>(v)]) {
          wt.dist[static_cast<size_t>(v)] = d + ed.cost;
          wt.via[static_cast<size_t>(v)] = ed.step;
          wt.via[static_cast<size_t>(v)].prevCoset = u;
          pq.push({wt.dist[static_cast<size_t>(v)], v});
        }
      }
    }
    return wt;
  }();
  return table;
}

struct WrapGadget {
  Circuit2 circ;
  int cost = 0;
};

WrapGadget buildWrap(const CliffordGate& g) {
  const WrapTable& wt = wrapTable();
  const CliffordTable& ct = CliffordTable::instance();
  WrapGadget w;
  int cos = wt.cosetOf[static_cast<size_t>(g.idx)];
  w.cost = wt.dist[static_cast<size_t>(cos)];
  std::vector<WrapStep> steps;
  while (cos != wt.startCoset) {
    steps.push_back(wt.via[static_cast<size_t>(cos)]);
    cos = steps.back().prevCoset;
  }
  std::reverse(steps.begin(), steps.end());
  CliffordGate prod = CliffordGate::identity();
  for (const WrapStep& s : steps) {
    int e = s.kind == 0 ? wt.omegaIdx
                        : ct.mul(ct.mul(s.conj, wt.hIdx[s.h]),
                                 ct.adjointIndex(s.conj));
    prod = prod * CliffordGate{e};
  }
  const CliffordGate mu = g * prod.adjoint();
  // g = mu * s_1 * ... * s_k as operators; emit in application order.
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    if (it->kind == 0) {
      w.circ.push_back(Gate2Q::onTarget({G1::T, 0}));
    } else {
      CliffordGate c{it->conj};
      appendOn(w.circ, true, c.adjoint().word());
      if (it->h == 0)
        emitControlledMonomial(w.circ, CliffordGate{wt.hIdx[0]});
      else
        emitControlledH(w.circ);
      appendOn(w.circ, true, c.word());
    }
  }
  emitControlledMonomial(w.circ, mu);
  return w;
}

Circuit1 adjointCircuit1(const Circuit1& c) {
  Circuit1 out;
  out.reserve(c.size());
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    Gate1Q g = *it;
    switch (g.kind) {
      case G1::T: g.kind = G1::Tdg; break;
      case G1::Tdg: g.kind = G1::T; break;
      case G1::S: g.kind = G1::Sdg; break;
      case G1::Sdg: g.kind = G1::S; break;
      case G1::OmegaPhase: g.k = mod8(-g.k); break;
      default: break;  // H, X, Y, Z are self-adjoint
    }
    out.push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Four squares.

using boost::multiprecision::miller_rabin_test;
using boost::multiprecision::powm;

BigInt randBelow(std::mt19937_64& rng, const BigInt& bound) {
  if (bound <= 0) return 0;
  // Rejection sampling over whole 64-bit limbs.
  int bits = 0;
  for (BigInt t = bound; t > 0; t >>= 1) ++bits;
  int limbs = (bits + 63) / 64;
  for (;;) {
    BigInt x = 0;
    for (int i = 0; i < limbs; ++i) x = (x << 64) | BigInt(rng());
    x &= (BigInt(1) << bits) - 1;
    if (x <= bound) return x;
  }
}

bool twoSquaresPrime(const BigInt& p, std::mt19937_64& rng, BigInt& c,
                     BigInt& d) {
  // p prime, p % 4 == 1: find x with x^2 = -1 (mod p), then descend.
  BigInt x = 0;
  for (int tries = 0; tries < 64; ++tries) {
    BigInt u = 2 + randBelow(rng, p - 4);
    x = powm(u, (p - 1) / 4, p);
    if ((x * x) % p == p - 1) break;
    x = 0;
  }
  if (x == 0) return false;
  BigInt r0 = p, r1 = x;
  while (r1 * r1 > p) {
    BigInt r2 = r0 % r1;
    r0 = r1;
    r1 = r2;
  }
  c = r1;
  BigInt rest = p - c * c;
  BigInt droot = sqrt(rest);
  if (droot * droot != rest) return false;
  d = droot;
  return true;
}

std::array<BigInt, 4> bruteFourSquares(const BigInt& m) {
  BigInt amax = sqrt(m);
  for (BigInt a = amax; a >= 0; --a) {
    if (a * a * 4 < m) break;  // with a >= b >= c >= d, a^2 carries >= m/4
    BigInt ra = m - a * a;
    BigInt bmax = sqrt(ra);
    if (bmax > a) bmax = a;
    for (BigInt b = bmax; b >= 0; --b) {
      BigInt rb = ra - b * b;
      BigInt cmax = sqrt(rb);
      if (cmax > b) cmax = b;
      for (BigInt c = cmax; c >= 0; --c) {
        BigInt rc = rb - c * c;
        BigInt d = sqrt(rc);
        if (d * d == rc && d <= c) return {a, b, c, d};
      }
    }
  }
  throw std::logic_error("four-square decomposition not found");
}

}  // namespace

std::array<BigInt, 4> fourSquares(const BigInt& m) {
  if (m < 0) throw std::invalid_argument("fourSquares: negative input");
  if (m == 0) return {0, 0, 0, 0};
  std::mt19937_64 rng(
      0x4c616772616e6765ULL ^
      (m % BigInt("18446744073709551557")).convert_to<std::uint64_t>());
  for (int attempt = 0; attempt < 10000; ++attempt) {
    BigInt a = randBelow(rng, sqrt(m));
    BigInt ra = m - a * a;
    BigInt b = randBelow(rng, sqrt(ra));
    BigInt p = ra - b * b;
    if (p == 0) return {a, b, 0, 0};
    if (p == 1) return {a, b, 1, 0};
    if (p == 2) return {a, b, 1, 1};
    if (p % 4 != 1) continue;
    if (!miller_rabin_test(p, 25, rng)) continue;
    BigInt c = 0, d = 0;
    if (twoSquaresPrime(p, rng, c, d)) return {a, b, c, d};
  }
  return bruteFourSquares(m);
}

// ---------------------------------------------------------------------------
// Gate2Q plumbing.

Gate2Q Gate2Q::onTarget(Gate1Q g) {
  Gate2Q r;
  r.kind = G2Kind::OnTarget;
  r.g = g;
  return r;
}

Gate2Q Gate2Q::onAncilla(Gate1Q g) {
  Gate2Q r;
  r.kind = G2Kind::OnAncilla;
  r.g = g;
  return r;
}

Gate2Q Gate2Q::controlledClifford(CliffordGate g) {
  if (!g.isMonomial())
    throw std::invalid_argument("controlledClifford: not a monomial");
  int j = 0, a = 0, b = 0;
  g.monomialParts(j, a, b);
  if (monomialCost(j, a, b) != 0)
    throw std::invalid_argument("controlledClifford: gadget needs T gates");
  Gate2Q r;
  r.kind = G2Kind::ControlledClifford;
  r.cg = g;
  return r;
}

Gate2Q Gate2Q::controlledPauli(Pauli p) {
  Gate2Q r;
  r.kind = G2Kind::ControlledPauli;
  r.p = p;
  return r;
}

CircuitN toCircuitN(const Circuit2& c) {
  CircuitN out;
  out.nQubits = 2;
  auto evenPhases = [&out](int q, int k) {
    // k is even mod 8: S^{k/2} as free gates.
    switch (mod8(k)) {
      case 2: out.ops.push_back({GN::S, q, -1, 0}); break;
      case 4: out.ops.push_back({GN::Z, q, -1, 0}); break;
      case 6: out.ops.push_back({GN::Sdg, q, -1, 0}); break;
      default: break;
    }
  };
  for (const Gate2Q& g : c) {
    switch (g.kind) {
      case G2Kind::OnTarget:
        out.ops.push_back({toGN(g.g.kind), 0, -1, g.g.k});
        break;
      case G2Kind::OnAncilla:
        out.ops.push_back({toGN(g.g.kind), 1, -1, g.g.k});
        break;
      case G2Kind::ControlledPauli:
        switch (g.p) {
          case Pauli::I: break;
          case Pauli::X: out.ops.push_back({GN::CNOT, 0, 1, 0}); break;
          case Pauli::Z: out.ops.push_back({GN::CZ, 0, 1, 0}); break;
          case Pauli::Y:
            out.ops.push_back({GN::Sdg, 1, -1, 0});
            out.ops.push_back({GN::CNOT, 0, 1, 0});
            out.ops.push_back({GN::S, 1, -1, 0});
            break;
        }
        break;
      case G2Kind::ControlledClifford: {
        int j = 0, a = 0, b = 0;
        g.cg.monomialParts(j, a, b);
        if (b != 0) out.ops.push_back({GN::CNOT, 0, 1, 0});
        int c3 = mod8(-a);
        if (c3 != 0) {
          out.ops.push_back({GN::CNOT, 0, 1, 0});
          evenPhases(1, c3);
          out.ops.push_back({GN::CNOT, 0, 1, 0});
        }
        evenPhases(1, a);
        evenPhases(0, j + a);
        break;
      }
    }
  }
  return out;
}

RingMatrix evalCircuit2(const Circuit2& c) { return evalCircuitN(toCircuitN(c)); }

int tcount2(const Circuit2& c) { return tCountN(toCircuitN(c)); }

int controlledPauliCount(const Circuit2& c) {
  int n = 0;
  for (const Gate2Q& g : c)
    if (g.kind == G2Kind::ControlledPauli && g.p != Pauli::I) ++n;
  return n;
}

// ---------------------------------------------------------------------------
// Controlled Cliffords.

Circuit2 wrapControlledClifford(const CliffordGate& g) {
  return buildWrap(g).circ;
}

int wrapCost(const CliffordGate& g) {
  const WrapTable& wt = wrapTable();
  return wt.dist[static_cast<size_t>(wt.cosetOf[static_cast<size_t>(g.idx)])];
}

// ---------------------------------------------------------------------------
// Lifting.

Circuit2 liftDecorated(const DecoratedTCode& dec, const CliffordGate& g1,
                       const CliffordGate& g2, int omegaPower) {
  Circuit2 out;
  appendOn(out, false, expandTPower(omegaPower));
  appendOn(out, true, g2.word());
  for (int i = dec.tCount() - 1; i >= 0; --i) {
    const DecSyllable& s = dec.syl[static_cast<size_t>(i)];
    out.push_back(Gate2Q::onAncilla({G1::H, 0}));
    if (s.q != Pauli::I) out.push_back(Gate2Q::controlledPauli(s.q));
    out.push_back(Gate2Q::onAncilla({s.eps > 0 ? G1::T : G1::Tdg, 0}));
    if (s.p != Pauli::I) out.push_back(Gate2Q::controlledPauli(s.p));
  }
  // dec's tracked phase i^{iPow} acts on the decorated block only: realize it
  // as the free control phase T^{2 iPow}.
  appendOn(out, false, expandTPower(2 * dec.iPow));
  appendOn(out, true, g1.word());
  return out;
}

// ---------------------------------------------------------------------------
// RUS synthesis.

namespace {

struct TwirlChoice {
  int d1 = 0, d2 = 0, s = 0;
  int cost = std::numeric_limits<int>::max();
};

CliffordGate omegaCG(int k) {
  return CliffordGate::fromGate(G1::OmegaPhase, mod8(k));
}

CliffordGate sCliff(int d) {
  if (d == 0) return CliffordGate::identity();
  return CliffordGate::fromGate(d > 0 ? G1::S : G1::Sdg);
}

}  // namespace

RusProtocol rusSynthesis(const RingUnitary& v, RusVariant variant) {
  RingMatrix m = v;
  m.reduce();
  if (m.n != 2) throw NotUnitary("rusSynthesis: expected a 2x2 matrix");
  if (!m.isUnitary()) throw NotUnitary("rusSynthesis: matrix is not unitary");
  const CyclotomicInt z = m.at(0, 0);
  const CyclotomicInt y = m.at(0, 1);
  if (m.at(1, 0) != -y.conj() || m.at(1, 1) != z.conj())
    throw std::invalid_argument(
        "rusSynthesis: matrix is not in the [[z, y], [-conj y, conj z]] form");
  const int L = m.L;
  const Root2Int pNum = z.absSquared();
  {
    Root2Int margin{pNum.a * 2 - (BigInt(1) << L), pNum.b * 2};
    if (!(margin.sign() > 0))
      throw LowSuccessProbability("rusSynthesis: success probability <= 1/2");
  }

  const TCodeForm f = toTCodeForm(exactSynthesize(m));
  const int t = f.code.tCount();

  std::vector<std::pair<int, int>> pairs;
  if (variant == RusVariant::Plain || variant == RusVariant::Best)
    pairs.emplace_back(0, 0);
  if (variant == RusVariant::SCorrected || variant == RusVariant::Best)
    for (int d1 = -1; d1 <= 1; ++d1)
      for (int d2 = -1; d2 <= 1; ++d2)
        if (d1 != 0 || d2 != 0) pairs.emplace_back(d1, d2);

  // Decorate the adjoint once; every twirl S^{d1} V' S^{d2} reuses the same
  // decorated code with the S powers folded into the wrap Cliffords.
  RingMatrix vAdj = m.adjoint();
  vAdj.reduce();
  const Decorated dec = decorate(f.code, vAdj);

  TwirlChoice best;
  for (auto [d1, d2] : pairs) {
    CliffordGate g5 = sCliff(d1) * dec.g3 * f.g1.adjoint();
    CliffordGate g6 = f.g2.adjoint() * dec.g4 * sCliff(d2);
    for (int s = 0; s < 8; ++s) {
      int cost = wrapCost(omegaCG(s) * g5) + wrapCost(omegaCG(-s) * g6);
      if (cost < best.cost) {
        best = TwirlChoice{d1, d2, s, cost};
      }
    }
  }

  const CliffordGate wrapLeft =
      omegaCG(best.s) * sCliff(best.d1) * dec.g3 * f.g1.adjoint();
  const CliffordGate wrapRight =
      omegaCG(-best.s) * f.g2.adjoint() * dec.g4 * sCliff(best.d2);
  const DecoratedTCode core = reducePaulis(dec.dec);

  RusProtocol proto;
  proto.design = buildWrap(wrapRight).circ;
  {
    Circuit2 mid = liftDecorated(core, f.g1, f.g2, 0);
    proto.design.insert(proto.design.end(), mid.begin(), mid.end());
    Circuit2 left = buildWrap(wrapLeft).circ;
    proto.design.insert(proto.design.end(), left.begin(), left.end());
  }
  proto.successOutcome = 0;
  proto.v = m;
  proto.successUnitary = RingMatrix(2, L);
  proto.successUnitary.at(0, 0) = z;
  proto.successUnitary.at(1, 1) = z.conj();
  proto.successUnitary.reduce();
  proto.failureCorrection = CliffordGate::fromGate(
      best.d1 == 0 ? G1::Z : (best.d1 > 0 ? G1::S : G1::Sdg));
  proto.d1 = best.d1;
  proto.d2 = best.d2;
  proto.L = L;
  proto.pNumerator = pNum;
  proto.p = std::ldexp(pNum.toDouble(), -L);
  proto.designTcount = t + best.cost;
  proto.expectedTcount = proto.designTcount / proto.p;
  proto.wrapLeft = wrapLeft;
  proto.wrapRight = wrapRight;
  proto.coreG1 = f.g1;
  proto.coreG2 = f.g2;
  proto.core = core;

  if (tcount2(proto.design) != proto.designTcount)
    throw std::logic_error("rusSynthesis: emitted T count diverged from plan");
  return proto;
}

RusProtocol sDaggerOptimize(const RusProtocol& protocol) {
  RusProtocol best = rusSynthesis(protocol.v, RusVariant::Best);
  return best.expectedTcount < protocol.expectedTcount ? best : protocol;
}

// ---------------------------------------------------------------------------
// Two-ancilla embedding.

Embedding4Block buildEmbedding2Anc(const RingMatrix& av,
                                   const CyclotomicInt& alpha) {
  if (av.n < 1) throw std::invalid_argument("buildEmbedding2Anc: empty matrix");
  if (alpha.isZero())
    throw NoPremultiplier("buildEmbedding2Anc: zero premultiplier");
  const Root2Int asq = alpha.absSquared();
  const BigInt shift = BigInt(1) << av.L;
  const Root2Int total{asq.a * shift, asq.b * shift};
  if (total.b != 0)
    throw NoPremultiplier(
        "buildEmbedding2Anc: |alpha|^2 is not a rational integer");
  const BigInt n0 = total.a;

  {
    RingMatrix prod = av * av.adjoint();
    RingMatrix expect(av.n, 2 * av.L);
    for (int i = 0; i < av.n; ++i)
      expect.at(i, i) = CyclotomicInt::fromInt(n0 * shift);
    prod.reduce();
    expect.reduce();
    if (prod != expect)
      throw NotUnitary("buildEmbedding2Anc: input is not a scaled unitary");
  }

  const int ell = exactCeilLog2(Root2Int{n0, 0});
  const BigInt deficit = (BigInt(1) << ell) - n0;
  const std::array<BigInt, 4> sq = fourSquares(deficit);

  Embedding4Block out;
  out.alpha = alpha;
  out.beta0 = CyclotomicInt{0, sq[1], 0, sq[0]};
  out.gamma0 = CyclotomicInt{0, sq[3], 0, sq[2]};
  out.ell = ell;

  const int n = av.n;
  const CyclotomicInt sc = CyclotomicInt::root2Pow(av.L);
  const RingMatrix adj = av.adjoint();
  RingMatrix w(4 * n, ell + av.L);
  auto putM = [&](int br, int bc, const RingMatrix& src, bool negate) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        w.at(br * n + i, bc * n + j) = negate ? -src.at(i, j) : src.at(i, j);
  };
  auto putS = [&](int br, int bc, const CyclotomicInt& s) {
    for (int i = 0; i < n; ++i) w.at(br * n + i, bc * n + i) = s * sc;
  };
  putM(0, 0, av, false);
  putS(0, 1, out.beta0.conj());
  putS(0, 2, out.gamma0.conj());
  putS(1, 0, out.beta0);
  putM(1, 1, adj, true);
  putS(1, 3, out.gamma0.conj());
  putS(2, 0, out.gamma0);
  putM(2, 2, adj, true);
  putS(2, 3, -out.beta0.conj());
  putS(3, 1, out.gamma0);
  putS(3, 2, -out.beta0);
  putM(3, 3, av, false);
  w.reduce();
  out.W = w;
  return out;
}

// ---------------------------------------------------------------------------
// Low-depth Jack of Daggers.

namespace {

// Doubly-controlled Z over {T, CNOT}: 7 T gates, T depth 4.  Phases hit the
// parities a, b, c, a^b, a^b^c, b^c, a^c in that stage order; the last two
// CNOTs restore the wires.
void emitCCZ(CircuitN& c, int a, int b, int q) {
  c.ops.push_back({GN::T, a, -1, 0});
  c.ops.push_back({GN::T, b, -1, 0});
  c.ops.push_back({GN::T, q, -1, 0});
  c.ops.push_back({GN::CNOT, a, b, 0});
  c.ops.push_back({GN::CNOT, b, q, 0});
  c.ops.push_back({GN::Tdg, b, -1, 0});
  c.ops.push_back({GN::T, q, -1, 0});
  c.ops.push_back({GN::CNOT, a, q, 0});
  c.ops.push_back({GN::Tdg, q, -1, 0});
  c.ops.push_back({GN::CNOT, b, q, 0});
  c.ops.push_back({GN::Tdg, q, -1, 0});
  c.ops.push_back({GN::CNOT, a, q, 0});
  c.ops.push_back({GN::CNOT, a, b, 0});
}

// Controlled swap of x and y: CNOT(y->x), Toffoli(ctl, x -> y), CNOT(y->x).
void emitCSwap(CircuitN& c, int ctl, int x, int y) {
  c.ops.push_back({GN::CNOT, y, x, 0});
  c.ops.push_back({GN::H, y, -1, 0});
  emitCCZ(c, ctl, x, y);
  c.ops.push_back({GN::H, y, -1, 0});
  c.ops.push_back({GN::CNOT, y, x, 0});
}

}  // namespace

CircuitN buildLowDepthJoD(const RingUnitary& v, int tDepthOfV) {
  (void)tDepthOfV;  // budget hint only; the emitted structure realizes t+8
  RingMatrix m = v;
  m.reduce();
  if (m.n != 2) throw NotUnitary("buildLowDepthJoD: expected a 2x2 matrix");
  if (!m.isUnitary()) throw NotUnitary("buildLowDepthJoD: not unitary");
  const CyclotomicInt r = m.at(0, 0);
  if (m.at(1, 1) != r || r.conj() != r || m.at(0, 1) != -m.at(1, 0).conj())
    throw NotInSxy(
        "buildLowDepthJoD: rotation axis is not in the xy plane (need a real "
        "diagonal and determinant one)");

  const Circuit1 vc = exactSynthesize(m);
  const Circuit1 va = adjointCircuit1(vc);

  CircuitN c;
  c.nQubits = 4;
  // Bell pair on the two work ancillas, sign selected by the b qubit.
  c.ops.push_back({GN::X, 3, -1, 0});
  c.ops.push_back({GN::H, 2, -1, 0});
  c.ops.push_back({GN::CNOT, 2, 3, 0});
  c.ops.push_back({GN::CZ, 0, 2, 0});
  emitCSwap(c, 0, 1, 2);
  for (const Gate1Q& g : vc) c.ops.push_back({toGN(g.kind), 1, -1, g.k});
  for (const Gate1Q& g : va) c.ops.push_back({toGN(g.kind), 2, -1, g.k});
  for (const Gate1Q& g : vc) c.ops.push_back({toGN(g.kind), 3, -1, g.k});
  emitCSwap(c, 0, 1, 2);
  c.ops.push_back({GN::CZ, 0, 2, 0});
  c.ops.push_back({GN::CNOT, 2, 3, 0});
  c.ops.push_back({GN::H, 2, -1, 0});
  c.ops.push_back({GN::X, 3, -1, 0});
  return c;
}

}  // namespace rusforge
