#include "rusforge/synth1q.hpp"

#include <algorithm>
#include <array>
#include <optional>

namespace rusforge {

namespace {

int mod8(int k) { return ((k % 8) + 8) % 8; }
int mod4(int k) { return ((k % 4) + 4) % 4; }

// Application-order tokens for a left factor T^m, m in 0..7, written so the
// operator product of the tokens equals diag(1, w^m).
void appendTPower(std::vector<Gate1Q>& operatorOrder, int m) {
  switch (mod8(m)) {
    case 0: break;
    case 1: operatorOrder.push_back({G1::T, 0}); break;
    case 2: operatorOrder.push_back({G1::S, 0}); break;
    case 3:
      operatorOrder.push_back({G1::S, 0});
      operatorOrder.push_back({G1::T, 0});
      break;
    case 4: operatorOrder.push_back({G1::Z, 0}); break;
    case 5:
      operatorOrder.push_back({G1::Z, 0});
      operatorOrder.push_back({G1::T, 0});
      break;
    case 6: operatorOrder.push_back({G1::Sdg, 0}); break;
    case 7: operatorOrder.push_back({G1::Tdg, 0}); break;
    default: break;
  }
}

RingMatrix gateMat(G1 g, int k = 0) { return gateMatrix1(Gate1Q{g, k}); }

const RingMatrix& hMatrix() {
  static const RingMatrix h = gateMat(G1::H);
  return h;
}

RingMatrix tPowerMatrix(int m) {
  RingMatrix d = RingMatrix::identity(2);
  d.at(1, 1) = CyclotomicInt::omega(mod8(m));
  return d;
}

// sqrt2-adic valuation of x = a + b*sqrt2: largest k with sqrt2^k | x.
// Capped at cap; x == 0 returns cap.
int root2Valuation(Root2Int x, int cap) {
  int v = 0;
  while (v < cap) {
    if (x.a == 0 && x.b == 0) return cap;
    if (x.a % 2 != 0) break;
    // x / sqrt2 = b + (a/2) sqrt2
    Root2Int next{x.b, x.a / 2};
    x = next;
    ++v;
  }
  return v;
}

// Denominator measure for the descent: the sde of |m_00|^2 relative to the
// matrix denominator 2^L.  Strictly decreases under the correct left factor
// H T^{-k}, even on steps where L itself cannot drop.
int descentMeasure(const RingMatrix& m) {
  const int cap = 2 * m.L;
  return cap - root2Valuation(m.at(0, 0).absSquared(), cap);
}

}  // namespace

// ---------------------------------------------------------------------------
// Pauli algebra.

const RingMatrix& pauliMatrix(Pauli p) {
  static const std::array<RingMatrix, 4> mats = {
      RingMatrix::identity(2), gateMat(G1::X), gateMat(G1::Y), gateMat(G1::Z)};
  return mats[static_cast<size_t>(p)];
}

Pauli mulPauli(Pauli p, Pauli q, int& iPow) {
  if (p == Pauli::I) return q;
  if (q == Pauli::I) return p;
  if (p == q) return Pauli::I;
  static constexpr int kX = 1, kY = 2, kZ = 3;
  const int a = static_cast<int>(p), b = static_cast<int>(q);
  // XY = iZ, YZ = iX, ZX = iY; the transposed orders pick up i^3.
  int third = kX ^ kY ^ kZ ^ a ^ b;  // the Pauli distinct from both
  const bool cyclic = (a == kX && b == kY) || (a == kY && b == kZ) ||
                      (a == kZ && b == kX);
  iPow = mod4(iPow + (cyclic ? 1 : 3));
  return static_cast<Pauli>(third);
}

Pauli conjugatePauliByH(Pauli p, int& iPow) {
  switch (p) {
    case Pauli::I: return Pauli::I;
    case Pauli::X: return Pauli::Z;
    case Pauli::Z: return Pauli::X;
    case Pauli::Y:
      iPow = mod4(iPow + 2);  // Y H = - H Y
      return Pauli::Y;
  }
  return Pauli::I;
}

// ---------------------------------------------------------------------------
// Codes.

TCode strip(const DecoratedTCode& dec) {
  TCode c;
  c.eps.reserve(dec.syl.size());
  for (const DecSyllable& s : dec.syl) c.eps.push_back(s.eps);
  return c;
}

Signature signatureOf(const TCode& code) { return Signature{code.eps}; }

Signature signatureOf(const DecoratedTCode& dec) {
  return signatureOf(strip(dec));
}

int pauliCount(const DecoratedTCode& dec) {
  int n = 0;
  for (const DecSyllable& s : dec.syl) {
    if (s.p != Pauli::I) ++n;
    if (s.q != Pauli::I) ++n;
  }
  return n;
}

RingMatrix evalTCode(const TCode& code) {
  RingMatrix m = RingMatrix::identity(2);
  for (int e : code.eps) {
    m = m * tPowerMatrix(e);
    m = m * hMatrix();
    m.reduce();
  }
  return m;
}

RingMatrix evalDecorated(const DecoratedTCode& dec) {
  RingMatrix m = RingMatrix::identity(2).scaled(
      CyclotomicInt::omega(mod8(2 * dec.iPow)));
  for (const DecSyllable& s : dec.syl) {
    m = m * pauliMatrix(s.p);
    m = m * tPowerMatrix(s.eps);
    m = m * pauliMatrix(s.q);
    m = m * hMatrix();
    m.reduce();
  }
  return m;
}

RingMatrix evalTCodeForm(const TCodeForm& f) {
  RingMatrix m = f.g1.mat() * evalTCode(f.code);
  m = m * f.g2.mat();
  m.reduce();
  return m;
}

RingMatrix evalDecoratedForm(const Decorated& d) {
  RingMatrix m = d.g3.mat() * evalDecorated(d.dec);
  m = m * d.g4.mat();
  m.reduce();
  return m;
}

// ---------------------------------------------------------------------------
// Exact synthesis.

Circuit1 exactSynthesize(const RingUnitary& v) {
  if (v.n != 2) throw NotInRing("exactSynthesize: matrix is not 2x2");
  if (!v.isUnitary()) throw NotUnitary("exactSynthesize: matrix is not unitary");

  RingMatrix m = v;
  m.reduce();
  const RingMatrix goal = m;

  auto tryClifford = [](const RingMatrix& x) -> std::optional<CliffordGate> {
    if (x.L > 1) return std::nullopt;
    try {
      return CliffordGate::fromMatrix(x);
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  };

  std::vector<Gate1Q> operatorOrder;  // leftmost factor first
  int guard = 2 * m.L + 8;
  std::optional<CliffordGate> terminal;
  while (m.L >= 1 && !(terminal = tryClifford(m))) {
    if (--guard < 0)
      throw std::logic_error("exactSynthesize: descent did not terminate");
    // Peel a left factor T^{m'} H.  The right measure is the sde of the
    // top-left entry's norm: it strictly drops for the correct m' even on
    // steps where the matrix denominator L holds still.  Even powers are
    // tried first to hold the T-count down when several choices descend.
    const int s = descentMeasure(m);
    int found = -1;
    RingMatrix next(2, 0);
    for (int mm : {0, 2, 1, 3}) {
      RingMatrix cand = hMatrix() * (tPowerMatrix(-mm) * m);
      cand.reduce();
      if (descentMeasure(cand) < s) {
        found = mm;
        next = cand;
        break;
      }
    }
    if (found < 0)
      throw std::logic_error("exactSynthesize: denominator descent stalled");
    // m = T^{m'} * H * next.
    appendTPower(operatorOrder, found);
    operatorOrder.push_back({G1::H, 0});
    m = next;
  }

  if (terminal) {
    // Terminal Clifford at L == 1: emit its canonical word.
    const Circuit1& word = terminal->word();
    operatorOrder.insert(operatorOrder.end(), word.rbegin(), word.rend());
  } else {
    // L == 0: a monomial with omega-power entries (not necessarily Clifford;
    // the diagonal may hold an odd T power).
    const bool diag = !m.at(0, 0).isZero();
    const CyclotomicInt& u = diag ? m.at(0, 0) : m.at(0, 1);
    const CyclotomicInt& w = diag ? m.at(1, 1) : m.at(1, 0);
    std::optional<int> alpha = powerOfOmega(u);
    std::optional<int> beta = powerOfOmega(w);
    if (!alpha || !beta)
      throw std::logic_error("exactSynthesize: terminal matrix is not monomial");
    if (*alpha != 0) operatorOrder.push_back({G1::OmegaPhase, *alpha});
    appendTPower(operatorOrder, *beta - *alpha);
    if (!diag) operatorOrder.push_back({G1::X, 0});
  }

  Circuit1 out(operatorOrder.rbegin(), operatorOrder.rend());
  if (!(evalCircuit1(out) == goal))
    throw std::logic_error("exactSynthesize: self-check failed");
  return out;
}

int tcountOf(const RingUnitary& v) {
  return toTCodeForm(exactSynthesize(v)).code.tCount();
}

// ---------------------------------------------------------------------------
// T-code normal form.

namespace {

// Working state for the rewrite engine.  The processed operator prefix is
//   w^J * T^{ks[0]} * H * T^{ks[1]} * H * ... * H * T^{ks[r]} * frame
// with r = ks.size()-1 separating H gates and a trailing Pauli frame.
struct EngineState {
  int J = 0;                // omega power, mod 8
  std::vector<int> ks{0};   // T powers, mod 8
  Pauli frame = Pauli::I;

  void addOmega(int k) { J = mod8(J + k); }

  void addT(int k) {
    if (frame == Pauli::X || frame == Pauli::Y) {
      // frame * T^k = w^k * T^{-k} * frame
      addOmega(k);
      k = -k;
    }
    ks.back() = mod8(ks.back() + k);
  }

  void addPauli(Pauli p) {
    int ip = 0;
    frame = mulPauli(frame, p, ip);
    addOmega(2 * ip);
  }

  // Merge a Pauli arriving from the left of the frame (p * frame, as opposed
  // to addPauli's frame * p); the i-phase differs when they anticommute.
  void addPauliLeft(Pauli p) {
    int ip = 0;
    frame = mulPauli(p, frame, ip);
    addOmega(2 * ip);
  }

  void addH() {
    // frame * H = i^ip * H * sigma(frame); the H opens a new T slot.
    int ip = 0;
    frame = conjugatePauliByH(frame, ip);
    addOmega(2 * ip);
    ks.push_back(0);
  }

  // Send a Pauli p rightward.  It stands just before the H that precedes
  // slot j0 (or before the frame if j0 is past the last slot), crosses that
  // H, transforms every later slot, and merges into the frame.
  void sweepRight(Pauli p, size_t j0) {
    for (size_t j = j0; j < ks.size(); ++j) {
      int ip = 0;
      p = conjugatePauliByH(p, ip);
      addOmega(2 * ip);
      if (p == Pauli::X || p == Pauli::Y) {
        addOmega(ks[j]);
        ks[j] = mod8(-ks[j]);
      }
    }
    addPauliLeft(p);
  }
};

}  // namespace

TCodeForm toTCodeForm(const Circuit1& c) {
  EngineState st;
  // Feed the gates in operator order (reverse of application order); each new
  // gate lands at the right end of the processed word.
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    switch (it->kind) {
      case G1::H: st.addH(); break;
      case G1::T: st.addT(1); break;
      case G1::Tdg: st.addT(-1); break;
      case G1::S: st.addT(2); break;
      case G1::Sdg: st.addT(-2); break;
      case G1::Z: st.addT(4); break;
      case G1::X: st.addPauli(Pauli::X); break;
      case G1::Y: st.addPauli(Pauli::Y); break;
      case G1::OmegaPhase: st.addOmega(it->k); break;
    }
  }

  // Eliminate even interior T powers.  Every pass removes at least one slot.
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 1; i + 1 < st.ks.size(); ++i) {
      const int k = st.ks[i];
      if (k % 2 != 0) continue;
      changed = true;
      if (k == 0) {
        // H H = Id: slots i-1 and i+1 fuse.
        st.ks[i - 1] = mod8(st.ks[i - 1] + st.ks[i + 1]);
        st.ks.erase(st.ks.begin() + static_cast<long>(i),
                    st.ks.begin() + static_cast<long>(i) + 2);
      } else if (k == 2) {
        // H S H = w * T^{-2} H T^{-2}
        st.addOmega(1);
        st.ks[i - 1] = mod8(st.ks[i - 1] - 2);
        st.ks[i + 1] = mod8(st.ks[i + 1] - 2);
        st.ks.erase(st.ks.begin() + static_cast<long>(i));
      } else if (k == 6) {
        // H Sdg H = w^{-1} * T^{2} H T^{2}
        st.addOmega(7);
        st.ks[i - 1] = mod8(st.ks[i - 1] + 2);
        st.ks[i + 1] = mod8(st.ks[i + 1] + 2);
        st.ks.erase(st.ks.begin() + static_cast<long>(i));
      } else {  // k == 4
        // H Z H = X: slots i-1 and i+1 fuse around the X, which then sweeps
        // right through the remaining word.
        st.addOmega(st.ks[i + 1]);
        st.ks[i - 1] = mod8(st.ks[i - 1] - st.ks[i + 1]);
        st.ks.erase(st.ks.begin() + static_cast<long>(i),
                    st.ks.begin() + static_cast<long>(i) + 2);
        st.sweepRight(Pauli::X, i);
      }
      break;  // restart the scan; indices shifted
    }
  }

  // Normalize interior odd powers to +/-1 (T^3 = T^{-1} Z, T^5 = T Z; the Z
  // sweeps right without touching interior parity).
  for (size_t i = 1; i + 1 < st.ks.size(); ++i) {
    const int k = st.ks[i];
    if (k == 3) {
      st.ks[i] = 7;
      st.sweepRight(Pauli::Z, i + 1);
    } else if (k == 5) {
      st.ks[i] = 1;
      st.sweepRight(Pauli::Z, i + 1);
    }
  }

  // Assemble g1 * code * g2.
  const size_t r = st.ks.size() - 1;
  TCodeForm form{CliffordGate::identity(), TCode{}, CliffordGate::identity()};

  auto splitOdd = [](int k, int& j) {
    // k = 2j + eps (mod 8) with eps = +1 iff k = 1 (mod 4).
    const int eps = (mod4(k) == 1) ? 1 : -1;
    j = mod4((k - eps) / 2);
    return eps;
  };

  RingMatrix g1 = RingMatrix::identity(2).scaled(CyclotomicInt::omega(st.J));
  const int k0 = st.ks[0];
  bool danglingH = false;  // syllable emitted for slot 0 with no H of its own
  if (k0 % 2 == 0) {
    g1 = g1 * tPowerMatrix(k0);
    if (r >= 1) g1 = g1 * hMatrix();
  } else {
    int j0 = 0;
    const int eps0 = splitOdd(k0, j0);
    g1 = g1 * tPowerMatrix(2 * j0);
    form.code.eps.push_back(eps0);  // consumes the first H, if there is one
    danglingH = (r == 0);
  }
  g1.reduce();

  for (size_t i = 1; i + 1 <= r; ++i) {
    const int k = st.ks[i];
    form.code.eps.push_back(k == 1 ? 1 : -1);
  }

  RingMatrix g2 = RingMatrix::identity(2);
  if (danglingH) {
    // Slot 0 was odd with no H following it; the syllable above borrowed one
    // (T^k = T^eps S^j H * H), so pay it back here.
    g2 = hMatrix();
  } else if (r >= 1) {
    const int kr = st.ks[r];
    if (kr % 2 == 0) {
      g2 = tPowerMatrix(kr);
    } else {
      int jr = 0;
      const int epsr = splitOdd(kr, jr);
      form.code.eps.push_back(epsr);
      g2 = hMatrix() * tPowerMatrix(2 * jr);
    }
  }
  g2 = g2 * pauliMatrix(st.frame);
  g2.reduce();

  form.g1 = CliffordGate::fromMatrix(g1);
  form.g2 = CliffordGate::fromMatrix(g2);

  if (!(evalTCodeForm(form) == evalCircuit1(c)))
    throw std::logic_error("toTCodeForm: self-check failed");
  return form;
}

// ---------------------------------------------------------------------------
// Rewrite identities.

const std::vector<RewriteIdentity>& rewriteIdentities() {
  static const std::vector<RewriteIdentity> table = [] {
    // Written below in application order; the comments give the operator
    // products they encode.
    std::vector<RewriteIdentity> t = {
        // X T H = w   Tdg H Z
        {"pauli-X-past-TH", parseCircuit1("H T X"), parseCircuit1("Z H Tdg w^1")},
        // Y T H = w^5 Tdg H Y
        {"pauli-Y-past-TH", parseCircuit1("H T Y"), parseCircuit1("Y H Tdg w^5")},
        // Z T H =     T H X
        {"pauli-Z-past-TH", parseCircuit1("H T Z"), parseCircuit1("X H T")},
        // X S H T H = w^2 Sdg H T H X
        {"pauli-X-past-SHTH", parseCircuit1("H T H S X"),
         parseCircuit1("X H T H Sdg w^2")},
        // Y S H T H = w^3 Sdg H Tdg H Y
        {"pauli-Y-past-SHTH", parseCircuit1("H T H S Y"),
         parseCircuit1("Y H Tdg H Sdg w^3")},
        // Z S H T H = w   S H Tdg H Z
        {"pauli-Z-past-SHTH", parseCircuit1("H T H S Z"),
         parseCircuit1("Z H Tdg H S w^1")},
        // H S H   = w   Sdg H Sdg
        {"H-S-H", parseCircuit1("H S H"), parseCircuit1("Sdg H Sdg w^1")},
        // H Sdg H = w^7 S H S
        {"H-Sdg-H", parseCircuit1("H Sdg H"), parseCircuit1("S H S w^7")},
    };
    for (const RewriteIdentity& id : t) {
      if (!(evalCircuit1(id.lhs) == evalCircuit1(id.rhs)))
        throw std::logic_error("rewriteIdentities: rule '" + id.name +
                               "' failed exact verification");
    }
    return t;
  }();
  return table;
}

// ---------------------------------------------------------------------------
// Decoration.

TCode reversalCode(const TCode& code) {
  TCode r;
  r.eps.assign(code.eps.rbegin(), code.eps.rend());
  for (int& e : r.eps) e = -e;
  return r;
}

std::pair<DecoratedTCode, int> alignCodes(const TCode& base,
                                          const TCode& target) {
  if (base.eps.size() != target.eps.size())
    throw TCountMismatch("alignCodes: lengths " +
                         std::to_string(base.eps.size()) + " and " +
                         std::to_string(target.eps.size()) + " differ");
  DecoratedTCode dec;
  dec.syl.reserve(base.eps.size());
  int m = 0;
  for (size_t i = 0; i < base.eps.size(); ++i) {
    DecSyllable s;
    s.eps = base.eps[i];
    if (target.eps[i] != base.eps[i]) {
      // X T^{b} X H = w^{b} * T^{-b} H, so the decorated syllable carries an
      // extra w^{b} that the returned power must cancel.
      s.p = Pauli::X;
      s.q = Pauli::X;
      m = mod8(m - base.eps[i]);
    }
    dec.syl.push_back(s);
  }
  return {dec, m};
}

Decorated decorate(const TCode& code, const RingUnitary& target) {
  {
    // Fast path: the target is the code's own matrix.
    RingMatrix want = target;
    want.reduce();
    if (evalTCode(code) == want) {
      Decorated triv{CliffordGate::identity(), DecoratedTCode{},
                     CliffordGate::identity()};
      for (int e : code.eps) triv.dec.syl.push_back(DecSyllable{Pauli::I, e, Pauli::I});
      return triv;
    }
  }
  const TCodeForm tf = toTCodeForm(exactSynthesize(target));
  if (tf.code.tCount() != code.tCount())
    throw TCountMismatch("decorate: target T-count " +
                         std::to_string(tf.code.tCount()) +
                         " != code length " + std::to_string(code.tCount()));

  Decorated out{tf.g1, DecoratedTCode{}, tf.g2};
  int omegaShift = 0;
  for (size_t i = 0; i < code.eps.size(); ++i) {
    DecSyllable s;
    s.eps = code.eps[i];
    if (tf.code.eps[i] != code.eps[i]) {
      // T^{-eps} H = w^{-eps} * (X T^{eps} X) H
      s.p = Pauli::X;
      s.q = Pauli::X;
      omegaShift = mod8(omegaShift - code.eps[i]);
    }
    out.dec.syl.push_back(s);
  }
  if (omegaShift != 0) {
    RingMatrix g4 = tf.g2.mat().scaled(CyclotomicInt::omega(omegaShift));
    g4.reduce();
    out.g4 = CliffordGate::fromMatrix(g4);
  }

  RingMatrix check = evalDecoratedForm(out);
  RingMatrix want = target;
  want.reduce();
  if (!(check == want))
    throw std::logic_error("decorate: self-check failed");
  return out;
}

DecoratedTCode reducePaulis(const DecoratedTCode& dec) {
  DecoratedTCode out;
  out.iPow = dec.iPow;
  out.syl.reserve(dec.syl.size());
  Pauli carried = Pauli::I;  // Pauli moving right, currently left of syllable i
  for (size_t i = 0; i < dec.syl.size(); ++i) {
    DecSyllable s;
    s.eps = dec.syl[i].eps;
    int ip = 0;
    s.p = mulPauli(carried, dec.syl[i].p, ip);
    s.q = Pauli::I;
    carried = dec.syl[i].q;
    if (i + 1 < dec.syl.size()) {
      // Push the trailing Pauli across this syllable's H into the next P.
      carried = conjugatePauliByH(carried, ip);
    } else {
      s.q = carried;  // the last syllable keeps its trailing Pauli
      carried = Pauli::I;
    }
    out.iPow = mod4(out.iPow + ip);
    out.syl.push_back(s);
  }
  return out;
}

}  // namespace rusforge
