#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rusforge/gates.hpp"
#include "rusforge/ring.hpp"
#include "rusforge/synth1q.hpp"

namespace rusforge {

// Two-qubit repeat-until-success construction.
//
// Layout: qubit 0 is the target (and the control of every controlled gate),
// qubit 1 is the ancilla.  A design circuit implements the block-diagonal
// operator diag(V, W): the target value selects the block applied to the
// ancilla.  Run on |psi> (x) |0> and measure the ancilla: outcome 0 leaves the
// target in the rotation state encoded by V's diagonal, outcome 1 leaves
// Z|psi> (or S^{-d1}|psi> when the lower block has been twirled to
// S^{d1} W S^{d2}), which a zero-T-count Clifford undoes.

struct LowSuccessProbability : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NoPremultiplier : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotInSxy : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Two-qubit gate alphabet.

enum class G2Kind : std::uint8_t {
  OnTarget,            // single-qubit gate on qubit 0
  OnAncilla,           // single-qubit gate on qubit 1
  ControlledClifford,  // free controlled monomial (even phases; zero T cost)
  ControlledPauli,     // controlled X / Y / Z, control on the target
};

struct Gate2Q {
  G2Kind kind = G2Kind::OnAncilla;
  Gate1Q g;                                  // OnTarget / OnAncilla payload
  CliffordGate cg = CliffordGate::identity();  // ControlledClifford payload
  Pauli p = Pauli::I;                        // ControlledPauli payload

  static Gate2Q onTarget(Gate1Q g);
  static Gate2Q onAncilla(Gate1Q g);
  // Requires a monomial with zero gadget T cost; throws std::invalid_argument
  // otherwise (the caller must expand costly controlled Cliffords itself).
  static Gate2Q controlledClifford(CliffordGate g);
  static Gate2Q controlledPauli(Pauli p);
};

using Circuit2 = std::vector<Gate2Q>;  // application order

// Lowering into the primitive alphabet {1q gates, CNOT, CZ} for exact
// simulation, printing, and T counting.
CircuitN toCircuitN(const Circuit2& c);
RingMatrix evalCircuit2(const Circuit2& c);
int tcount2(const Circuit2& c);
// Number of non-identity ControlledPauli entries.
int controlledPauliCount(const Circuit2& c);

// ---------------------------------------------------------------------------
// Controlled-Clifford gadgets.

// Minimal-T two-qubit gadget for the controlled operator /\(g) = diag(I, g).
// Controlled even-phase Paulis (w^{2k} P) are free; a w phase on the control
// costs one T (a plain T on that qubit); and the templates /\(w^-1 S) =
// (I (x) T) CNOT (I (x) T') CNOT and /\(H) = (I (x) S'HT') CNOT (I (x) THS)
// cost two each, also conjugated by any Clifford on the second qubit.  The
// cheapest word over these steps is found by shortest path on the (small)
// quotient of the Clifford group by the free subgroup; every Clifford costs
// at most 5, and at most 4 after shifting a w phase to a partner gate.
Circuit2 wrapControlledClifford(const CliffordGate& g);
// T cost of wrapControlledClifford(g) without building the circuit.
int wrapCost(const CliffordGate& g);

// ---------------------------------------------------------------------------
// Lifting decorated T codes.

// Application-order circuit for the operator product
//   (Id (x) g1) * Lift(dec) * (Id (x) g2) * (T^{omegaPower} (x) Id),
// where Lift maps each decorated syllable P T^{eps} Q H to
// /\(P) (I (x) T^{eps}) /\(Q) (I (x) H) and realizes dec's tracked i^m phase
// as a free S power on the target.  The target-0 block evaluates to
// g1 * eval(strip(dec)) * g2 and the target-1 block to
// g1 * evalDecorated(dec) * g2 * w^{omegaPower}.
Circuit2 liftDecorated(const DecoratedTCode& dec, const CliffordGate& g1,
                       const CliffordGate& g2, int omegaPower);

// ---------------------------------------------------------------------------
// RUS protocols.

enum class RusVariant {
  Plain,       // lower block exactly V^dagger; failure branch is Pauli Z
  SCorrected,  // best twirl S^{d1} V^dagger S^{d2}, (d1,d2) != (0,0)
  Best,        // cheaper of the two above (expected T count)
};

struct RusProtocol {
  Circuit2 design;        // full two-qubit circuit, application order
  int successOutcome = 0;  // ancilla measurement value declared "success"

  RingMatrix v;                // the source matrix (upper block)
  RingMatrix successUnitary;   // exact subnormalized success block:
                               // sqrt(2)^L * B0 = diag(z, conj(z))
  CliffordGate failureCorrection = CliffordGate::identity();  // Z, S or Sdg
  int d1 = 0, d2 = 0;          // twirl used for the lower block

  int L = 0;
  Root2Int pNumerator;         // |z|^2; success probability = |z|^2 / 2^L
  double p = 1.0;
  int designTcount = 0;
  double expectedTcount = 0.0;  // designTcount / p

  // Structured pieces (for listings and inspection): the design is
  //   /\(wrapLeft) (Id (x) coreG1) Lift(core) (Id (x) coreG2) /\(wrapRight)
  // as an operator product.
  CliffordGate wrapLeft = CliffordGate::identity();
  CliffordGate wrapRight = CliffordGate::identity();
  CliffordGate coreG1 = CliffordGate::identity();
  CliffordGate coreG2 = CliffordGate::identity();
  DecoratedTCode core;
};

// Synthesize a repeat-until-success design for an eq-form unitary
// (1/sqrt(2)^L) [[z, y], [-conj(y), conj(z)]] with |z|^2 / 2^L > 1/2.
// The emitted circuit evaluates exactly to diag(V, S^{d1} V^dagger S^{d2});
// its T count is at most tcountOf(v) + 9.
RusProtocol rusSynthesis(const RingUnitary& v,
                         RusVariant variant = RusVariant::Best);

// Re-run the twirl search over all nine (d1,d2) pairs, keeping the input if
// nothing beats it.  Never increases expectedTcount.
RusProtocol sDaggerOptimize(const RusProtocol& protocol);

// ---------------------------------------------------------------------------
// Exact two-ancilla embedding.

// Unitary 4-block embedding of a scaled unitary: given  av = alpha * V  (a
// ring matrix; V unitary, |alpha|^2 a rational integer), the 8x8 matrix
//
//        [ av            conj(b0) I   conj(g0) I   0          ]
//   W =  [ b0 I          -av^dag      0            conj(g0) I ]  / sqrt2^ell
//        [ g0 I          0            -av^dag      -conj(b0) I]
//        [ 0             g0 I         -b0 I        av         ]
//
// is exactly unitary with det 1, where b0, g0 are Gaussian integers with
// |alpha|^2 + |b0|^2 + |g0|^2 = 2^ell and ell is minimal with |alpha|^2 <=
// 2^ell.  Measuring both ancillas of the induced protocol yields V on 00 and
// the identity otherwise.
struct Embedding4Block {
  CyclotomicInt alpha;   // the premultiplier alpha
  CyclotomicInt beta0;   // Gaussian integer a + b*i
  CyclotomicInt gamma0;  // Gaussian integer c + d*i
  int ell = 0;
  RingMatrix W;          // 4n x 4n, denominator exponent ell + av.L
};

// b0, g0 come from a four-square decomposition of 2^ell - |alpha|^2.
// Preconditions: alpha != 0; |alpha|^2 * 2^{av.L} is a rational integer
// (NoPremultiplier otherwise); av * av^dag == |alpha|^2 * 2^{av.L} * I
// exactly (NotUnitary otherwise).
Embedding4Block buildEmbedding2Anc(const RingMatrix& av,
                                   const CyclotomicInt& alpha);

// Lagrange decomposition m = a^2 + b^2 + c^2 + d^2, m >= 0.  Randomized
// two-square completion (deterministically seeded from m) with a brute-force
// fallback after 10^4 draws.
std::array<BigInt, 4> fourSquares(const BigInt& m);

// ---------------------------------------------------------------------------
// Low-depth Jack-of-Daggers with two extra ancillas.

// Four-qubit circuit |b>|psi>|00> -> |b> V^{(-1)^b}|psi> |00> for V with a
// real top-left entry and determinant one (axis in the xy plane).  Routes a
// Bell pair so the data qubit meets V or V^dagger; the two controlled swaps
// use 7 T gates at T depth 4 each, so the total T depth is at most
// tDepthOfV + 8.  tDepthOfV only sizes that budget; pass tcountOf(v).
CircuitN buildLowDepthJoD(const RingUnitary& v, int tDepthOfV);

}  // namespace rusforge
