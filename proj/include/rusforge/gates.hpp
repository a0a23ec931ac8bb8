#pragma once

#include "rusforge/ring.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace rusforge {

// Single-qubit gate alphabet.  OmegaPhase is the global phase gate w^k, w = exp(i*pi/4).
enum class G1 : std::uint8_t { H, T, Tdg, S, Sdg, X, Y, Z, OmegaPhase };

struct Gate1Q {
  G1 kind = G1::H;
  int k = 0;  // phase power, used only when kind == OmegaPhase (taken mod 8)

  bool operator==(const Gate1Q& o) const { return kind == o.kind && k == o.k; }
  bool operator!=(const Gate1Q& o) const { return !(*this == o); }
};

// Circuits are stored in application order: front() acts on the state first.
// The matrix of a circuit [g1, g2, ..., gn] is M(gn) * ... * M(g2) * M(g1).
using Circuit1 = std::vector<Gate1Q>;

RingMatrix gateMatrix1(const Gate1Q& g);
RingMatrix evalCircuit1(const Circuit1& c);
int tCount1(const Circuit1& c);

// Text form: whitespace-separated tokens "H T Tdg S Sdg X Y Z w^k", written
// left to right in application order (first-applied first).
std::string gateToken(const Gate1Q& g);
std::optional<Gate1Q> parseGateToken(const std::string& tok);
std::string printCircuit1(const Circuit1& c);
Circuit1 parseCircuit1(const std::string& text);  // throws std::invalid_argument

// ---------------------------------------------------------------------------
// Single-qubit Clifford group, exact ring representation.
//
// There are 192 distinct ring unitaries: 24 classes modulo global phase, each
// appearing with the 8 phases w^j.  Monomial entries are exactly those of the
// shape w^j * S^a * X^b (j in 0..7, a in 0..3, b in 0..1).
// ---------------------------------------------------------------------------

class CliffordTable {
 public:
  struct Entry {
    RingMatrix m;       // fully reduced 2x2 matrix
    Circuit1 word;      // shortest word over {H, S, w} in application order
    bool monomial = false;
    int j = 0, a = 0, b = 0;  // valid when monomial: m = w^j S^a X^b
  };

  static const CliffordTable& instance();

  int size() const { return static_cast<int>(entries_.size()); }
  const Entry& entry(int idx) const { return entries_[static_cast<size_t>(idx)]; }
  // Index of a 2x2 ring unitary, or -1 if it is not a Clifford operator.
  int indexOf(const RingMatrix& m) const;
  int mul(int lhs, int rhs) const;  // index of entry(lhs).m * entry(rhs).m
  int adjointIndex(int idx) const;
  int identityIndex() const { return idIdx_; }
  // Index of a Clifford gate's matrix (H, S, Sdg, X, Y, Z, or W^k).
  int indexOfGate(G1 g, int k = 0) const;
  // One representative index per class modulo global phase (24 entries).
  const std::vector<int>& classReps() const { return classReps_; }

 private:
  CliffordTable();
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> byKey_;
  std::vector<int> classReps_;
  int idIdx_ = 0;
};

// Value-semantics handle for a single-qubit Clifford operator (phase included).
struct CliffordGate {
  int idx = 0;

  static CliffordGate identity();
  static CliffordGate fromMatrix(const RingMatrix& m);  // throws if not Clifford
  static CliffordGate fromGate(G1 g, int k = 0);

  const RingMatrix& mat() const;
  const Circuit1& word() const;
  bool isMonomial() const;
  // For monomial operators: mat() = w^j S^a X^b.
  void monomialParts(int& j, int& a, int& b) const;
  CliffordGate operator*(const CliffordGate& o) const;
  CliffordGate adjoint() const;

  bool operator==(const CliffordGate& o) const { return idx == o.idx; }
  bool operator!=(const CliffordGate& o) const { return idx != o.idx; }
};

// If z == w^k for some k in 0..7, return k; otherwise nullopt.
std::optional<int> powerOfOmega(const CyclotomicInt& z);

// ---------------------------------------------------------------------------
// Multi-qubit circuits.  Qubit 0 is the most significant bit of a basis index:
// with n qubits, basis state |q0 q1 ... q_{n-1}> has index sum q_i 2^(n-1-i).
// ---------------------------------------------------------------------------

enum class GN : std::uint8_t { H, T, Tdg, S, Sdg, X, Y, Z, OmegaPhase, CNOT, CZ };

struct GateOp {
  GN kind = GN::H;
  int q0 = 0;   // acted-on qubit; control for CNOT/CZ; unused for W
  int q1 = -1;  // target for CNOT/CZ, -1 otherwise
  int k = 0;    // phase power for W

  bool operator==(const GateOp& o) const {
    return kind == o.kind && q0 == o.q0 && q1 == o.q1 && k == o.k;
  }
  bool operator!=(const GateOp& o) const { return !(*this == o); }
};

struct CircuitN {
  int nQubits = 2;
  std::vector<GateOp> ops;  // application order
};

RingMatrix gateMatrixN(const GateOp& op, int nQubits);
RingMatrix evalCircuitN(const CircuitN& c);
int tCountN(const CircuitN& c);
// Minimal number of T stages under as-soon-as-possible scheduling (longest
// path through the gate DAG counting only T/Tdg nodes).
int tDepthN(const CircuitN& c);
std::string opToken(const GateOp& op);
std::string printCircuitN(const CircuitN& c);

}  // namespace rusforge
