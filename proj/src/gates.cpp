#include "rusforge/gates.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace rusforge {

RingMatrix gateMatrix1(const Gate1Q& g) {
  using CI = CyclotomicInt;
  const CI o = CI::zero();
  const CI l = CI::one();
  RingMatrix m(2, 0);
  switch (g.kind) {
    case G1::H:
      m.L = 1;
      m.e = {l, l, l, -l};
      break;
    case G1::T:
      m.e = {l, o, o, CI::omega(1)};
      break;
    case G1::Tdg:
      m.e = {l, o, o, CI::omega(7)};
      break;
    case G1::S:
      m.e = {l, o, o, CI::omega(2)};
      break;
    case G1::Sdg:
      m.e = {l, o, o, CI::omega(6)};
      break;
    case G1::X:
      m.e = {o, l, l, o};
      break;
    case G1::Y:
      m.e = {o, -CI::omega(2), CI::omega(2), o};
      break;
    case G1::Z:
      m.e = {l, o, o, -l};
      break;
    case G1::OmegaPhase: {
      const CI w = CI::omega(g.k);
      m.e = {w, o, o, w};
      break;
    }
  }
  return m;
}

RingMatrix evalCircuit1(const Circuit1& c) {
  RingMatrix u = RingMatrix::identity(2);
  for (const Gate1Q& g : c) u = gateMatrix1(g) * u;
  return u;
}

int tCount1(const Circuit1& c) {
  int t = 0;
  for (const Gate1Q& g : c)
    if (g.kind == G1::T || g.kind == G1::Tdg) ++t;
  return t;
}

std::string gateToken(const Gate1Q& g) {
  switch (g.kind) {
    case G1::H: return "H";
    case G1::T: return "T";
    case G1::Tdg: return "Tdg";
    case G1::S: return "S";
    case G1::Sdg: return "Sdg";
    case G1::X: return "X";
    case G1::Y: return "Y";
    case G1::Z: return "Z";
    case G1::OmegaPhase: return "w^" + std::to_string(((g.k % 8) + 8) % 8);
  }
  return "?";
}

std::optional<Gate1Q> parseGateToken(const std::string& tok) {
  if (tok == "H") return Gate1Q{G1::H, 0};
  if (tok == "T") return Gate1Q{G1::T, 0};
  if (tok == "Tdg") return Gate1Q{G1::Tdg, 0};
  if (tok == "S") return Gate1Q{G1::S, 0};
  if (tok == "Sdg") return Gate1Q{G1::Sdg, 0};
  if (tok == "X") return Gate1Q{G1::X, 0};
  if (tok == "Y") return Gate1Q{G1::Y, 0};
  if (tok == "Z") return Gate1Q{G1::Z, 0};
  if (tok.size() > 2 && tok[0] == 'w' && tok[1] == '^') {
    try {
      size_t used = 0;
      long long k = std::stoll(tok.substr(2), &used);
      if (used != tok.size() - 2) return std::nullopt;
      return Gate1Q{G1::OmegaPhase, static_cast<int>(((k % 8) + 8) % 8)};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string printCircuit1(const Circuit1& c) {
  std::string out;
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) out += ' ';
    out += gateToken(c[i]);
  }
  return out;
}

Circuit1 parseCircuit1(const std::string& text) {
  Circuit1 c;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    auto g = parseGateToken(tok);
    if (!g) throw std::invalid_argument("unknown gate token: " + tok);
    c.push_back(*g);
  }
  return c;
}

std::optional<int> powerOfOmega(const CyclotomicInt& z) {
  for (int k = 0; k < 8; ++k)
    if (z == CyclotomicInt::omega(k)) return k;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CliffordTable
// ---------------------------------------------------------------------------

namespace {

std::string matrixKey(const RingMatrix& m) {
  std::string key = std::to_string(m.L);
  for (const CyclotomicInt& z : m.e) {
    key += '|';
    key += z.a.str();
    key += ',';
    key += z.b.str();
    key += ',';
    key += z.c.str();
    key += ',';
    key += z.d.str();
  }
  return key;
}

// If m = w^j S^a X^b exactly, fill (j, a, b) and return true.
bool monomialDecompose(const RingMatrix& m, int& j, int& a, int& b) {
  if (m.n != 2 || m.L != 0) return false;
  const CyclotomicInt& e00 = m.at(0, 0);
  const CyclotomicInt& e01 = m.at(0, 1);
  const CyclotomicInt& e10 = m.at(1, 0);
  const CyclotomicInt& e11 = m.at(1, 1);
  CyclotomicInt u, v;
  if (e01.isZero() && e10.isZero()) {
    b = 0;
    u = e00;
    v = e11;
  } else if (e00.isZero() && e11.isZero()) {
    b = 1;
    u = e01;
    v = e10;
  } else {
    return false;
  }
  auto pu = powerOfOmega(u);
  auto pv = powerOfOmega(v);
  if (!pu || !pv) return false;
  j = *pu;
  int diff = ((*pv - *pu) % 8 + 8) % 8;
  if (diff % 2 != 0) return false;  // not a Clifford monomial (T-like)
  a = diff / 2;
  return true;
}

}  // namespace

CliffordTable::CliffordTable() {
  struct Gen {
    Gate1Q gate;
    RingMatrix m;
  };
  const std::vector<Gen> gens = {
      {Gate1Q{G1::H, 0}, gateMatrix1(Gate1Q{G1::H, 0})},
      {Gate1Q{G1::S, 0}, gateMatrix1(Gate1Q{G1::S, 0})},
      {Gate1Q{G1::OmegaPhase, 1}, gateMatrix1(Gate1Q{G1::OmegaPhase, 1})},
  };

  Entry id;
  id.m = RingMatrix::identity(2);
  entries_.push_back(id);
  byKey_.emplace(matrixKey(id.m), 0);
  idIdx_ = 0;

  for (size_t head = 0; head < entries_.size(); ++head) {
    for (const Gen& g : gens) {
      RingMatrix next = g.m * entries_[head].m;
      std::string key = matrixKey(next);
      if (byKey_.count(key)) continue;
      Entry en;
      en.m = std::move(next);
      en.word = entries_[head].word;
      en.word.push_back(g.gate);
      byKey_.emplace(std::move(key), static_cast<int>(entries_.size()));
      entries_.push_back(std::move(en));
    }
  }

  std::unordered_map<std::string, int> classSeen;
  for (size_t i = 0; i < entries_.size(); ++i) {
    Entry& en = entries_[i];
    en.monomial = monomialDecompose(en.m, en.j, en.a, en.b);
    // Class key: lexicographically least key over the 8 global phase variants.
    std::string best;
    for (int t = 0; t < 8; ++t) {
      std::string k = matrixKey(en.m.scaled(CyclotomicInt::omega(t)));
      if (best.empty() || k < best) best = std::move(k);
    }
    if (!classSeen.count(best)) {
      classSeen.emplace(std::move(best), static_cast<int>(i));
      classReps_.push_back(static_cast<int>(i));
    }
  }
}

const CliffordTable& CliffordTable::instance() {
  static const CliffordTable table;
  return table;
}

int CliffordTable::indexOf(const RingMatrix& m) const {
  if (m.n != 2) return -1;
  RingMatrix r = m;
  r.reduce();
  auto it = byKey_.find(matrixKey(r));
  return it == byKey_.end() ? -1 : it->second;
}

int CliffordTable::mul(int lhs, int rhs) const {
  int idx = indexOf(entry(lhs).m * entry(rhs).m);
  assert(idx >= 0);
  return idx;
}

int CliffordTable::adjointIndex(int idx) const {
  int r = indexOf(entry(idx).m.adjoint());
  assert(r >= 0);
  return r;
}

int CliffordTable::indexOfGate(G1 g, int k) const {
  if (g == G1::T || g == G1::Tdg)
    throw std::logic_error("T is not a Clifford operator");
  int idx = indexOf(gateMatrix1(Gate1Q{g, k}));
  assert(idx >= 0);
  return idx;
}

CliffordGate CliffordGate::identity() {
  return CliffordGate{CliffordTable::instance().identityIndex()};
}

CliffordGate CliffordGate::fromMatrix(const RingMatrix& m) {
  int idx = CliffordTable::instance().indexOf(m);
  if (idx < 0) throw std::invalid_argument("matrix is not a Clifford operator");
  return CliffordGate{idx};
}

CliffordGate CliffordGate::fromGate(G1 g, int k) {
  return CliffordGate{CliffordTable::instance().indexOfGate(g, k)};
}

const RingMatrix& CliffordGate::mat() const {
  return CliffordTable::instance().entry(idx).m;
}

const Circuit1& CliffordGate::word() const {
  return CliffordTable::instance().entry(idx).word;
}

bool CliffordGate::isMonomial() const {
  return CliffordTable::instance().entry(idx).monomial;
}

void CliffordGate::monomialParts(int& j, int& a, int& b) const {
  const auto& en = CliffordTable::instance().entry(idx);
  assert(en.monomial);
  j = en.j;
  a = en.a;
  b = en.b;
}

CliffordGate CliffordGate::operator*(const CliffordGate& o) const {
  return CliffordGate{CliffordTable::instance().mul(idx, o.idx)};
}

CliffordGate CliffordGate::adjoint() const {
  return CliffordGate{CliffordTable::instance().adjointIndex(idx)};
}

// ---------------------------------------------------------------------------
// Multi-qubit circuits
// ---------------------------------------------------------------------------

namespace {

G1 toG1(GN k) {
  switch (k) {
    case GN::H: return G1::H;
    case GN::T: return G1::T;
    case GN::Tdg: return G1::Tdg;
    case GN::S: return G1::S;
    case GN::Sdg: return G1::Sdg;
    case GN::X: return G1::X;
    case GN::Y: return G1::Y;
    case GN::Z: return G1::Z;
    case GN::OmegaPhase: return G1::OmegaPhase;
    default: throw std::logic_error("not a single-qubit gate kind");
  }
}

}  // namespace

RingMatrix gateMatrixN(const GateOp& op, int nQubits) {
  const int dim = 1 << nQubits;
  if (op.kind == GN::CNOT || op.kind == GN::CZ) {
    assert(op.q0 >= 0 && op.q0 < nQubits && op.q1 >= 0 && op.q1 < nQubits &&
           op.q0 != op.q1);
    RingMatrix m(dim, 0);
    const int cbit = 1 << (nQubits - 1 - op.q0);
    const int tbit = 1 << (nQubits - 1 - op.q1);
    for (int i = 0; i < dim; ++i) {
      if (op.kind == GN::CNOT) {
        const int row = (i & cbit) ? (i ^ tbit) : i;
        m.at(row, i) = CyclotomicInt::one();
      } else {
        m.at(i, i) = ((i & cbit) && (i & tbit)) ? -CyclotomicInt::one()
                                                : CyclotomicInt::one();
      }
    }
    return m;
  }
  if (op.kind == GN::OmegaPhase) {
    RingMatrix m(dim, 0);
    const CyclotomicInt w = CyclotomicInt::omega(op.k);
    for (int i = 0; i < dim; ++i) m.at(i, i) = w;
    return m;
  }
  assert(op.q0 >= 0 && op.q0 < nQubits);
  RingMatrix full = gateMatrix1(Gate1Q{toG1(op.kind), op.k});
  if (op.q0 > 0) full = tensor(RingMatrix::identity(1 << op.q0), full);
  if (nQubits - 1 - op.q0 > 0)
    full = tensor(full, RingMatrix::identity(1 << (nQubits - 1 - op.q0)));
  return full;
}

RingMatrix evalCircuitN(const CircuitN& c) {
  RingMatrix u = RingMatrix::identity(1 << c.nQubits);
  for (const GateOp& op : c.ops) u = gateMatrixN(op, c.nQubits) * u;
  return u;
}

int tCountN(const CircuitN& c) {
  int t = 0;
  for (const GateOp& op : c.ops)
    if (op.kind == GN::T || op.kind == GN::Tdg) ++t;
  return t;
}

int tDepthN(const CircuitN& c) {
  std::vector<int> depth(static_cast<size_t>(c.nQubits), 0);
  int best = 0;
  for (const GateOp& op : c.ops) {
    if (op.kind == GN::OmegaPhase) continue;  // global phase touches no wire
    int d = depth[static_cast<size_t>(op.q0)];
    const bool twoQ = (op.kind == GN::CNOT || op.kind == GN::CZ);
    if (twoQ) d = std::max(d, depth[static_cast<size_t>(op.q1)]);
    if (op.kind == GN::T || op.kind == GN::Tdg) ++d;
    depth[static_cast<size_t>(op.q0)] = d;
    if (twoQ) depth[static_cast<size_t>(op.q1)] = d;
    best = std::max(best, d);
  }
  return best;
}

std::string opToken(const GateOp& op) {
  if (op.kind == GN::CNOT || op.kind == GN::CZ) {
    const char* name = op.kind == GN::CNOT ? "CNOT" : "CZ";
    return std::string(name) + "(" + std::to_string(op.q0) + "," +
           std::to_string(op.q1) + ")";
  }
  if (op.kind == GN::OmegaPhase) return "w^" + std::to_string(((op.k % 8) + 8) % 8);
  return gateToken(Gate1Q{toG1(op.kind), op.k}) + "(" + std::to_string(op.q0) + ")";
}

std::string printCircuitN(const CircuitN& c) {
  std::string out;
  for (size_t i = 0; i < c.ops.size(); ++i) {
    if (i) out += ' ';
    out += opToken(c.ops[i]);
  }
  return out;
}

}  // namespace rusforge
