#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rusforge/gates.hpp"
#include "rusforge/ring.hpp"

namespace rusforge {

// Exact single-qubit Clifford+T synthesis and T-code normal forms.
//
// Conventions:
//  * Circuit1 vectors are in application order (front() acts first).
//  * TCode / DecoratedTCode syllables are stored in operator order: index 0 is
//    the leftmost factor of the operator product, i.e. the one applied last.
//    evalTCode / evalDecorated multiply them out in that order.

struct NotUnitary : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotInRing : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct TCountMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Pauli algebra (phase-exact).

enum class Pauli : std::uint8_t { I, X, Y, Z };

const RingMatrix& pauliMatrix(Pauli p);

// Exact product p*q = i^m * r.  Returns r and adds m (mod 4) into iPow.
Pauli mulPauli(Pauli p, Pauli q, int& iPow);

// Conjugation by H: H*p = sigma(p)*H * i^m (X<->Z swap; Y picks up a sign,
// m = 2).  Returns sigma(p) and adds m (mod 4) into iPow.
Pauli conjugatePauliByH(Pauli p, int& iPow);

// ---------------------------------------------------------------------------
// T codes and decorations.

// A T code is an operator product of syllables T^{eps}*H with eps = +/-1.
struct TCode {
  std::vector<int> eps;  // each +1 or -1, operator order

  int tCount() const { return static_cast<int>(eps.size()); }
};

// One decorated syllable: the operator product P * T^{eps} * Q * H.
struct DecSyllable {
  Pauli p = Pauli::I;
  int eps = 1;
  Pauli q = Pauli::I;
};

// A decorated T code with an explicit tracked phase: the represented operator
// is i^{iPow} * Prod_i (P_i * T^{eps_i} * Q_i * H).
struct DecoratedTCode {
  std::vector<DecSyllable> syl;
  int iPow = 0;  // power of i = omega^2, taken mod 4

  int tCount() const { return static_cast<int>(syl.size()); }
};

// The T-power sequence of a (decorated) code; Pauli insertions never change
// it, which is what makes decorations interchangeable inside a lifted design.
struct Signature {
  std::vector<int> ks;

  bool operator==(const Signature& o) const { return ks == o.ks; }
  bool operator!=(const Signature& o) const { return !(*this == o); }
};

TCode strip(const DecoratedTCode& dec);
Signature signatureOf(const TCode& code);
Signature signatureOf(const DecoratedTCode& dec);

// Number of non-identity Pauli gates written in the decoration.
int pauliCount(const DecoratedTCode& dec);

RingMatrix evalTCode(const TCode& code);
RingMatrix evalDecorated(const DecoratedTCode& dec);

// ---------------------------------------------------------------------------
// Normal forms.

// g1 * code * g2 as operator product; equals the circuit it was derived from
// exactly, global phase included (folded into g1).
struct TCodeForm {
  CliffordGate g1;
  TCode code;
  CliffordGate g2;
};

// g3 * dec * g4, exactly equal to the decoration target.
struct Decorated {
  CliffordGate g3;
  DecoratedTCode dec;
  CliffordGate g4;
};

RingMatrix evalTCodeForm(const TCodeForm& f);
RingMatrix evalDecoratedForm(const Decorated& d);

// Exact synthesis of a reduced 2x2 ring unitary into gates over
// {H,T,Tdg,S,Sdg,X,Y,Z,w^k} by strict denominator-exponent descent, finishing
// in the Clifford/monomial range.  The returned circuit evaluates to v
// exactly, global phase included, with minimal T-count.
Circuit1 exactSynthesize(const RingUnitary& v);

// Minimal T-count of the unitary (length of its T-code normal form).
int tcountOf(const RingUnitary& v);

// Rewrite any single-qubit Clifford+T circuit into g1 * code * g2 with exact
// matrix equality.
TCodeForm toTCodeForm(const Circuit1& c);

// The exact rewrite rules behind toTCodeForm: six Pauli-past-syllable
// identities plus the two H*S^{+/-1}*H expansions.  Every entry is verified
// by exact ring evaluation when the table is first built.
struct RewriteIdentity {
  std::string name;
  Circuit1 lhs;  // application order
  Circuit1 rhs;  // application order
};
const std::vector<RewriteIdentity>& rewriteIdentities();

// Rewrite target as g3 * dec * g4 where strip(dec) equals code.  Requires the
// target's minimal T-count to equal code's length; mismatched syllable signs
// are absorbed as X T^{eps} X decorations with the omega phases folded into
// g4.
Decorated decorate(const TCode& code, const RingUnitary& target);

// Code of the inverse: reverse the syllables and flip every sign.  Satisfies
// the exact identity  eval(code)^dagger == H * eval(reversalCode(code)) * H,
// so inverses never need resynthesis.
TCode reversalCode(const TCode& code);

// Sign-align target against base (equal lengths required, else
// TCountMismatch).  Returns dec with strip(dec) == base, plus an omega power
// m, such that  eval(dec) * w^m == eval(target)  exactly.
std::pair<DecoratedTCode, int> alignCodes(const TCode& base,
                                          const TCode& target);

// Signature-preserving Pauli reduction: pushes each syllable's trailing Pauli
// across its H into the next syllable, leaving at most tCount+1 non-identity
// Pauli gates.  Exact up to the tracked i^m phase (stored in the result).
DecoratedTCode reducePaulis(const DecoratedTCode& dec);

}  // namespace rusforge
