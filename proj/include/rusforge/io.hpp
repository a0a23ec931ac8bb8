#pragma once

#include <cstdint>
#include <string>

#include "rusforge/pipeline.hpp"
#include "rusforge/rus2q.hpp"
#include "rusforge/verify.hpp"

namespace rusforge {

// Parse a rotation-angle expression: a decimal literal ("0.3137", "-1e-2")
// or a rational multiple of pi ("pi", "pi/64", "-3pi/4", "0.5*pi", "3/8*pi").
// Whitespace is ignored.  Throws std::invalid_argument on malformed input.
double parseTheta(const std::string& expr);

// Single-qubit circuit as space-separated tokens in application order
// (H T Tdg S Sdg X Y Z w^k), matching parseCircuit1.
std::string listing1q(const Circuit1& c);

// Two-qubit design rendered as an operator product (rightmost factor applied
// first): L(X)/L(Y)/L(Z) for controlled Paulis, L(w^j S^a X^b) for free
// controlled monomials, runs of target gates as (...)_1 and runs of ancilla
// gates as (...)_2 with tokens in operator order.
std::string listing2q(const Circuit2& c);

// Everything one synthesis run produced; the serializers below turn this
// into the circuit JSON, the listing, and the validation report.
struct SynthOutcome {
  double theta = 0.0;
  std::string thetaExpr;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string variant = "best";
  DesignResult design;
  // Exact eighth-turn angles compile to a single-qubit circuit; everything
  // else becomes a two-qubit protocol.
  bool twoQubit = false;
  RusProtocol protocol;   // valid when twoQubit
  Circuit1 exactCircuit;  // valid when !twoQubit
  bool validated = false;
  BranchReport success;  // valid when twoQubit && validated
  BranchReport failure;  // valid when twoQubit && validated
  std::string validationError;  // set when validation threw
  double wallTimeMs = 0.0;
};

// Exact single-qubit circuit for theta = k*pi/4 (k taken mod 8): equals
// Rz(k*pi/4) exactly for even k, and the monomial diag(1, w^k) — the same
// rotation up to a global phase — for odd k.
Circuit1 exactEighthTurnCircuit(int diagPower);

// Machine-readable circuit description (gate lists plus the listing).
std::string circuitJson(const SynthOutcome& o);

// Full synthesis + validation report.
std::string synthReportJson(const SynthOutcome& o);

// Human-readable one-screen summary for the terminal.
std::string synthSummaryText(const SynthOutcome& o);

// Independent re-check of a written circuit + report pair: rebuilds the gate
// list from the JSON, re-simulates it exactly, and re-derives the branch
// operators, probabilities and rotation distance, comparing them against the
// report's claims.  `text` holds one line per check.
struct FileCheck {
  bool pass = false;
  std::string text;
};
FileCheck verifyCircuitReport(const std::string& circuitText,
                              const std::string& reportText);

}  // namespace rusforge
