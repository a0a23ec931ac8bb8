#include "rusforge/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace rusforge {

namespace {

using Json = nlohmann::ordered_json;

double parseNumber(const std::string& s) {
  const std::string msg = "bad angle expression: '" + s + "'";
  if (s.empty()) throw std::invalid_argument(msg);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(msg);
  }
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(msg);
  return v;
}

std::string fmtDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmtShort(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Canonical word for a monomial Clifford w^j S^a X^b (S^2 and S^3 printed as
// the named gates Z and Sdg).
std::string monomialWord(const CliffordGate& g) {
  int j = 0, a = 0, b = 0;
  g.monomialParts(j, a, b);
  std::vector<std::string> ts;
  if (j != 0) ts.push_back("w^" + std::to_string(j));
  if (a == 1) ts.push_back("S");
  if (a == 2) ts.push_back("Z");
  if (a == 3) ts.push_back("Sdg");
  if (b != 0) ts.push_back("X");
  if (ts.empty()) return "I";
  std::string out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out += ' ';
    out += ts[i];
  }
  return out;
}

const char* pauliName(Pauli p) {
  switch (p) {
    case Pauli::X:
      return "X";
    case Pauli::Y:
      return "Y";
    case Pauli::Z:
      return "Z";
    default:
      return "I";
  }
}

Json coeffString(const CyclotomicInt& z) { return Json(z.toString()); }

Json root2String(const Root2Int& r) { return Json(r.toString()); }

Json branchJson(const BranchReport& b) {
  Json j;
  j["outcome"] = b.outcome;
  j["probability"] = b.probability;
  j["probabilityNumerator"] = root2String(b.probabilityNumerator);
  j["probabilityDenomExp"] = b.probabilityDenomExp;
  j["matchesExpected"] = b.matchesExpected;
  if (b.outcome == 0) j["distanceToTarget"] = b.distanceToTarget;
  j["inducedUnitary"] = b.inducedUnitary.toString();
  return j;
}

Json loweredJson(const CircuitN& c) {
  Json arr = Json::array();
  for (const GateOp& op : c.ops) {
    Json g;
    if (op.kind == GN::CNOT || op.kind == GN::CZ) {
      g["gate"] = op.kind == GN::CNOT ? "CNOT" : "CZ";
      g["qubits"] = Json::array({op.q0, op.q1});
    } else {
      g["gate"] = gateToken(Gate1Q{static_cast<G1>(op.kind), op.k});
      g["qubits"] = Json::array({op.q0});
    }
    arr.push_back(std::move(g));
  }
  return arr;
}

Json ops2qJson(const Circuit2& c) {
  Json arr = Json::array();
  for (const Gate2Q& g : c) {
    Json j;
    switch (g.kind) {
      case G2Kind::OnTarget:
        j["op"] = "target";
        j["gate"] = gateToken(g.g);
        break;
      case G2Kind::OnAncilla:
        j["op"] = "ancilla";
        j["gate"] = gateToken(g.g);
        break;
      case G2Kind::ControlledPauli:
        j["op"] = "controlledPauli";
        j["axis"] = pauliName(g.p);
        break;
      case G2Kind::ControlledClifford: {
        int jj = 0, aa = 0, bb = 0;
        g.cg.monomialParts(jj, aa, bb);
        j["op"] = "controlledClifford";
        j["omega"] = jj;
        j["s"] = aa;
        j["x"] = bb;
        j["word"] = monomialWord(g.cg);
        break;
      }
    }
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace

double parseTheta(const std::string& expr) {
  std::string s;
  for (char ch : expr) {
    if (!std::isspace(static_cast<unsigned char>(ch)))
      s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  const std::string msg = "bad angle expression: '" + expr + "'";
  if (s.empty()) throw std::invalid_argument(msg);
  double sign = 1.0;
  std::size_t pos = 0;
  if (s[0] == '+' || s[0] == '-') {
    if (s[0] == '-') sign = -1.0;
    pos = 1;
  }
  const std::string body = s.substr(pos);
  const std::size_t at = body.find("pi");
  if (at == std::string::npos) return sign * parseNumber(body);

  std::string pre = body.substr(0, at);
  const std::string post = body.substr(at + 2);
  double num = 1.0;
  double den = 1.0;
  if (!pre.empty()) {
    if (pre.back() == '*') pre.pop_back();
    const std::size_t slash = pre.find('/');
    if (slash != std::string::npos) {
      num = parseNumber(pre.substr(0, slash));
      den = parseNumber(pre.substr(slash + 1));
    } else if (!pre.empty()) {
      num = parseNumber(pre);
    }
  }
  if (!post.empty()) {
    if (post[0] != '/') throw std::invalid_argument(msg);
    den *= parseNumber(post.substr(1));
  }
  if (den == 0.0) throw std::invalid_argument("zero denominator in '" + expr + "'");
  return sign * num * std::numbers::pi / den;
}

Circuit1 exactEighthTurnCircuit(int diagPower) {
  const int k = ((diagPower % 8) + 8) % 8;
  Circuit1 c;
  if (k % 2 == 0) {
    const int m = (k / 2) % 4;
    for (int i = 0; i < m; ++i) c.push_back({G1::S, 0});
    if (m != 0) c.push_back({G1::OmegaPhase, (8 - m) % 8});
  } else {
    switch (k) {
      case 1:
        c.push_back({G1::T, 0});
        break;
      case 3:
        c.push_back({G1::S, 0});
        c.push_back({G1::T, 0});
        break;
      case 5:
        c.push_back({G1::Z, 0});
        c.push_back({G1::T, 0});
        break;
      default:
        c.push_back({G1::Tdg, 0});
        break;
    }
  }
  return c;
}

std::string listing1q(const Circuit1& c) {
  if (c.empty()) return "I";
  return printCircuit1(c);
}

std::string listing2q(const Circuit2& c) {
  std::vector<std::string> parts;
  // Operator order: rightmost factor is applied first, so walk the
  // application-order vector backwards and reverse each single-qubit run.
  for (std::size_t idx = c.size(); idx > 0;) {
    const Gate2Q& g = c[idx - 1];
    switch (g.kind) {
      case G2Kind::ControlledPauli:
        --idx;
        if (g.p != Pauli::I) parts.push_back(std::string("L(") + pauliName(g.p) + ")");
        break;
      case G2Kind::ControlledClifford:
        --idx;
        parts.push_back("L(" + monomialWord(g.cg) + ")");
        break;
      case G2Kind::OnTarget:
      case G2Kind::OnAncilla: {
        const G2Kind kind = g.kind;
        std::string run;
        while (idx > 0 && c[idx - 1].kind == kind) {
          if (!run.empty()) run += ' ';
          run += gateToken(c[idx - 1].g);
          --idx;
        }
        parts.push_back("(" + run + (kind == G2Kind::OnTarget ? ")_1" : ")_2"));
        break;
      }
    }
  }
  if (parts.empty()) return "I";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  return out;
}

std::string circuitJson(const SynthOutcome& o) {
  Json j;
  j["format"] = "rusforge-circuit/1";
  j["theta"] = o.theta;
  if (!o.thetaExpr.empty()) j["thetaExpr"] = o.thetaExpr;
  j["epsilon"] = o.epsilon;
  j["twoQubit"] = o.twoQubit;
  if (o.twoQubit) {
    const CircuitN lowered = toCircuitN(o.protocol.design);
    j["qubits"] = Json::array({"target", "ancilla"});
    j["listing"] = listing2q(o.protocol.design);
    j["tCount"] = o.protocol.designTcount;
    j["tDepth"] = tDepthN(lowered);
    j["controlledPauliCount"] = controlledPauliCount(o.protocol.design);
    j["successOutcome"] = o.protocol.successOutcome;
    j["failureCorrection"] = monomialWord(o.protocol.failureCorrection);
    j["ops"] = ops2qJson(o.protocol.design);
    j["lowered"] = loweredJson(lowered);
  } else {
    j["qubits"] = Json::array({"target"});
    j["listing"] = listing1q(o.exactCircuit);
    j["tCount"] = tCount1(o.exactCircuit);
    Json arr = Json::array();
    for (const Gate1Q& g : o.exactCircuit) {
      Json e;
      e["op"] = "target";
      e["gate"] = gateToken(g);
      arr.push_back(std::move(e));
    }
    j["ops"] = std::move(arr);
  }
  return j.dump(2) + "\n";
}

std::string synthReportJson(const SynthOutcome& o) {
  Json j;
  j["format"] = "rusforge-report/1";
  j["theta"] = o.theta;
  if (!o.thetaExpr.empty()) j["thetaExpr"] = o.thetaExpr;
  j["epsilon"] = o.epsilon;
  j["seed"] = o.seed;
  j["variant"] = o.variant;
  j["degenerate"] = o.design.degenerate;

  Json d;
  d["L"] = o.design.L;
  d["z"] = coeffString(o.design.z);
  d["r"] = root2String(o.design.r);
  d["rz"] = coeffString(o.design.rz);
  d["y"] = coeffString(o.design.y);
  d["successProbability"] = o.design.p;
  d["pNumerator"] = root2String(o.design.pNumerator);
  d["designTcount"] = o.design.designTcount;
  d["expectedTcount"] = o.design.expectedTcount;
  d["achievedDistance"] = o.design.achievedDistance;
  d["epsilonUsed"] = o.design.epsilonUsed;
  d["pslqIterations"] = o.design.pslqIterations;
  d["normEquationsSolved"] = o.design.normEquationsSolved;
  j["design"] = std::move(d);

  if (o.twoQubit) {
    Json p;
    p["variantD1"] = o.protocol.d1;
    p["variantD2"] = o.protocol.d2;
    p["successOutcome"] = o.protocol.successOutcome;
    p["failureCorrection"] = monomialWord(o.protocol.failureCorrection);
    p["tCount"] = o.protocol.designTcount;
    p["expectedTcount"] = o.protocol.expectedTcount;
    p["successProbability"] = o.protocol.p;
    p["pNumerator"] = root2String(o.protocol.pNumerator);
    p["L"] = o.protocol.L;
    j["protocol"] = std::move(p);
  } else {
    j["exactCircuit"] = listing1q(o.exactCircuit);
  }

  Json v;
  v["validated"] = o.validated;
  if (!o.validationError.empty()) v["error"] = o.validationError;
  if (o.validated) {
    v["success"] = branchJson(o.success);
    v["failure"] = branchJson(o.failure);
  }
  j["validation"] = std::move(v);
  j["wallTimeMs"] = o.wallTimeMs;
  return j.dump(2) + "\n";
}

std::string synthSummaryText(const SynthOutcome& o) {
  std::ostringstream out;
  out << "theta            = " << fmtDouble(o.theta);
  if (!o.thetaExpr.empty()) out << "  (" << o.thetaExpr << ")";
  out << "\n";
  out << "epsilon          = " << fmtShort(o.epsilon) << "\n";
  if (o.design.degenerate) {
    out << "exact eighth-turn angle: single-qubit circuit " << listing1q(o.exactCircuit) << "\n";
    out << "T-count          = " << o.design.designTcount << "\n";
    out << "distance         = 0 (exact)\n";
    return out.str();
  }
  out << "variant          = " << o.variant << "\n";
  out << "seed             = " << o.seed << "\n";
  out << "L                = " << o.design.L << "\n";
  out << "success prob     = " << fmtShort(o.protocol.p) << "  (exactly ("
      << o.protocol.pNumerator.toString() << ") / 2^" << o.protocol.L << ")\n";
  out << "design T-count   = " << o.protocol.designTcount << "\n";
  out << "expected T-count = " << fmtShort(o.protocol.expectedTcount) << "\n";
  out << "rotation accuracy: achieved distance = " << fmtShort(o.design.achievedDistance)
      << " (requested " << fmtShort(o.epsilon) << ")\n";
  out << "failure correction (up to phase) = " << monomialWord(o.protocol.failureCorrection)
      << "\n";
  if (o.validated) {
    out << "validation       = PASS (success branch distance "
        << fmtShort(o.success.distanceToTarget) << ")\n";
  } else {
    out << "validation       = FAIL";
    if (!o.validationError.empty()) out << " (" << o.validationError << ")";
    out << "\n";
  }
  out << "wall time        = " << fmtShort(o.wallTimeMs) << " ms\n";
  return out.str();
}

namespace {

GateOp opFromJson(const Json& g) {
  const std::string name = g.at("gate").get<std::string>();
  const auto& qs = g.at("qubits");
  GateOp op;
  if (name == "CNOT" || name == "CZ") {
    op.kind = name == "CNOT" ? GN::CNOT : GN::CZ;
    op.q0 = qs.at(0).get<int>();
    op.q1 = qs.at(1).get<int>();
    return op;
  }
  const auto parsed = parseGateToken(name);
  if (!parsed) throw std::invalid_argument("unknown gate token '" + name + "'");
  op.kind = static_cast<GN>(parsed->kind);
  op.k = parsed->k;
  op.q0 = qs.at(0).get<int>();
  return op;
}

struct CheckLog {
  bool pass = true;
  std::string text;

  void check(bool ok, const std::string& what) {
    text += ok ? "ok:   " : "FAIL: ";
    text += what;
    text += '\n';
    if (!ok) pass = false;
  }
};

}  // namespace

FileCheck verifyCircuitReport(const std::string& circuitText,
                              const std::string& reportText) {
  CheckLog log;
  Json circuit, report;
  try {
    circuit = Json::parse(circuitText);
    report = Json::parse(reportText);
  } catch (const std::exception& e) {
    return {false, std::string("FAIL: JSON parse: ") + e.what() + "\n"};
  }
  try {
    const double theta = report.at("theta").get<double>();
    const double epsilon = report.at("epsilon").get<double>();
    const bool twoQubit = circuit.at("twoQubit").get<bool>();
    log.check(circuit.at("theta").get<double>() == theta,
              "circuit and report agree on theta");

    if (!twoQubit) {
      Circuit1 c;
      for (const auto& e : circuit.at("ops"))
        c.push_back(*parseGateToken(e.at("gate").get<std::string>()));
      log.check(tCount1(c) == circuit.at("tCount").get<int>(),
                "re-counted T gates match the stored tCount");
      RingMatrix m = evalCircuit1(c);
      m.reduce();
      const bool diag = m.at(0, 1).isZero() && m.at(1, 0).isZero();
      log.check(diag, "exact circuit is diagonal");
      if (diag) {
        const double dist = rotationDistance(m.at(0, 0), m.at(1, 1), theta);
        log.check(dist <= 1e-15, "exact circuit realizes the rotation (distance " +
                                     fmtShort(dist) + ")");
      }
      return {log.pass, log.text};
    }

    CircuitN c;
    c.nQubits = 2;
    for (const auto& e : circuit.at("lowered")) c.ops.push_back(opFromJson(e));
    log.check(tCountN(c) == circuit.at("tCount").get<int>(),
              "re-counted T gates match the stored tCount");

    RingState col0 = simulateExact(c, 0);
    RingState col1 = simulateExact(c, 2);
    log.check(col0.normConserved() && col1.normConserved(),
              "exact simulation conserves the norm on both inputs");
    if (col0.L != col1.L) {
      log.check(false, "simulated columns share a denominator exponent");
      return {log.pass, log.text};
    }
    const int L = col0.L;

    // Branch operators: outcome a maps input |psi> to M_a|psi| with
    // M_a[t][psi] = amplitude of |t a> in the column started from |psi 0>.
    RingMatrix m0(2, L), m1(2, L);
    for (int t = 0; t < 2; ++t) {
      m0.at(t, 0) = col0.amp[2 * t];
      m0.at(t, 1) = col1.amp[2 * t];
      m1.at(t, 0) = col0.amp[2 * t + 1];
      m1.at(t, 1) = col1.amp[2 * t + 1];
    }
    const bool diag = m0.at(0, 1).isZero() && m0.at(1, 0).isZero();
    log.check(diag, "success branch acts diagonally");
    log.check(m0.at(1, 1) == m0.at(0, 0).conj(),
              "success branch diagonal is a conjugate pair");

    // Probabilities are input-independent: per input column psi the success
    // weight is sum_t |m0[t][psi]|^2 / 2^L.
    const Root2Int w0a = m0.at(0, 0).absSquared() + m0.at(1, 0).absSquared();
    const Root2Int w0b = m0.at(0, 1).absSquared() + m0.at(1, 1).absSquared();
    log.check(w0a == w0b, "success probability is input-independent");
    const double p = std::ldexp(w0a.toDouble(), -L);
    const double pClaim = report.at("protocol").at("successProbability").get<double>();
    log.check(std::abs(p - pClaim) <= 1e-9 * std::max(1.0, std::abs(pClaim)),
              "re-derived success probability matches the report (" + fmtShort(p) + ")");

    if (diag) {
      const double dist = rotationDistance(m0.at(0, 0), m0.at(1, 1), theta);
      log.check(dist <= epsilon, "success rotation is within epsilon of the target (distance " +
                                     fmtShort(dist) + ")");
      if (report.at("validation").contains("success")) {
        const double claimed =
            report.at("validation").at("success").at("distanceToTarget").get<double>();
        log.check(std::abs(dist - claimed) <= 1e-12,
                  "re-derived rotation distance matches the report");
      }
    }
    log.check(report.at("design").at("achievedDistance").get<double>() <= epsilon,
              "reported achieved distance is within epsilon");

    // Failure branch must be proportional to a unitary: M1 M1^dag scalar.
    const RingMatrix prod = matMul(m1, matAdjoint(m1));
    const bool scalar = prod.at(0, 1).isZero() && prod.at(1, 0).isZero() &&
                        prod.at(0, 0) == prod.at(1, 1);
    log.check(scalar, "failure branch is proportional to a unitary");
  } catch (const std::exception& e) {
    log.check(false, std::string("exception during re-check: ") + e.what());
  }
  return {log.pass, log.text};
}

}  // namespace rusforge
