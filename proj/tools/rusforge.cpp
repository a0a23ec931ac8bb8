#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rusforge/bench.hpp"
#include "rusforge/io.hpp"
#include "rusforge/normeq.hpp"
#include "rusforge/pipeline.hpp"
#include "rusforge/rus2q.hpp"
#include "rusforge/verify.hpp"

namespace {

using namespace rusforge;

constexpr double kEpsilonFloor = 1e-20;  // desk-scale accuracy cap

std::optional<std::uint64_t> envSeed() {
  const char* v = std::getenv("RUS_FORGE_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  const unsigned long long parsed = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') return std::nullopt;
  return parsed;
}

bool writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

std::optional<std::string> readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RusVariant parseVariant(const std::string& name) {
  if (name == "plain") return RusVariant::Plain;
  if (name == "s-corrected") return RusVariant::SCorrected;
  if (name == "best") return RusVariant::Best;
  throw std::invalid_argument("unknown variant '" + name +
                              "' (expected plain, s-corrected or best)");
}

std::string traceJson(const std::vector<SearchTraceEntry>& trace) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const SearchTraceEntry& e : trace) {
    nlohmann::ordered_json j;
    j["r"] = e.r.toString();
    j["Lr"] = e.Lr;
    j["solvable"] = e.solvable;
    if (e.solvable) {
      j["p"] = e.p;
      j["tc"] = e.tc;
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

struct SynthArgs {
  std::string thetaExpr;
  double epsilon = 1e-10;
  std::uint64_t seed = 0;
  bool seedGiven = false;
  double delta = 0.25;
  int sz = 4;
  double pmin = 0.5;
  std::string variant = "best";
  bool trace = false;
  std::string out;
};

int runSynth(const SynthArgs& a) {
  double theta = 0.0;
  try {
    theta = parseTheta(a.thetaExpr);
  } catch (const std::exception& e) {
    std::cerr << "synth: angle parsing: " << e.what() << "\n";
    return 2;
  }
  if (!(a.epsilon >= kEpsilonFloor)) {
    std::cerr << "synth: angle parsing: epsilon must be at least 1e-20\n";
    return 2;
  }

  SynthOutcome o;
  o.theta = theta;
  o.thetaExpr = a.thetaExpr;
  o.epsilon = a.epsilon;
  o.seed = a.seedGiven ? a.seed : envSeed().value_or(0);
  o.variant = a.variant;

  std::vector<SearchTraceEntry> trace;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    SearchParams params;
    params.delta = a.delta;
    params.sz = a.sz;
    params.pMin = a.pmin;
    params.rngSeed = o.seed;
    o.design = singleQubitDesign(theta, a.epsilon, params, a.trace ? &trace : nullptr);
  } catch (const std::exception& e) {
    std::cerr << "synth: design search: " << e.what() << "\n";
    return 2;
  }

  if (o.design.degenerate) {
    o.twoQubit = false;
    o.exactCircuit = exactEighthTurnCircuit(o.design.diagPower);
    RingMatrix got = evalCircuit1(o.exactCircuit);
    got.reduce();
    o.validated = got == o.design.matrix;
    if (!o.validated) o.validationError = "exact circuit disagrees with the design matrix";
  } else {
    o.twoQubit = true;
    try {
      o.protocol = rusSynthesis(o.design.matrix, parseVariant(a.variant));
    } catch (const std::exception& e) {
      std::cerr << "synth: rus synthesis: " << e.what() << "\n";
      return 2;
    }
    try {
      const auto branches = validateProtocol(o.protocol, theta);
      o.success = branches.first;
      o.failure = branches.second;
      o.validated = o.success.matchesExpected && o.failure.matchesExpected &&
                    o.success.distanceToTarget <= a.epsilon;
      if (!o.validated) o.validationError = "branch checks did not meet the claims";
    } catch (const std::exception& e) {
      o.validated = false;
      o.validationError = e.what();
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  o.wallTimeMs = std::chrono::duration<double, std::milli>(t1 - t0).count();

  std::cout << synthSummaryText(o);
  if (a.trace) std::cout << "search trace:\n" << traceJson(trace);

  if (!a.out.empty()) {
    const std::string listing =
        (o.twoQubit ? listing2q(o.protocol.design) : listing1q(o.exactCircuit)) + "\n";
    if (!writeFile(a.out + ".circuit.json", circuitJson(o)) ||
        !writeFile(a.out + ".listing.txt", listing) ||
        !writeFile(a.out + ".report.json", synthReportJson(o))) {
      std::cerr << "synth: output: cannot write '" << a.out << ".*'\n";
      return 2;
    }
    std::cout << "wrote " << a.out << ".circuit.json, " << a.out << ".listing.txt, "
              << a.out << ".report.json\n";
  }
  if (!o.validated) {
    std::cerr << "synth: validation: " << o.validationError << "\n";
    return 3;
  }
  return 0;
}

int runVerify(const std::string& prefix) {
  const auto circuit = readFile(prefix + ".circuit.json");
  const auto report = readFile(prefix + ".report.json");
  if (!circuit || !report) {
    std::cerr << "verify: input: cannot read '" << prefix << ".circuit.json' / '"
              << prefix << ".report.json'\n";
    return 2;
  }
  const FileCheck fc = verifyCircuitReport(*circuit, *report);
  std::cout << fc.text;
  std::cout << (fc.pass ? "verify: PASS\n" : "verify: FAIL\n");
  return fc.pass ? 0 : 3;
}

struct BenchArgs {
  std::string mode = "random";
  int count = 50;
  std::vector<double> epsilons;
  std::uint64_t seed = 0;
  bool seedGiven = false;
  int kmin = 2;
  int kmax = 41;
  double delta = 0.25;
  int sz = 4;
  double pmin = 0.5;
  std::string out;
};

int runBenchCmd(const BenchArgs& a) {
  BenchOptions opt;
  if (a.mode == "random") {
    opt.fourier = false;
  } else if (a.mode == "fourier") {
    opt.fourier = true;
  } else {
    std::cerr << "bench: options: unknown mode '" << a.mode
              << "' (expected random or fourier)\n";
    return 2;
  }
  if (a.seedGiven) {
    opt.seed = a.seed;
  } else if (const auto s = envSeed()) {
    opt.seed = *s;
  } else {
    std::cerr << "bench: options: a seed is required (--seed or RUS_FORGE_SEED)\n";
    return 2;
  }
  opt.angles = a.count;
  opt.kMin = a.kmin;
  opt.kMax = a.kmax;
  opt.epsilons = a.epsilons.empty()
                     ? std::vector<double>{1e-11, 1e-12, 1e-13, 1e-14, 1e-15}
                     : a.epsilons;
  for (double e : opt.epsilons) {
    if (!(e >= kEpsilonFloor)) {
      std::cerr << "bench: options: every epsilon must be at least 1e-20\n";
      return 2;
    }
  }
  opt.params.delta = a.delta;
  opt.params.sz = a.sz;
  opt.params.pMin = a.pmin;

  std::vector<BenchRecord> rows;
  try {
    rows = runBench(opt, &std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "bench: run: " << e.what() << "\n";
    return 2;
  }
  const std::string csv = benchCsv(rows);
  const std::string summary = benchSummaryText(summarizeBench(rows));
  if (!a.out.empty()) {
    if (!writeFile(a.out + ".csv", csv) || !writeFile(a.out + ".summary.txt", summary)) {
      std::cerr << "bench: output: cannot write '" << a.out << ".*'\n";
      return 2;
    }
    std::cout << "wrote " << a.out << ".csv, " << a.out << ".summary.txt\n";
  } else {
    std::cout << csv;
  }
  std::cout << "rows: " << rows.size() << "\n" << summary;
  return 0;
}

int runDensityCmd(int ell, const std::string& out) {
  DensityResult d;
  try {
    d = runDensity(ell);
  } catch (const std::exception& e) {
    std::cerr << "density: scan: " << e.what() << "\n";
    return 2;
  }
  std::cout << "ell=" << d.ell << " grey=" << d.grey.size() << " blue=" << d.blue.size()
            << " rotations=" << d.blueAngles << " epsMax=" << d.epsMax
            << " shallow=" << d.red.size() << " shallowWithinEpsMax=" << d.redWithinEpsMax
            << "\n";
  if (!out.empty()) {
    if (!writeFile(out + ".density.json", densityJson(d))) {
      std::cerr << "density: output: cannot write '" << out << ".density.json'\n";
      return 2;
    }
    std::cout << "wrote " << out << ".density.json\n";
  } else {
    std::cout << densityJson(d);
  }
  return 0;
}

int runNormSolve(const std::string& aStr, const std::string& bStr) {
  Root2Int xi;
  try {
    xi = Root2Int{BigInt(aStr), BigInt(bStr)};
  } catch (const std::exception& e) {
    std::cerr << "norm-solve: parsing: " << e.what() << "\n";
    return 2;
  }
  std::cout << "xi = " << xi.toString() << "\n";
  const LimitedFactorization fact = limitedFactor(xi);
  std::cout << fact.toString() << "\n";
  if (!fact.verdict.easilySolvable) {
    const char* why = "";
    switch (fact.verdict.reason) {
      case SolvabilityReason::badResidual:
        why = "a non-representable factor appears to an odd power";
        break;
      case SolvabilityReason::negativeUnderEmbedding:
        why = "xi is negative under a real embedding";
        break;
      case SolvabilityReason::timeout:
        why = "the factoring budget ran out before a verdict";
        break;
      default:
        why = "not solvable";
        break;
    }
    std::cout << "norm equation not attempted: " << why << "\n";
    return 3;
  }
  try {
    const CyclotomicInt y = solveNormEquation(xi, fact);
    std::cout << "y = " << y.toString() << "\n";
    std::cout << (y.absSquared() == xi ? "check: |y|^2 == xi (exact)\n"
                                       : "check: FAILED\n");
    return y.absSquared() == xi ? 0 : 3;
  } catch (const std::exception& e) {
    std::cerr << "norm-solve: solving: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rusforge: repeat-until-success Clifford+T synthesis of z-rotations\n"
      "with exact ring-arithmetic verification"};
  app.require_subcommand(1);

  SynthArgs sa;
  CLI::App* synth = app.add_subcommand(
      "synth", "Synthesize an approximation of Rz(theta) and validate it");
  synth->add_option("--theta", sa.thetaExpr,
                    "angle: decimal or rational multiple of pi (e.g. pi/64, -3pi/4)")
      ->required();
  synth->add_option("--epsilon", sa.epsilon, "target distance (default 1e-10)");
  CLI::Option* synthSeed = synth->add_option("--seed", sa.seed, "search seed");
  synth->add_option("--delta", sa.delta, "normalization domain factor (0, 1]");
  synth->add_option("--sz", sa.sz, "normalization sample budget factor");
  synth->add_option("--pmin", sa.pmin, "success-probability floor [0.5, 1)");
  synth->add_option("--variant", sa.variant, "plain | s-corrected | best (default)");
  synth->add_flag("--trace", sa.trace, "dump the normalization search trace");
  synth->add_option("--out", sa.out,
                    "output prefix: writes .circuit.json, .listing.txt, .report.json");

  std::string verifyPrefix;
  CLI::App* verify = app.add_subcommand(
      "verify", "Re-simulate a written circuit and re-check its report's claims");
  verify->add_option("prefix", verifyPrefix,
                     "prefix used with synth --out (reads prefix.circuit.json and "
                     "prefix.report.json)")
      ->required();

  BenchArgs ba;
  CLI::App* bench = app.add_subcommand("bench", "Accuracy/T-count benchmark grid");
  bench->add_option("--mode", ba.mode, "random (default) | fourier (theta = pi/2^k)");
  bench->add_option("--count", ba.count, "random mode: number of angles (default 50)");
  bench->add_option("--epsilons", ba.epsilons,
                    "target accuracies (default 1e-11 .. 1e-15)")
      ->delimiter(',');
  CLI::Option* benchSeed = bench->add_option("--seed", ba.seed, "bench seed (required)");
  bench->add_option("--kmin", ba.kmin, "fourier mode: smallest exponent (default 2)");
  bench->add_option("--kmax", ba.kmax, "fourier mode: largest exponent (default 41)");
  bench->add_option("--delta", ba.delta, "normalization domain factor");
  bench->add_option("--sz", ba.sz, "normalization sample budget factor");
  bench->add_option("--pmin", ba.pmin, "success-probability floor");
  bench->add_option("--out", ba.out, "output prefix: writes .csv and .summary.txt");

  int ell = 3;
  std::string densityOut;
  CLI::App* density = app.add_subcommand(
      "density", "Exact-rotation density scan at denominator exponent ell");
  density->add_option("--ell", ell, "denominator exponent, 0..4 (default 3)");
  density->add_option("--out", densityOut, "output prefix: writes .density.json");

  std::string nsA, nsB = "0";
  CLI::App* normSolve = app.add_subcommand(
      "norm-solve", "Solve |y|^2 = a + b*sqrt(2) over the cyclotomic ring");
  normSolve->add_option("a", nsA, "rational part")->required();
  normSolve->add_option("b", nsB, "sqrt(2) coefficient (default 0)");

  CLI11_PARSE(app, argc, argv);

  if (synth->parsed()) {
    sa.seedGiven = synthSeed->count() > 0;
    return runSynth(sa);
  }
  if (verify->parsed()) return runVerify(verifyPrefix);
  if (bench->parsed()) {
    ba.seedGiven = benchSeed->count() > 0;
    return runBenchCmd(ba);
  }
  if (density->parsed()) return runDensityCmd(ell, densityOut);
  if (normSolve->parsed()) return runNormSolve(nsA, nsB);
  return 1;
}
