#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rusforge/pipeline.hpp"

namespace rusforge {

struct BenchRecord {
  double theta = 0.0;
  double epsilon = 0.0;
  double achievedDistance = 0.0;
  int designTcount = 0;
  double successProb = 1.0;
  double expectedTcount = 0.0;
  int pslqIterations = 0;
  long long normEquationsSolved = 0;
  double wallTimeMs = 0.0;
};

struct BenchOptions {
  int angles = 50;               // random mode: number of angles
  std::vector<double> epsilons;  // target accuracies (at least one)
  std::uint64_t seed = 0;        // seeds both the angles and the searches
  bool fourier = false;          // theta = pi / 2^k, k = kMin .. kMax
  int kMin = 2;
  int kMax = 20;
  SearchParams params;  // delta / sz / pMin forwarded to every search
};

// Synthesizes the full angle x epsilon grid.  Every non-degenerate row is
// re-validated branch by branch (exact simulation) before being accepted;
// rows whose synthesis or validation fails are reported on `log` and
// skipped.  The result is sorted by (theta, epsilon) and — wall time
// aside — is a deterministic function of the options.
std::vector<BenchRecord> runBench(const BenchOptions& opt, std::ostream* log);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
// Least-squares line through (xs[i], ys[i]); requires xs.size() == ys.size().
LineFit fitLine(const std::vector<double>& xs, const std::vector<double>& ys);

struct BenchSummary {
  LineFit tcount;  // mean expected T-count vs log10(1/epsilon)
  LineFit pslq;    // mean relation-stage iterations vs log10(1/epsilon)
  // Per-epsilon means, sorted by log10(1/epsilon):
  //   (log10(1/eps), mean expected T-count) and (.., mean pslq iterations).
  std::vector<std::pair<double, double>> tcountMeans;
  std::vector<std::pair<double, double>> pslqMeans;
};
BenchSummary summarizeBench(const std::vector<BenchRecord>& rows);

std::string benchCsv(const std::vector<BenchRecord>& rows);
// Regression summary including the reference scaling 3*log2(1/eps) next to
// each per-epsilon mean.
std::string benchSummaryText(const BenchSummary& s);

// ---------------------------------------------------------------------------
// Density scan: which points of the unit disc are top-left entries of exact
// protocol unitaries at denominator exponent ell.

struct DensityPoint {
  double re = 0.0;
  double im = 0.0;
};

struct DensityResult {
  int ell = 0;
  // Candidate pairs (x0, y0) over Z[w] with totally nonnegative slack
  // 2^ell - |x0|^2 - |y0|^2, displayed as x0 / sqrt(|x0|^2 + |y0|^2) with x0
  // in the closed first quadrant; deduplicated to display resolution.
  std::vector<DensityPoint> grey;
  // Subset whose slack norm equation is solvable: these are exactly
  // realizable success operators diag(x, conj x), i.e. exact z-rotations.
  std::vector<DensityPoint> blue;
  int blueAngles = 0;   // distinct rotation angles among the blue points
  double epsMax = 0.0;  // max over blue rotations of the distance to the
                        // nearest other blue rotation
  // Shallow unitary-circuit comparison set: top-left entries with Gaussian
  // numerator, x = (p + q i)/sqrt(2)^m for m in {8, 9} (the denominator
  // exponents reachable at T count <= 8), p, q >= 0, such that the norm
  // equation |y|^2 = 2^m - p^2 - q^2 is solvable over the cyclotomic ring.
  std::vector<DensityPoint> red;
  int redWithinEpsMax = 0;  // red points with sqrt(1 - |x|) <= epsMax, i.e.
                            // within epsMax of their nearest z-rotation
};

// Throws std::invalid_argument unless 0 <= ell <= 4 (the scan is quartic in
// the radius).
DensityResult runDensity(int ell);
std::string densityJson(const DensityResult& d);

}  // namespace rusforge
