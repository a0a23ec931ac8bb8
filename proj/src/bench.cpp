#include "rusforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "rusforge/normeq.hpp"
#include "rusforge/rus2q.hpp"
#include "rusforge/verify.hpp"

namespace rusforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::optional<BenchRecord> benchRow(double theta, double eps,
                                    const SearchParams& params,
                                    std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const DesignResult res = singleQubitDesign(theta, eps, params);
    BenchRecord rec;
    rec.theta = theta;
    rec.epsilon = eps;
    rec.achievedDistance = res.achievedDistance;
    rec.pslqIterations = res.pslqIterations;
    rec.normEquationsSolved = res.normEquationsSolved;
    if (res.degenerate) {
      rec.designTcount = res.designTcount;
      rec.successProb = 1.0;
      rec.expectedTcount = res.expectedTcount;
    } else {
      const RusProtocol proto = rusSynthesis(res.matrix, RusVariant::Best);
      // Throws ProtocolMismatch when any simulated branch disagrees.
      const auto branches = validateProtocol(proto, theta);
      if (!branches.first.matchesExpected || !branches.second.matchesExpected)
        throw std::runtime_error("branch validation failed");
      rec.designTcount = proto.designTcount;
      rec.successProb = proto.p;
      rec.expectedTcount = proto.expectedTcount;
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.wallTimeMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return rec;
  } catch (const std::exception& e) {
    if (log) {
      *log << "bench: skipping theta=" << theta << " eps=" << eps << ": "
           << e.what() << "\n";
    }
    return std::nullopt;
  }
}

}  // namespace

std::vector<BenchRecord> runBench(const BenchOptions& opt, std::ostream* log) {
  if (opt.epsilons.empty())
    throw std::invalid_argument("bench needs at least one epsilon");
  std::vector<double> thetas;
  if (opt.fourier) {
    if (opt.kMin < 1 || opt.kMax < opt.kMin)
      throw std::invalid_argument("bad fourier exponent range");
    for (int k = opt.kMin; k <= opt.kMax; ++k)
      thetas.push_back(std::numbers::pi / std::ldexp(1.0, k));
  } else {
    if (opt.angles < 1) throw std::invalid_argument("bench needs angles >= 1");
    std::mt19937_64 gen(opt.seed);
    std::uniform_real_distribution<double> dist(0.0, std::numbers::pi);
    for (int i = 0; i < opt.angles; ++i) thetas.push_back(dist(gen));
  }

  std::vector<BenchRecord> rows;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = 0; j < opt.epsilons.size(); ++j) {
      SearchParams params = opt.params;
      params.rngSeed = splitmix64(
          opt.seed ^ splitmix64(static_cast<std::uint64_t>(i) * 1000003ULL + j));
      if (auto rec = benchRow(thetas[i], opt.epsilons[j], params, log))
        rows.push_back(*rec);
    }
  }
  std::sort(rows.begin(), rows.end(), [](const BenchRecord& a, const BenchRecord& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.epsilon < b.epsilon;
  });
  return rows;
}

LineFit fitLine(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("fitLine needs equal-length inputs");
  const std::size_t n = xs.size();
  if (n == 0) return {};
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) return {0.0, my};
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

BenchSummary summarizeBench(const std::vector<BenchRecord>& rows) {
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> byEps;
  for (const BenchRecord& r : rows) {
    byEps[r.epsilon].first.push_back(r.expectedTcount);
    byEps[r.epsilon].second.push_back(static_cast<double>(r.pslqIterations));
  }
  BenchSummary s;
  std::vector<double> xs, ts, ps;
  for (const auto& [eps, cols] : byEps) {
    const double x = std::log10(1.0 / eps);
    double tm = 0, pm = 0;
    for (double v : cols.first) tm += v;
    for (double v : cols.second) pm += v;
    tm /= static_cast<double>(cols.first.size());
    pm /= static_cast<double>(cols.second.size());
    s.tcountMeans.push_back({x, tm});
    s.pslqMeans.push_back({x, pm});
    xs.push_back(x);
    ts.push_back(tm);
    ps.push_back(pm);
  }
  std::sort(s.tcountMeans.begin(), s.tcountMeans.end());
  std::sort(s.pslqMeans.begin(), s.pslqMeans.end());
  s.tcount = fitLine(xs, ts);
  s.pslq = fitLine(xs, ps);
  return s;
}

std::string benchCsv(const std::vector<BenchRecord>& rows) {
  std::string out =
      "theta,epsilon,achievedDistance,designTcount,successProb,"
      "expectedTcount,pslqIterations,normEquationsSolved,wallTimeMs\n";
  char buf[320];
  for (const BenchRecord& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d,%.17g,%.17g,%d,%lld,%.3f\n",
                  r.theta, r.epsilon, r.achievedDistance, r.designTcount,
                  r.successProb, r.expectedTcount, r.pslqIterations,
                  r.normEquationsSolved, r.wallTimeMs);
    out += buf;
  }
  return out;
}

std::string benchSummaryText(const BenchSummary& s) {
  std::ostringstream out;
  out.precision(6);
  out << "mean expected T-count vs log10(1/eps): slope " << s.tcount.slope
      << ", intercept " << s.tcount.intercept << "\n";
  out << "relation iterations  vs log10(1/eps): slope " << s.pslq.slope
      << ", intercept " << s.pslq.intercept << "\n";
  const double log2PerDecade = 1.0 / std::log10(2.0);
  for (std::size_t i = 0; i < s.tcountMeans.size(); ++i) {
    const auto [x, tm] = s.tcountMeans[i];
    out << "  log10(1/eps) = " << x << ": mean expected T = " << tm
        << ", reference 3*log2(1/eps) = " << 3.0 * x * log2PerDecade;
    if (i < s.pslqMeans.size())
      out << ", mean relation iterations = " << s.pslqMeans[i].second;
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Density scan.

namespace {

struct RingPoint {
  CyclotomicInt v;
  Root2Int n2;  // |v|^2
  std::complex<double> z;
};

// All v in Z[w] whose absolute square is at most 2^ell in both real
// embeddings.  |v|^2 + |v~|^2 = 2(a^2+b^2+c^2+d^2), so the coefficient box
// |coef| <= sqrt(2^ell) is exhaustive.
std::vector<RingPoint> ringBall(int ell) {
  const long long cap = 1LL << ell;
  const int R = static_cast<int>(std::floor(std::sqrt(static_cast<double>(cap)) + 1e-9));
  std::vector<RingPoint> out;
  for (int a = -R; a <= R; ++a) {
    for (int b = -R; b <= R; ++b) {
      for (int c = -R; c <= R; ++c) {
        for (int d = -R; d <= R; ++d) {
          if (static_cast<long long>(a) * a + static_cast<long long>(b) * b +
                  static_cast<long long>(c) * c + static_cast<long long>(d) * d >
              cap)
            continue;
          CyclotomicInt v{a, b, c, d};
          const Root2Int n2 = v.absSquared();
          const Root2Int slack = Root2Int{BigInt(cap), BigInt(0)} - n2;
          if (!slack.isZero() && !(slack.sign() > 0 && slack.conjBullet().sign() > 0))
            continue;
          out.push_back({v, n2, v.complexValue()});
        }
      }
    }
  }
  return out;
}

long long displayKey(double v) { return std::llround(v * 1e9); }

}  // namespace

DensityResult runDensity(int ell) {
  if (ell < 0 || ell > 4)
    throw std::invalid_argument("density scan supports 0 <= ell <= 4");
  DensityResult res;
  res.ell = ell;
  const long long cap = 1LL << ell;
  const Root2Int capR{BigInt(cap), BigInt(0)};

  const std::vector<RingPoint> ball = ringBall(ell);
  std::vector<const RingPoint*> xs;
  for (const RingPoint& p : ball) {
    if (p.v.isZero()) continue;
    if (p.z.real() >= -1e-12 && p.z.imag() >= -1e-12) xs.push_back(&p);
  }

  std::map<std::string, bool> solvableMemo;
  const auto slackSolvable = [&](const Root2Int& slack) {
    if (slack.isZero()) return true;
    if (!slack.isTotallyPositive()) return false;
    const std::string key = slack.toString();
    if (const auto it = solvableMemo.find(key); it != solvableMemo.end())
      return it->second;
    bool ok = false;
    const LimitedFactorization fact = limitedFactor(slack);
    if (fact.verdict.easilySolvable) {
      const CyclotomicInt w = solveNormEquation(slack, fact);
      ok = w.absSquared() == slack;
    }
    solvableMemo.emplace(key, ok);
    return ok;
  };

  std::set<std::pair<long long, long long>> greyKeys, blueKeys;
  std::set<long long> angleKeys;
  std::vector<double> blueAngles;
  for (const RingPoint* xp : xs) {
    for (const RingPoint& yp : ball) {
      const Root2Int slack = capR - (xp->n2 + yp.n2);
      if (slack.sign() < 0) continue;
      if (!slack.isZero() && !(slack.sign() > 0 && slack.conjBullet().sign() > 0))
        continue;
      const double norm =
          std::sqrt(std::norm(xp->z) + std::norm(yp.z));
      const DensityPoint disp{xp->z.real() / norm, xp->z.imag() / norm};
      const auto key = std::make_pair(displayKey(disp.re), displayKey(disp.im));
      if (greyKeys.insert(key).second) res.grey.push_back(disp);
      if (!slackSolvable(slack)) continue;
      if (blueKeys.insert(key).second) res.blue.push_back(disp);
      const double angle = -2.0 * std::arg(xp->z);
      if (angleKeys.insert(displayKey(angle)).second) blueAngles.push_back(angle);
    }
  }
  res.blueAngles = static_cast<int>(blueAngles.size());

  // Nearest-neighbor spread of the realizable rotations: the rotation-metric
  // distance sqrt(1 - |cos((a - b)/2)|) is monotone in |a - b| on [0, pi],
  // so sorted adjacency finds each point's nearest neighbor.
  std::sort(blueAngles.begin(), blueAngles.end());
  const auto rotDist = [](double a, double b) {
    return std::sqrt(1.0 - std::abs(std::cos((a - b) / 2.0)));
  };
  double epsMax = 0.0;
  for (std::size_t i = 0; i < blueAngles.size(); ++i) {
    double best = -1.0;
    if (i > 0) best = rotDist(blueAngles[i], blueAngles[i - 1]);
    if (i + 1 < blueAngles.size()) {
      const double d = rotDist(blueAngles[i], blueAngles[i + 1]);
      if (best < 0 || d < best) best = d;
    }
    if (best > epsMax) epsMax = best;
  }
  res.epsMax = epsMax;

  // Shallow unitary-circuit comparison set: Gaussian numerators over both
  // denominator-exponent parities reachable at T count <= 8, completed to a
  // unitary by any cyclotomic solution of the slack norm equation.  Lower
  // exponents of the same parity embed by doubling the numerator, so the two
  // scans are exhaustive.
  std::set<std::pair<long long, long long>> redKeys;
  for (const int m : {8, 9}) {
    const long long capr = 1LL << m;
    const double scale = std::sqrt(static_cast<double>(capr));
    const int R = static_cast<int>(std::floor(scale + 1e-9));
    for (int p = 0; p <= R; ++p) {
      for (int q = 0; q <= R; ++q) {
        const long long n = capr - static_cast<long long>(p) * p -
                            static_cast<long long>(q) * q;
        if (n < 0 || (p == 0 && q == 0)) continue;
        if (!slackSolvable(Root2Int{BigInt(n), BigInt(0)})) continue;
        const DensityPoint disp{p / scale, q / scale};
        if (!redKeys.insert({displayKey(disp.re), displayKey(disp.im)}).second)
          continue;
        res.red.push_back(disp);
        const double absX = std::sqrt(static_cast<double>(capr - n)) / scale;
        if (std::sqrt(std::max(0.0, 1.0 - absX)) <= epsMax) ++res.redWithinEpsMax;
      }
    }
  }
  return res;
}

std::string densityJson(const DensityResult& d) {
  nlohmann::ordered_json j;
  j["format"] = "rusforge-density/1";
  j["ell"] = d.ell;
  j["greyCount"] = d.grey.size();
  j["blueCount"] = d.blue.size();
  j["blueAngles"] = d.blueAngles;
  j["epsMax"] = d.epsMax;
  j["redCount"] = d.red.size();
  j["redWithinEpsMax"] = d.redWithinEpsMax;
  const auto points = [](const std::vector<DensityPoint>& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const DensityPoint& p : v)
      arr.push_back(nlohmann::ordered_json::array({p.re, p.im}));
    return arr;
  };
  j["grey"] = points(d.grey);
  j["blue"] = points(d.blue);
  j["red"] = points(d.red);
  return j.dump(2) + "\n";
}

}  // namespace rusforge
