#include "rusforge/ring.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace rusforge {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Floor division for cpp_int with positive divisor.
BigInt floorDiv(const BigInt& num, const BigInt& den) {
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

// Nearest integer to num/den for positive den (ties round up).
BigInt roundNearest(const BigInt& num, const BigInt& den) {
  return floorDiv(2 * num + den, 2 * den);
}

double toDoubleB(const BigInt& x) { return x.convert_to<double>(); }

}  // namespace

CyclotomicInt CyclotomicInt::omega(int k) {
  int m = ((k % 8) + 8) % 8;
  BigInt s = (m < 4) ? 1 : -1;
  switch (m % 4) {
    case 0: return {0, 0, 0, s};
    case 1: return {0, 0, s, 0};
    case 2: return {0, s, 0, 0};
    default: return {s, 0, 0, 0};
  }
}

CyclotomicInt CyclotomicInt::root2Pow(int k) {
  CyclotomicInt r = one();
  for (int i = 0; i < k; ++i) r = r.mulRoot2();
  return r;
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& o) const {
  // Polynomial product on the basis {w^3, w^2, w, 1} reduced with w^4 = -1.
  return {a * o.d + b * o.c + c * o.b + d * o.a,
          b * o.d + c * o.c + d * o.b - a * o.a,
          c * o.d + d * o.c - a * o.b - b * o.a,
          d * o.d - a * o.c - b * o.b - c * o.a};
}

bool CyclotomicInt::divisibleByRoot2() const {
  return (a - c) % 2 == 0 && (b - d) % 2 == 0;
}

std::optional<CyclotomicInt> CyclotomicInt::divRoot2() const {
  if (!divisibleByRoot2()) return std::nullopt;
  CyclotomicInt t = mulRoot2();
  return CyclotomicInt{t.a / 2, t.b / 2, t.c / 2, t.d / 2};
}

std::optional<CyclotomicInt> CyclotomicInt::divTwo() const {
  if (a % 2 != 0 || b % 2 != 0 || c % 2 != 0 || d % 2 != 0) return std::nullopt;
  return CyclotomicInt{a / 2, b / 2, c / 2, d / 2};
}

Root2Int CyclotomicInt::absSquared() const {
  CyclotomicInt w = (*this) * conj();
  assert(w.b == 0 && w.a == -w.c);
  return {w.d, w.c};
}

std::complex<double> CyclotomicInt::complexValue() const {
  double fa = toDoubleB(a), fb = toDoubleB(b), fc = toDoubleB(c), fd = toDoubleB(d);
  return {fd + (fc - fa) / kSqrt2, fb + (fc + fa) / kSqrt2};
}

std::string CyclotomicInt::toString() const {
  std::ostringstream out;
  bool first = true;
  auto term = [&](const BigInt& coef, const char* unit) {
    if (coef == 0) return;
    if (first) {
      if (coef < 0) out << "-";
      first = false;
    } else {
      out << (coef < 0 ? " - " : " + ");
    }
    BigInt mag = coef < 0 ? BigInt(-coef) : coef;
    if (mag != 1 || unit[0] == '\0') {
      out << mag.str();
      if (unit[0] != '\0') out << "*";
    }
    out << unit;
  };
  term(a, "w^3");
  term(b, "w^2");
  term(c, "w");
  term(d, "");
  if (first) out << "0";
  return out.str();
}

Root2Int Root2Int::pow2Half(int k) {
  assert(k >= 0);
  if (k % 2 == 0) return {BigInt(1) << (k / 2), 0};
  return {0, BigInt(1) << (k / 2)};
}

int Root2Int::sign() const {
  if (a == 0 && b == 0) return 0;
  if (a >= 0 && b >= 0) return 1;
  if (a <= 0 && b <= 0) return -1;
  // Mixed signs: compare a^2 with 2 b^2 (sqrt(2) is irrational, so never equal
  // unless both are zero, handled above).
  BigInt lhs = a * a, rhs = 2 * b * b;
  if (a > 0) return lhs > rhs ? 1 : -1;  // a > 0, b < 0
  return lhs > rhs ? -1 : 1;             // a < 0, b > 0
}

std::optional<Root2Int> Root2Int::divideExact(const Root2Int& den) const {
  if (den.isZero()) return std::nullopt;
  BigInt n = den.norm();
  // *this * conjBullet(den) = (a c - 2 b d) + (b c - a d) sqrt(2)
  BigInt p = a * den.a - 2 * b * den.b;
  BigInt q = b * den.a - a * den.b;
  if (n == 0 || p % n != 0 || q % n != 0) return std::nullopt;
  Root2Int result{p / n, q / n};
  if (result * den != *this) return std::nullopt;
  return result;
}

double Root2Int::toDouble() const { return toDoubleB(a) + toDoubleB(b) * kSqrt2; }

std::string Root2Int::toString() const {
  std::ostringstream out;
  if (a == 0 && b == 0) return "0";
  bool first = true;
  if (a != 0) {
    out << a.str();
    first = false;
  }
  if (b != 0) {
    if (!first) {
      out << (b < 0 ? " - " : " + ");
      BigInt mag = b < 0 ? BigInt(-b) : b;
      if (mag != 1) out << mag.str() << "*";
    } else {
      if (b < 0) out << "-";
      BigInt mag = b < 0 ? BigInt(-b) : b;
      if (mag != 1) out << mag.str() << "*";
    }
    out << "sqrt(2)";
  }
  return out.str();
}

int sde(const CyclotomicInt& z, int L) {
  assert(L >= 0);
  if (z.isZero()) return 0;
  CyclotomicInt t = z;
  int m = 0;
  while (m < L) {
    auto half = t.divRoot2();
    if (!half) break;
    t = *half;
    ++m;
  }
  return L - m;
}

RingMatrix RingMatrix::identity(int n) {
  RingMatrix m(n, 0);
  for (int i = 0; i < n; ++i) m.at(i, i) = CyclotomicInt::one();
  return m;
}

void RingMatrix::reduce() {
  while (L > 0) {
    bool all = true;
    for (const auto& x : e) {
      if (!x.divisibleByRoot2()) {
        all = false;
        break;
      }
    }
    if (!all) break;
    for (auto& x : e) x = *x.divRoot2();
    --L;
  }
}

RingMatrix RingMatrix::operator*(const RingMatrix& o) const {
  if (n != o.n) throw std::invalid_argument("ring matrix shape mismatch");
  RingMatrix r(n, L + o.L);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CyclotomicInt s;
      for (int k = 0; k < n; ++k) s += at(i, k) * o.at(k, j);
      r.at(i, j) = s;
    }
  }
  r.reduce();
  return r;
}

RingMatrix RingMatrix::adjoint() const {
  RingMatrix r(n, L);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = at(j, i).conj();
  return r;
}

RingMatrix RingMatrix::scaled(const CyclotomicInt& s) const {
  RingMatrix r(n, L);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] * s;
  r.reduce();
  return r;
}

bool RingMatrix::isUnitary() const {
  RingMatrix p = (*this) * adjoint();
  return p == identity(n);
}

std::vector<std::vector<std::complex<double>>> RingMatrix::complexEntries() const {
  double scale = std::pow(kSqrt2, -L);
  std::vector<std::vector<std::complex<double>>> out(
      n, std::vector<std::complex<double>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = at(i, j).complexValue() * scale;
  return out;
}

std::string RingMatrix::toString() const {
  std::ostringstream out;
  out << "(1/sqrt(2)^" << L << ") [";
  for (int i = 0; i < n; ++i) {
    out << (i ? "; " : "");
    for (int j = 0; j < n; ++j) out << (j ? ", " : "") << at(i, j).toString();
  }
  out << "]";
  return out.str();
}

RingMatrix matMul(const RingMatrix& x, const RingMatrix& y) { return x * y; }
RingMatrix matAdjoint(const RingMatrix& m) { return m.adjoint(); }
bool isUnitary(const RingMatrix& m) { return m.isUnitary(); }

RingMatrix tensor(const RingMatrix& x, const RingMatrix& y) {
  RingMatrix r(x.n * y.n, x.L + y.L);
  for (int i = 0; i < x.n; ++i)
    for (int j = 0; j < x.n; ++j)
      for (int k = 0; k < y.n; ++k)
        for (int l = 0; l < y.n; ++l)
          r.at(i * y.n + k, j * y.n + l) = x.at(i, j) * y.at(k, l);
  r.reduce();
  return r;
}

BigInt fieldNorm(const CyclotomicInt& z) { return z.absSquared().norm(); }

std::optional<CyclotomicInt> divideExactCyclotomic(const CyclotomicInt& u,
                                                   const CyclotomicInt& v) {
  if (v.isZero()) {
    if (u.isZero()) return CyclotomicInt::zero();
    return std::nullopt;
  }
  // u / v = u * conj(v) * bullet(|v|^2) / N(v) with N(v) a positive integer.
  Root2Int vAbs = v.absSquared();
  BigInt n = vAbs.norm();
  CyclotomicInt num = u * v.conj() * vAbs.conjBullet().toCyclotomic();
  if (num.a % n != 0 || num.b % n != 0 || num.c % n != 0 || num.d % n != 0)
    return std::nullopt;
  CyclotomicInt q{num.a / n, num.b / n, num.c / n, num.d / n};
  if (q * v != u) return std::nullopt;
  return q;
}

CyclotomicInt roundDivCyclotomic(const CyclotomicInt& u, const CyclotomicInt& v) {
  Root2Int vAbs = v.absSquared();
  BigInt n = vAbs.norm();
  assert(n > 0);
  CyclotomicInt num = u * v.conj() * vAbs.conjBullet().toCyclotomic();
  return {roundNearest(num.a, n), roundNearest(num.b, n), roundNearest(num.c, n),
          roundNearest(num.d, n)};
}

CyclotomicInt gcdCyclotomic(CyclotomicInt u, CyclotomicInt v) {
  while (!v.isZero()) {
    CyclotomicInt q = roundDivCyclotomic(u, v);
    CyclotomicInt r = u - q * v;
    assert(fieldNorm(r) < fieldNorm(v));
    u = v;
    v = r;
  }
  return u;
}

CyclotomicInt detCyclotomic(const RingMatrix& m) {
  // Fraction-free (Bareiss) elimination; all interior divisions are exact.
  int n = m.n;
  std::vector<CyclotomicInt> w = m.e;
  auto at = [&](int i, int j) -> CyclotomicInt& {
    return w[static_cast<size_t>(i) * n + j];
  };
  CyclotomicInt prev = CyclotomicInt::one();
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (at(k, k).isZero()) {
      int pivot = -1;
      for (int i = k + 1; i < n; ++i)
        if (!at(i, k).isZero()) {
          pivot = i;
          break;
        }
      if (pivot < 0) return CyclotomicInt::zero();
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(pivot, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        CyclotomicInt num = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        auto q = divideExactCyclotomic(num, prev);
        assert(q.has_value());
        at(i, j) = *q;
      }
      at(i, k) = CyclotomicInt::zero();
    }
    prev = at(k, k);
  }
  CyclotomicInt det = at(n - 1, n - 1);
  return sign < 0 ? -det : det;
}

int exactCeilLog2(const Root2Int& x) {
  assert(x.sign() > 0);
  // Estimate from doubles (coefficients at our scales fit easily), then fix up
  // with exact comparisons against powers of two.
  double est = x.toDouble();
  int k;
  if (std::isfinite(est) && est > 0) {
    k = static_cast<int>(std::ceil(std::log2(est)));
  } else {
    // Fallback: bound via coefficient bit lengths.
    size_t bits = std::max(boost::multiprecision::msb(boost::multiprecision::abs(x.a) + 1),
                           boost::multiprecision::msb(boost::multiprecision::abs(x.b) + 1));
    k = static_cast<int>(bits) + 3;
  }
  auto pow2 = [](int e) -> Root2Int {
    // 2^e for possibly negative e is handled by comparing x * 2^{-e} vs 1.
    assert(e >= 0);
    return {BigInt(1) << e, 0};
  };
  auto leqPow2 = [&](const Root2Int& v, int e) {
    // v <= 2^e, exact for any integer e.
    if (e >= 0) return (pow2(e) - v).sign() >= 0;
    Root2Int scaled = v * (BigInt(1) << (-e));
    return (Root2Int::one() - scaled).sign() >= 0;
  };
  while (!leqPow2(x, k)) ++k;
  while (k > -(1 << 20) && leqPow2(x, k - 1)) --k;
  return k;
}

}  // namespace rusforge
