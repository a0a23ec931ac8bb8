#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rusforge {

using BigInt = boost::multiprecision::cpp_int;

struct Root2Int;

// Element of Z[w], w = exp(i*pi/4), stored on the integral basis {w^3, w^2, w, 1}:
// value = a*w^3 + b*w^2 + c*w + d.  All arithmetic reduces with w^4 = -1.
struct CyclotomicInt {
  BigInt a, b, c, d;

  CyclotomicInt() : a(0), b(0), c(0), d(0) {}
  CyclotomicInt(BigInt a_, BigInt b_, BigInt c_, BigInt d_)
      : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

  static CyclotomicInt zero() { return {}; }
  static CyclotomicInt one() { return {0, 0, 0, 1}; }
  static CyclotomicInt fromInt(const BigInt& n) { return {0, 0, 0, n}; }
  // w^k for any integer k (w^8 = 1, w^4 = -1).
  static CyclotomicInt omega(int k);
  // sqrt(2) = w - w^3.
  static CyclotomicInt root2() { return {-1, 0, 1, 0}; }
  // sqrt(2)^k for k >= 0.
  static CyclotomicInt root2Pow(int k);

  bool isZero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
  bool operator==(const CyclotomicInt& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
  }
  bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

  CyclotomicInt operator+(const CyclotomicInt& o) const {
    return {a + o.a, b + o.b, c + o.c, d + o.d};
  }
  CyclotomicInt operator-(const CyclotomicInt& o) const {
    return {a - o.a, b - o.b, c - o.c, d - o.d};
  }
  CyclotomicInt operator-() const { return {-a, -b, -c, -d}; }
  CyclotomicInt operator*(const CyclotomicInt& o) const;
  CyclotomicInt operator*(const BigInt& n) const { return {a * n, b * n, c * n, d * n}; }
  CyclotomicInt& operator+=(const CyclotomicInt& o) { *this = *this + o; return *this; }
  CyclotomicInt& operator-=(const CyclotomicInt& o) { *this = *this - o; return *this; }
  CyclotomicInt& operator*=(const CyclotomicInt& o) { *this = *this * o; return *this; }

  // Complex conjugation (w -> w^-1): (a,b,c,d) -> (-c,-b,-a,d).
  CyclotomicInt conj() const { return {-c, -b, -a, d}; }
  // Ring automorphism extending w -> -w: (a,b,c,d) -> (-a,b,-c,d).
  CyclotomicInt bulletAdjoint() const { return {-a, b, -c, d}; }

  CyclotomicInt mulOmega() const { return {b, c, d, -a}; }      // * w
  CyclotomicInt mulRoot2() const { return {b - d, c + a, d + b, c - a}; }

  bool divisibleByRoot2() const;
  // Exact division by sqrt(2); returns nullopt if not divisible.
  std::optional<CyclotomicInt> divRoot2() const;
  // Exact division by 2.
  std::optional<CyclotomicInt> divTwo() const;

  // z * conj(z) as an element of Z[sqrt2]; always >= 0.
  Root2Int absSquared() const;

  // Numeric evaluation against w = exp(i*pi/4) in double precision.
  std::complex<double> complexValue() const;

  // Parity of a+b+c+d: 0 iff z is divisible by the prime 1+w (which lies above
  // sqrt(2): (1+w)^2 is an associate of sqrt(2)).
  int paritySigma() const {
    return static_cast<int>(((a + b + c + d) % 2 + 2) % 2);
  }

  std::string toString() const;  // "a*w^3 + b*w^2 + c*w + d" with zero terms elided
};

// Element of Z[sqrt2]: value = a + b*sqrt(2).
struct Root2Int {
  BigInt a, b;

  Root2Int() : a(0), b(0) {}
  Root2Int(BigInt a_, BigInt b_) : a(std::move(a_)), b(std::move(b_)) {}
  static Root2Int zero() { return {}; }
  static Root2Int one() { return {1, 0}; }
  static Root2Int root2() { return {0, 1}; }
  // 2^k or sqrt(2)*2^k depending on parity; exact sqrt(2)^k for k >= 0.
  static Root2Int pow2Half(int k);

  bool isZero() const { return a == 0 && b == 0; }
  bool operator==(const Root2Int& o) const { return a == o.a && b == o.b; }
  bool operator!=(const Root2Int& o) const { return !(*this == o); }

  Root2Int operator+(const Root2Int& o) const { return {a + o.a, b + o.b}; }
  Root2Int operator-(const Root2Int& o) const { return {a - o.a, b - o.b}; }
  Root2Int operator-() const { return {-a, -b}; }
  Root2Int operator*(const Root2Int& o) const {
    return {a * o.a + 2 * b * o.b, a * o.b + b * o.a};
  }
  Root2Int operator*(const BigInt& n) const { return {a * n, b * n}; }

  // Galois conjugate sqrt(2) -> -sqrt(2).
  Root2Int conjBullet() const { return {a, -b}; }
  // Field norm a^2 - 2 b^2 (an ordinary integer).
  BigInt norm() const { return a * a - 2 * b * b; }

  // Exact sign of a + b*sqrt(2): -1, 0, +1.  Integer case analysis only.
  int sign() const;
  bool isPositive() const { return sign() > 0; }
  // Positive under both real embeddings (value and Galois conjugate).
  bool isTotallyPositive() const { return sign() > 0 && conjBullet().sign() > 0; }

  // Exact quotient *this / den, or nullopt if den does not divide exactly.
  std::optional<Root2Int> divideExact(const Root2Int& den) const;

  // Embed into Z[w] (sqrt(2) = w - w^3).
  CyclotomicInt toCyclotomic() const { return {-b, 0, b, a}; }

  double toDouble() const;
  std::string toString() const;  // "a + b*sqrt(2)" with zero terms elided
};

// Smallest denominator exponent: least k >= 0 such that z / sqrt(2)^(L-k) is
// still integral in Z[w].  sde(0, L) = 0.
int sde(const CyclotomicInt& z, int L);

// Matrix over Z[w] with a global denominator 1/sqrt(2)^L.  Always stored fully
// reduced: no common sqrt(2) factor remains while L > 0.
struct RingMatrix {
  int n = 0;       // dimension (square)
  int L = 0;       // denominator exponent
  std::vector<CyclotomicInt> e;  // row-major, n*n entries

  RingMatrix() = default;
  RingMatrix(int n_, int L_) : n(n_), L(L_), e(static_cast<size_t>(n_) * n_) {}

  static RingMatrix identity(int n);

  CyclotomicInt& at(int i, int j) { return e[static_cast<size_t>(i) * n + j]; }
  const CyclotomicInt& at(int i, int j) const { return e[static_cast<size_t>(i) * n + j]; }

  // Strip common sqrt(2) factors while L > 0.
  void reduce();

  RingMatrix operator*(const RingMatrix& o) const;
  RingMatrix adjoint() const;  // conjugate transpose, same L
  RingMatrix scaled(const CyclotomicInt& s) const;
  bool operator==(const RingMatrix& o) const { return n == o.n && L == o.L && e == o.e; }
  bool operator!=(const RingMatrix& o) const { return !(*this == o); }

  // Exact test M * M^dagger == 2^L * I.
  bool isUnitary() const;

  std::vector<std::vector<std::complex<double>>> complexEntries() const;  // includes 1/sqrt2^L
  std::string toString() const;
};

using RingUnitary = RingMatrix;

RingMatrix matMul(const RingMatrix& x, const RingMatrix& y);
RingMatrix matAdjoint(const RingMatrix& m);
bool isUnitary(const RingMatrix& m);
RingMatrix tensor(const RingMatrix& x, const RingMatrix& y);

// Exact quotient u / v in Z[w]; nullopt if v does not divide u.
std::optional<CyclotomicInt> divideExactCyclotomic(const CyclotomicInt& u,
                                                   const CyclotomicInt& v);

// Nearest-quotient division for the norm-Euclidean gcd: u = q*v + r with
// N(r) < N(v).
CyclotomicInt roundDivCyclotomic(const CyclotomicInt& u, const CyclotomicInt& v);
CyclotomicInt gcdCyclotomic(CyclotomicInt u, CyclotomicInt v);

// Rational field norm N(z) = z * conj(z) * bullet(z * conj(z)) >= 0.
BigInt fieldNorm(const CyclotomicInt& z);

// Exact determinant of a square matrix of ring entries (no denominator), by
// fraction-free elimination.
CyclotomicInt detCyclotomic(const RingMatrix& m);

// ceil(log2(x)) for x > 0 given exactly as a Root2Int; computed without floats.
int exactCeilLog2(const Root2Int& x);

}  // namespace rusforge
