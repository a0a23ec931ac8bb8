#pragma once

#include <utility>

#include <boost/multiprecision/mpfr.hpp>

#include "rusforge/ring.hpp"

namespace rusforge {

// Arbitrary-precision reals for the numeric side of the toolkit.  The
// precision is the process-global default of the mpfr backend, measured in
// decimal digits; the benchmark harness runs strictly sequentially so a
// single global knob is safe and keeps call signatures simple.
using MpFloat = boost::multiprecision::mpfr_float;

inline unsigned mpDigits() { return MpFloat::default_precision(); }
inline void setMpDigits(unsigned digits) { MpFloat::default_precision(digits); }
inline void ensureMpDigits(unsigned digits) {
  if (mpDigits() < digits) setMpDigits(digits);
}
// Decimal digits comfortably covering the requested number of bits.
inline unsigned digitsForBits(int bits) {
  return static_cast<unsigned>(bits * 0.30103) + 6;
}

inline MpFloat mpPi() { return 4 * atan(MpFloat(1)); }
inline MpFloat mpSqrt2() { return sqrt(MpFloat(2)); }

// Exact while the current precision exceeds the bit length of n.
inline MpFloat mpFromBigInt(const BigInt& n) { return MpFloat(n.str()); }

inline MpFloat valueMp(const Root2Int& x) {
  return mpFromBigInt(x.a) + mpFromBigInt(x.b) * mpSqrt2();
}

// Evaluation of z = a w^3 + b w^2 + c w + d at w = exp(i pi/4), as
// (real, imaginary).
inline std::pair<MpFloat, MpFloat> complexValueMp(const CyclotomicInt& z) {
  const MpFloat invRoot2 = 1 / mpSqrt2();
  const MpFloat a = mpFromBigInt(z.a), b = mpFromBigInt(z.b);
  const MpFloat c = mpFromBigInt(z.c), d = mpFromBigInt(z.d);
  return {(c - a) * invRoot2 + d, (c + a) * invRoot2 + b};
}

}  // namespace rusforge
