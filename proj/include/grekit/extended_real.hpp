#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <string>

#include "grekit/errors.hpp"

namespace grekit {

/// A value in R u {+inf}.
///
/// Stored as a double whose only admissible non-finite value is +inf, so
/// addition is absorbing and comparison is total for free. Products with a
/// non-positive factor and an infinite operand are rejected instead of being
/// given a convention.
class ExtendedReal {
 public:
  constexpr ExtendedReal() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtendedReal(double v) : v_(v) {
    if (std::isnan(v) || v == -std::numeric_limits<double>::infinity()) {
      throw InvalidArgument("ExtendedReal: NaN and -inf are not representable");
    }
  }

  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return std::isfinite(v_); }
  bool is_infinite() const { return !is_finite(); }

  /// Finite value; throws if this is +inf.
  double value() const {
    if (!is_finite()) throw InvalidArgument("ExtendedReal::value() on +inf");
    return v_;
  }

  /// The stored double (+inf for the infinite element).
  double to_double() const { return v_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) { return ExtendedReal(a.v_ + b.v_); }
  ExtendedReal& operator+=(ExtendedReal o) { return *this = *this + o; }

  /// c * x. For infinite x, c must be strictly positive.
  friend ExtendedReal scale(double c, ExtendedReal x) {
    if (x.is_infinite()) {
      if (c > 0.0) return x;
      if (c == 0.0) throw UndefinedProduct("0 * (+inf) is undefined");
      throw UndefinedProduct("negative multiple of +inf is not representable");
    }
    return ExtendedReal(c * x.v_);
  }

  /// a - b for finite b.
  friend ExtendedReal minus(ExtendedReal a, double b) {
    if (!std::isfinite(b)) throw InvalidArgument("cannot subtract a non-finite value");
    return ExtendedReal(a.v_ - b);
  }

  friend auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.v_ <=> b.v_; }
  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }

 private:
  double v_ = 0.0;
};

std::string to_string(ExtendedReal x);

}  // namespace grekit
