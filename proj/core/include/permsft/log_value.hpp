#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace permsft {

/// A nonnegative real stored as its natural logarithm; zero is -inf.
class LogValue {
 public:
  constexpr LogValue() = default;

  static constexpr LogValue zero() { return LogValue(); }
  static constexpr LogValue one() { return from_log(0.0); }
  static constexpr LogValue from_log(double log_magnitude) {
    LogValue v;
    v.log_ = log_magnitude;
    return v;
  }
  /// Requires x >= 0.
  static LogValue from_linear(double x) { return from_log(x > 0 ? std::log(x) : kNegInf); }

  constexpr double log() const noexcept { return log_; }
  double linear() const noexcept { return std::exp(log_); }
  constexpr bool is_zero() const noexcept { return log_ == kNegInf; }

  friend LogValue operator*(LogValue a, LogValue b) { return from_log(a.log_ + b.log_); }
  friend LogValue operator/(LogValue a, LogValue b) { return from_log(a.log_ - b.log_); }
  friend LogValue operator+(LogValue a, LogValue b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }
  LogValue pow(double e) const { return is_zero() ? *this : from_log(log_ * e); }

  friend constexpr bool operator==(LogValue a, LogValue b) { return a.log_ == b.log_; }
  friend constexpr auto operator<=>(LogValue a, LogValue b) { return a.log_ <=> b.log_; }

 private:
  static constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  double log_ = kNegInf;
};

}  // namespace permsft
