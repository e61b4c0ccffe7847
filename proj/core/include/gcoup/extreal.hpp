#pragma once

#include <cmath>
#include <limits>

#include "gcoup/errors.hpp"

namespace gcoup {

// Extended real: a double that is finite, +inf or -inf. Never NaN; any
// operation that would produce NaN throws EvalError instead.
class ExtReal {
 public:
  constexpr ExtReal() : v_(0.0) {}
  ExtReal(double v) : v_(v) {
    if (std::isnan(v)) throw EvalError("NaN is not an extended real");
  }

  static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity(), 0); }
  static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity(), 0); }

  bool finite() const { return std::isfinite(v_); }
  bool is_pos_inf() const { return std::isinf(v_) && v_ > 0; }
  bool is_neg_inf() const { return std::isinf(v_) && v_ < 0; }

  // Underlying double, infinities included.
  double raw() const { return v_; }

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
  friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
  friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
  friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
  friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

 private:
  constexpr ExtReal(double v, int) : v_(v) {}  // trusted, skips the NaN check
  double v_;
};

// a + b resolving inf + (-inf) upward: +inf dominates. Total, commutative,
// monotone in each argument. This is the convention for summing value
// functions where +inf means "infeasible".
inline ExtReal add_upper(ExtReal a, ExtReal b) {
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  return ExtReal(a.raw() + b.raw());
}

// a - b resolving every ambiguity downward: b = +inf forces -inf. Used for
// the integrand of a supremum, so points where the subtrahend is +inf drop
// out of the search instead of dominating it.
inline ExtReal sub_lower(ExtReal a, ExtReal b) {
  if (b.is_pos_inf()) return ExtReal::neg_inf();
  if (b.is_neg_inf()) return a.is_neg_inf() ? ExtReal::neg_inf() : ExtReal::pos_inf();
  if (a.is_pos_inf()) return ExtReal::pos_inf();
  if (a.is_neg_inf()) return ExtReal::neg_inf();
  return ExtReal(a.raw() - b.raw());
}

}  // namespace gcoup
