#pragma once

// Scalars of the form r*eps^n, where eps is a formal positive infinitesimal.
// An InfNum keeps only the dominant (lowest-order) term of what would be a
// full Laurent series in eps, which is exactly enough to take limits of
// weight ratios as eps -> 0.
//
// The zero coefficient is structurally meaningful and is never normalized
// away: adding 5*eps^2 and 0*eps^1 yields 0*eps^1, because a single-term
// representation cannot know what the eps^1 coefficient of either operand
// discarded earlier. Collapsing 0*eps^1 to 5*eps^2 would claim information
// the representation does not have; keeping the structural zero makes the
// arithmetic conservative (it may report "no information" but never a wrong
// limit).

#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>

namespace infppl {

namespace detail {

// Shortest decimal string that parses back to exactly the same double.
// Used everywhere a double must be rendered deterministically.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  if (std::nearbyint(v) == v && std::abs(v) < 0x1.0p53) {
    std::snprintf(buf, sizeof buf, "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

class InfNum {
 public:
  // Orders live well inside the int32 range so that the sum or difference
  // of two legal orders cannot overflow the integer type itself.
  static constexpr std::int32_t kMaxOrder = std::int32_t{1} << 30;

  constexpr InfNum() = default;  // 0*eps^0

  InfNum(double coeff, std::int32_t order) : coeff_(coeff), order_(order) {
    if (!std::isfinite(coeff))
      throw std::invalid_argument("InfNum: coefficient must be finite");
    if (order > kMaxOrder || order < -kMaxOrder)
      throw std::overflow_error("InfNum: order out of range");
  }

  static InfNum from_real(double r) { return InfNum(r, 0); }

  double coeff() const { return coeff_; }
  std::int32_t order() const { return order_; }

  // Semantic zero: a vanished coefficient at any order.
  bool is_zero() const { return coeff_ == 0.0; }

  // Sum keeps the lowest-order term; coefficients combine only when the
  // orders agree. Note 5*eps^2 + 0*eps^1 -> 0*eps^1.
  friend InfNum operator+(const InfNum& a, const InfNum& b) {
    if (a.order_ == b.order_) return InfNum(a.coeff_ + b.coeff_, a.order_);
    return a.order_ < b.order_ ? a : b;
  }

  friend InfNum operator-(const InfNum& a) { return InfNum(-a.coeff_, a.order_); }

  friend InfNum operator-(const InfNum& a, const InfNum& b) { return a + (-b); }

  friend InfNum operator*(const InfNum& a, const InfNum& b) {
    return InfNum(a.coeff_ * b.coeff_,
                  checked_order(std::int64_t{a.order_} + std::int64_t{b.order_}));
  }

  // Division is partial: a divisor whose dominant coefficient is exactly
  // zero gives no information about the quotient, so the result is
  // "undefined" (nullopt), a recoverable value rather than a crash.
  friend std::optional<InfNum> div(const InfNum& a, const InfNum& b) {
    if (b.coeff_ == 0.0) return std::nullopt;
    return InfNum(a.coeff_ / b.coeff_,
                  checked_order(std::int64_t{a.order_} - std::int64_t{b.order_}));
  }

  // Structural equality: same coefficient and same order.
  friend bool operator==(const InfNum& a, const InfNum& b) {
    return a.coeff_ == b.coeff_ && a.order_ == b.order_;
  }

  // Compare magnitudes as eps -> 0+. Requires nonnegative coefficients.
  // Any zero coefficient is a semantic zero regardless of its order; among
  // nonzero values a lower order dominates, and equal orders compare by
  // coefficient.
  friend std::strong_ordering cmp_magnitude(const InfNum& a, const InfNum& b) {
    if (a.coeff_ < 0.0 || b.coeff_ < 0.0)
      throw std::invalid_argument("cmp_magnitude: coefficients must be nonnegative");
    const bool az = a.is_zero(), bz = b.is_zero();
    if (az || bz) {
      if (az && bz) return std::strong_ordering::equal;
      return az ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (a.order_ != b.order_)
      return a.order_ < b.order_ ? std::strong_ordering::greater
                                 : std::strong_ordering::less;
    if (a.coeff_ == b.coeff_) return std::strong_ordering::equal;
    return a.coeff_ < b.coeff_ ? std::strong_ordering::less
                               : std::strong_ordering::greater;
  }

 private:
  static std::int32_t checked_order(std::int64_t n) {
    if (n > kMaxOrder || n < -kMaxOrder)
      throw std::overflow_error("InfNum: order out of range");
    return static_cast<std::int32_t>(n);
  }

  double coeff_ = 0.0;
  std::int32_t order_ = 0;
};

// Renders "r*eps^n" as "<coeff>e<order>", e.g. 0.5e1 for 0.5*eps^1.
inline std::string to_string(const InfNum& v) {
  return detail::format_double(v.coeff()) + "e" + std::to_string(v.order());
}

// JSON object form used in diagnostics: {"coeff":0.5,"order":1}.
inline std::string to_json(const InfNum& v) {
  return "{\"coeff\":" + detail::format_double(v.coeff()) +
         ",\"order\":" + std::to_string(v.order()) + "}";
}

}  // namespace infppl
