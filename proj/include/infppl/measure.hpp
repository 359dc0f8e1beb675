#pragma once

// Interval observations and their probabilities, plus a small expression
// language for checking infinitesimal evaluations against real limits.
//
// The central rule: an interval (mid, w) with width w = r*eps^n has mass
//
//   cdf(d, mid + r/2) - cdf(d, mid - r/2)   at order 0, when n = 0,
//   pdf(d, mid) * r                         at order n, when n > 0.
//
// Conditioning on infinitesimally wide intervals is what keeps observation
// statements well defined under reparameterization: the width transforms
// with the variable, so the weight picks up exactly the Jacobian factor a
// bare density would miss.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "infppl/distributions.hpp"
#include "infppl/infnum.hpp"

namespace infppl {

class Interval {
 public:
  // mid is the center; width is a nonnegative coefficient at a nonnegative
  // order (order 0 means an ordinary real width).
  Interval(double mid, InfNum width) : mid_(mid), width_(width) {
    if (!std::isfinite(mid))
      throw std::invalid_argument("Interval: midpoint must be finite");
    if (width.coeff() < 0.0)
      throw std::invalid_argument("Interval: width coefficient must be nonnegative");
    if (width.order() < 0)
      throw std::invalid_argument("Interval: width order must be nonnegative");
  }

  double mid() const { return mid_; }
  const InfNum& width() const { return width_; }

 private:
  double mid_;
  InfNum width_;
};

// Probability mass a distribution assigns to an interval.
template <ContinuousDistribution D>
InfNum prob(const D& d, const Interval& i) {
  const InfNum& w = i.width();
  if (w.order() == 0) {
    const double half = 0.5 * w.coeff();
    return InfNum(d.cdf(i.mid() + half) - d.cdf(i.mid() - half), 0);
  }
  return InfNum(d.pdf(i.mid()) * w.coeff(), w.order());
}

// Probability mass at a single point of a discrete distribution; always a
// plain real (order 0).
inline InfNum prob_point(const DiscreteDist& d, std::int64_t k) {
  return InfNum(d.pmf(k), 0);
}

// Expressions over interval probabilities, in one formal variable x > 0
// standing for the interval-width scale. Leaves are real constants and
// terms P(d, (mid, scale*x)); internal nodes are + - * /. Evaluating at
// x = eps uses InfNum arithmetic; evaluating at a real x > 0 uses ordinary
// arithmetic. When the infinitesimal evaluation yields r*eps^n, the real
// evaluations satisfy f(x)/x^n -> r as x -> 0 (and when it yields an
// undefined division, no claim is made either way).
class ProbExpr {
 public:
  static ProbExpr constant(double r) {
    if (!std::isfinite(r))
      throw std::invalid_argument("ProbExpr: constant must be finite");
    auto n = std::make_shared<Node>();
    n->op = Op::kConst;
    n->value = r;
    return ProbExpr(std::move(n));
  }

  // The probability P(d, (mid, scale*x)) as a function of the width scale.
  static ProbExpr interval_prob(ContinuousDist d, double mid, double scale) {
    if (!std::isfinite(mid) || !std::isfinite(scale))
      throw std::invalid_argument("ProbExpr: interval parameters must be finite");
    auto n = std::make_shared<Node>();
    n->op = Op::kIntervalProb;
    n->dist = std::move(d);
    n->mid = mid;
    n->scale = scale;
    return ProbExpr(std::move(n));
  }

  friend ProbExpr operator+(const ProbExpr& a, const ProbExpr& b) {
    return combine(Op::kAdd, a, b);
  }
  friend ProbExpr operator-(const ProbExpr& a, const ProbExpr& b) {
    return combine(Op::kSub, a, b);
  }
  friend ProbExpr operator*(const ProbExpr& a, const ProbExpr& b) {
    return combine(Op::kMul, a, b);
  }
  friend ProbExpr operator/(const ProbExpr& a, const ProbExpr& b) {
    return combine(Op::kDiv, a, b);
  }

  // Evaluate at x = eps. nullopt means a division encountered a divisor
  // whose dominant coefficient vanished: undefined, not zero.
  std::optional<InfNum> eval_infinitesimal() const { return eval_inf(node_.get()); }

  // Evaluate at a real width scale x > 0. nullopt on division by exact zero.
  std::optional<double> eval_real(double x) const {
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("ProbExpr: eval_real requires finite x > 0");
    return eval_at(node_.get(), x);
  }

 private:
  enum class Op { kConst, kIntervalProb, kAdd, kSub, kMul, kDiv };

  struct Node {
    Op op = Op::kConst;
    double value = 0.0;
    std::optional<ContinuousDist> dist;
    double mid = 0.0;
    double scale = 0.0;
    std::shared_ptr<const Node> lhs, rhs;
  };

  explicit ProbExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static ProbExpr combine(Op op, const ProbExpr& a, const ProbExpr& b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = a.node_;
    n->rhs = b.node_;
    return ProbExpr(std::move(n));
  }

  static std::optional<InfNum> eval_inf(const Node* n) {
    switch (n->op) {
      case Op::kConst:
        return InfNum(n->value, 0);
      case Op::kIntervalProb:
        return InfNum(n->dist->pdf(n->mid) * n->scale, 1);
      default:
        break;
    }
    const auto a = eval_inf(n->lhs.get());
    if (!a) return std::nullopt;
    const auto b = eval_inf(n->rhs.get());
    if (!b) return std::nullopt;
    switch (n->op) {
      case Op::kAdd:
        return *a + *b;
      case Op::kSub:
        return *a - *b;
      case Op::kMul:
        return *a * *b;
      default:
        return div(*a, *b);
    }
  }

  static std::optional<double> eval_at(const Node* n, double x) {
    switch (n->op) {
      case Op::kConst:
        return n->value;
      case Op::kIntervalProb: {
        const double half = 0.5 * n->scale * x;
        return n->dist->cdf(n->mid + half) - n->dist->cdf(n->mid - half);
      }
      default:
        break;
    }
    const auto a = eval_at(n->lhs.get(), x);
    if (!a) return std::nullopt;
    const auto b = eval_at(n->rhs.get(), x);
    if (!b) return std::nullopt;
    switch (n->op) {
      case Op::kAdd:
        return *a + *b;
      case Op::kSub:
        return *a - *b;
      case Op::kMul:
        return *a * *b;
      default:
        if (*b == 0.0) return std::nullopt;
        return *a / *b;
    }
  }

  std::shared_ptr<const Node> node_;
};

struct LimitReport {
  enum class Status {
    kPass,           // error at the smallest x is below tolerance
    kFail,           // it is not
    kNoInformation,  // the infinitesimal evaluation was undefined
  };

  Status status = Status::kNoInformation;
  double coeff = 0.0;        // r of the infinitesimal value r*eps^n
  std::int32_t order = 0;    // n of it
  std::vector<double> xs;    // the width scales actually checked
  std::vector<double> errors;  // |f(x)/x^n - r| (relative when r != 0)
  std::string note;

  bool passed() const { return status == Status::kPass; }
};

// Checks the limit claim behind eval_infinitesimal: with f(eps) = r*eps^n,
// f(x)/x^n must approach r along a decreasing sequence of real width
// scales. The verdict is the error at the smallest x (relative error when
// r is nonzero, absolute when r = 0); the full error sequence is reported
// so callers can inspect the convergence themselves. With an empty xs the
// geometric default 1e-2 .. 1e-5 is used.
inline LimitReport limit_check(const ProbExpr& f, std::span<const double> xs,
                               double tol) {
  static constexpr double kDefaultXs[] = {1e-2, 1e-3, 1e-4, 1e-5};
  if (xs.empty()) xs = kDefaultXs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0))
      throw std::invalid_argument("limit_check: width scales must be positive");
    if (i > 0 && !(xs[i] < xs[i - 1]))
      throw std::invalid_argument("limit_check: width scales must decrease");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("limit_check: tol must be positive");

  LimitReport report;
  const auto inf = f.eval_infinitesimal();
  if (!inf) {
    report.status = LimitReport::Status::kNoInformation;
    report.note = "infinitesimal evaluation undefined; the limit may or may not exist";
    return report;
  }
  report.coeff = inf->coeff();
  report.order = inf->order();

  for (const double x : xs) {
    report.xs.push_back(x);
    const auto fx = f.eval_real(x);
    if (!fx) {
      report.errors.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double ratio = *fx / std::pow(x, static_cast<double>(report.order));
    double err = std::abs(ratio - report.coeff);
    if (report.coeff != 0.0) err /= std::abs(report.coeff);
    report.errors.push_back(err);
  }

  const double last = report.errors.back();
  report.status = std::isfinite(last) && last < tol ? LimitReport::Status::kPass
                                                    : LimitReport::Status::kFail;
  return report;
}

}  // namespace infppl
