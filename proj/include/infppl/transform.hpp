#pragma once

// Strictly increasing differentiable reparameterizations, bundled with the
// derivatives the runtime needs: forward map, its derivative, the inverse,
// and the inverse's derivative. Pushing a distribution and an observation
// interval through the same transform preserves the interval's probability
// (change of variables), which is precisely why interval-conditioned
// programs are invariant under changes of units or scale.

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>

#include "infppl/distributions.hpp"
#include "infppl/infnum.hpp"
#include "infppl/measure.hpp"

namespace infppl {

// An interval of the real line with open or closed finite endpoints;
// infinite endpoints are always open.
class RealInterval {
 public:
  struct Bound {
    double value;
    bool open;
  };

  RealInterval(Bound lo, Bound hi) : lo_(lo), hi_(hi) {
    if (std::isinf(lo_.value)) lo_.open = true;
    if (std::isinf(hi_.value)) hi_.open = true;
    if (!(lo_.value <= hi_.value))
      throw std::invalid_argument("RealInterval: requires lo <= hi");
  }

  static RealInterval all() {
    return RealInterval({-std::numeric_limits<double>::infinity(), true},
                        {std::numeric_limits<double>::infinity(), true});
  }
  static RealInterval greater_than(double lo) {
    return RealInterval({lo, true},
                        {std::numeric_limits<double>::infinity(), true});
  }

  const Bound& lo() const { return lo_; }
  const Bound& hi() const { return hi_; }

  bool contains(double x) const {
    if (x < lo_.value || (x == lo_.value && lo_.open)) return false;
    if (x > hi_.value || (x == hi_.value && hi_.open)) return false;
    return true;
  }

  // Set containment, endpoint openness included.
  bool contains(const RealInterval& inner) const {
    const bool lo_ok =
        lo_.value < inner.lo_.value ||
        (lo_.value == inner.lo_.value && (inner.lo_.open || !lo_.open));
    const bool hi_ok =
        hi_.value > inner.hi_.value ||
        (hi_.value == inner.hi_.value && (inner.hi_.open || !hi_.open));
    return lo_ok && hi_ok;
  }

 private:
  Bound lo_, hi_;
};

class Transform {
 public:
  using Fn = std::function<double(double)>;

  Transform(Fn fwd, Fn fwd_deriv, Fn inv, Fn inv_deriv, RealInterval domain,
            RealInterval range)
      : fwd_(std::move(fwd)),
        fwd_deriv_(std::move(fwd_deriv)),
        inv_(std::move(inv)),
        inv_deriv_(std::move(inv_deriv)),
        domain_(domain),
        range_(range) {
    if (!fwd_ || !fwd_deriv_ || !inv_ || !inv_deriv_)
      throw std::invalid_argument("Transform: all four functions are required");
  }

  // Every evaluation fails fast on a point outside the stated domain or
  // range instead of handing back a NaN that surfaces three modules later.
  double fwd(double x) const {
    check(domain_, x, "Transform: point outside domain");
    return fwd_(x);
  }
  double fwd_deriv(double x) const {
    check(domain_, x, "Transform: point outside domain");
    return fwd_deriv_(x);
  }
  double inv(double y) const {
    check(range_, y, "Transform: point outside range");
    return inv_(y);
  }
  double inv_deriv(double y) const {
    check(range_, y, "Transform: point outside range");
    return inv_deriv_(y);
  }

  const RealInterval& domain() const { return domain_; }
  const RealInterval& range() const { return range_; }

 private:
  static void check(const RealInterval& where, double v, const char* what) {
    if (!where.contains(v)) throw std::domain_error(what);
  }

  Fn fwd_, fwd_deriv_, inv_, inv_deriv_;
  RealInterval domain_, range_;
};

// x -> a*x + b with a > 0 (orientation preserving).
inline Transform affine(double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::invalid_argument("affine: requires finite a > 0 and finite b");
  return Transform([a, b](double x) { return a * x + b; },
                   [a](double) { return a; },
                   [a, b](double y) { return (y - b) / a; },
                   [a](double) { return 1.0 / a; }, RealInterval::all(),
                   RealInterval::all());
}

inline Transform exp_transform() {
  return Transform([](double x) { return std::exp(x); },
                   [](double x) { return std::exp(x); },
                   [](double y) { return std::log(y); },
                   [](double y) { return 1.0 / y; }, RealInterval::all(),
                   RealInterval::greater_than(0.0));
}

inline Transform log_transform() {
  return Transform([](double x) { return std::log(x); },
                   [](double x) { return 1.0 / x; },
                   [](double y) { return std::exp(y); },
                   [](double y) { return std::exp(y); },
                   RealInterval::greater_than(0.0), RealInterval::all());
}

// outer after inner. The inner range must sit inside the outer domain.
inline Transform compose(const Transform& outer, const Transform& inner) {
  if (!outer.domain().contains(inner.range()))
    throw std::invalid_argument(
        "compose: inner range is not contained in outer domain");

  // Map an endpoint of the inner range through the outer transform; at an
  // endpoint the outer cannot evaluate (open edge or infinity), its own
  // range endpoint is the limit.
  const auto map_bound = [&](const RealInterval::Bound& b,
                             bool lower) -> RealInterval::Bound {
    if (outer.domain().contains(b.value))
      return {outer.fwd(b.value), b.open};
    return lower ? outer.range().lo() : outer.range().hi();
  };

  const RealInterval range(map_bound(inner.range().lo(), true),
                           map_bound(inner.range().hi(), false));
  return Transform(
      [outer, inner](double x) { return outer.fwd(inner.fwd(x)); },
      [outer, inner](double x) {
        return outer.fwd_deriv(inner.fwd(x)) * inner.fwd_deriv(x);
      },
      [outer, inner](double y) { return inner.inv(outer.inv(y)); },
      [outer, inner](double y) {
        return inner.inv_deriv(outer.inv(y)) * outer.inv_deriv(y);
      },
      inner.domain(), range);
}

// A distribution pushed forward through a transform: sample by mapping,
// cumulative probability by pulling the point back, density by the
// change-of-variables factor.
template <ContinuousDistribution D>
class TransformedDist {
 public:
  TransformedDist(Transform t, D base) : t_(std::move(t)), base_(std::move(base)) {}

  double pdf(double y) const { return base_.pdf(t_.inv(y)) * t_.inv_deriv(y); }
  double cdf(double y) const { return base_.cdf(t_.inv(y)); }
  double sample(RandomStream& rng) const { return t_.fwd(base_.sample(rng)); }

  const Transform& transform() const { return t_; }
  const D& base() const { return base_; }

 private:
  Transform t_;
  D base_;
};

template <ContinuousDistribution D>
TransformedDist<D> push_dist(const Transform& t, const D& d) {
  return TransformedDist<D>(t, d);
}

// Push an observation interval through a transform. A finite interval maps
// by its endpoints; an infinitesimal one maps its center and scales the
// width by the local derivative. Escaping the domain is an error.
inline Interval push_interval(const Transform& t, const Interval& i) {
  if (i.width().order() == 0) {
    const double half = 0.5 * i.width().coeff();
    const double l = t.fwd(i.mid() - half);
    const double r = t.fwd(i.mid() + half);
    return Interval(0.5 * (l + r), InfNum(r - l, 0));
  }
  return Interval(t.fwd(i.mid()),
                  InfNum(t.fwd_deriv(i.mid()) * i.width().coeff(),
                         i.width().order()));
}

static_assert(ContinuousDistribution<TransformedDist<ContinuousDist>>);

}  // namespace infppl
