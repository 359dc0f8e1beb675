#pragma once

// Distribution kinds the runtime understands: densities, cumulative
// probabilities, point masses, and sampling. Parameters are validated at
// construction; pdf/cdf/pmf are pure real functions, and sampling consumes
// uniforms from an explicit RandomStream so every draw is addressable.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <variant>

#include "infppl/random.hpp"

namespace infppl {

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline constexpr double kInvSqrt2 = 0.70710678118654752440;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kPi = 3.14159265358979323846;

// std::lgamma may write the global signgam; use the reentrant form where
// available so density evaluation stays safe under concurrent trials.
inline double lgamma_ts(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double norm_cdf(double z) { return 0.5 * std::erfc(-z * kInvSqrt2); }

inline double log_beta(double a, double b) {
  return lgamma_ts(a) + lgamma_ts(b) - lgamma_ts(a + b);
}

// Continued fraction for the regularized incomplete beta, evaluated with
// the modified Lentz method. Converges quickly for x < (a+1)/(a+b+2).
inline double ibeta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 3e-16) break;
  }
  return h;
}

// Regularized incomplete beta I_x(a, b).
inline double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * ibeta_cf(a, b, x) / a;
  return 1.0 - front * ibeta_cf(b, a, 1.0 - x) / b;
}

// Standard normal variate by Box-Muller; two uniforms per call, the second
// branch of the pair deliberately unused so each call is self-contained.
inline double normal_z(RandomStream& rng) {
  const double u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Gamma(shape, 1) by Marsaglia-Tsang squeeze, boosted below shape 1.
inline double gamma_sample(double shape, RandomStream& rng) {
  if (shape < 1.0) {
    const double u = rng.next_double();
    return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = normal_z(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

}  // namespace detail

class ContinuousDist {
 public:
  static ContinuousDist normal(double mu, double sigma) {
    require_finite(mu, "normal: mu");
    require_positive(sigma, "normal: sigma");
    return ContinuousDist(NormalP{mu, sigma});
  }
  static ContinuousDist lognormal(double mu, double sigma) {
    require_finite(mu, "lognormal: mu");
    require_positive(sigma, "lognormal: sigma");
    return ContinuousDist(LogNormalP{mu, sigma});
  }
  static ContinuousDist uniform(double lo, double hi) {
    require_finite(lo, "uniform: lo");
    require_finite(hi, "uniform: hi");
    if (!(lo < hi)) throw std::invalid_argument("uniform: requires lo < hi");
    return ContinuousDist(UniformP{lo, hi});
  }
  static ContinuousDist cauchy(double x0, double gamma) {
    require_finite(x0, "cauchy: x0");
    require_positive(gamma, "cauchy: gamma");
    return ContinuousDist(CauchyP{x0, gamma});
  }
  static ContinuousDist beta(double alpha, double beta) {
    require_positive(alpha, "beta: alpha");
    require_positive(beta, "beta: beta");
    return ContinuousDist(BetaP{alpha, beta});
  }

  double pdf(double x) const {
    return std::visit(
        detail::overloaded{
            [&](const NormalP& p) {
              const double z = (x - p.mu) / p.sigma;
              return detail::kInvSqrt2Pi / p.sigma * std::exp(-0.5 * z * z);
            },
            [&](const LogNormalP& p) {
              if (x <= 0.0) return 0.0;
              const double z = (std::log(x) - p.mu) / p.sigma;
              return detail::kInvSqrt2Pi / (x * p.sigma) * std::exp(-0.5 * z * z);
            },
            [&](const UniformP& p) {
              return x >= p.lo && x <= p.hi ? 1.0 / (p.hi - p.lo) : 0.0;
            },
            [&](const CauchyP& p) {
              const double t = (x - p.x0) / p.gamma;
              return 1.0 / (detail::kPi * p.gamma * (1.0 + t * t));
            },
            [&](const BetaP& p) {
              if (x < 0.0 || x > 1.0) return 0.0;
              if (x == 0.0) {
                if (p.alpha > 1.0) return 0.0;
                if (p.alpha == 1.0) return p.beta;
                return std::numeric_limits<double>::infinity();
              }
              if (x == 1.0) {
                if (p.beta > 1.0) return 0.0;
                if (p.beta == 1.0) return p.alpha;
                return std::numeric_limits<double>::infinity();
              }
              return std::exp((p.alpha - 1.0) * std::log(x) +
                              (p.beta - 1.0) * std::log1p(-x) -
                              detail::log_beta(p.alpha, p.beta));
            }},
        v_);
  }

  double cdf(double x) const {
    return std::visit(
        detail::overloaded{
            [&](const NormalP& p) {
              return detail::norm_cdf((x - p.mu) / p.sigma);
            },
            [&](const LogNormalP& p) {
              if (x <= 0.0) return 0.0;
              return detail::norm_cdf((std::log(x) - p.mu) / p.sigma);
            },
            [&](const UniformP& p) {
              if (x <= p.lo) return 0.0;
              if (x >= p.hi) return 1.0;
              return (x - p.lo) / (p.hi - p.lo);
            },
            [&](const CauchyP& p) {
              return 0.5 + std::atan((x - p.x0) / p.gamma) / detail::kPi;
            },
            [&](const BetaP& p) { return detail::ibeta(p.alpha, p.beta, x); }},
        v_);
  }

  double sample(RandomStream& rng) const {
    return std::visit(
        detail::overloaded{
            [&](const NormalP& p) { return p.mu + p.sigma * detail::normal_z(rng); },
            [&](const LogNormalP& p) {
              return std::exp(p.mu + p.sigma * detail::normal_z(rng));
            },
            [&](const UniformP& p) {
              return p.lo + rng.next_double() * (p.hi - p.lo);
            },
            [&](const CauchyP& p) {
              return p.x0 + p.gamma * std::tan(detail::kPi * (rng.next_double() - 0.5));
            },
            [&](const BetaP& p) {
              const double ga = detail::gamma_sample(p.alpha, rng);
              const double gb = detail::gamma_sample(p.beta, rng);
              return ga / (ga + gb);
            }},
        v_);
  }

 private:
  struct NormalP {
    double mu, sigma;
  };
  struct LogNormalP {
    double mu, sigma;
  };
  struct UniformP {
    double lo, hi;
  };
  struct CauchyP {
    double x0, gamma;
  };
  struct BetaP {
    double alpha, beta;
  };

  template <class P>
  explicit ContinuousDist(P p) : v_(p) {}

  static void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
  }
  static void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }

  std::variant<NormalP, LogNormalP, UniformP, CauchyP, BetaP> v_;
};

class DiscreteDist {
 public:
  static DiscreteDist bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("bernoulli: p must lie in [0, 1]");
    return DiscreteDist(BernoulliP{p});
  }
  static DiscreteDist binomial(std::int64_t n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("binomial: p must lie in [0, 1]");
    return DiscreteDist(BinomialP{n, p});
  }
  static DiscreteDist discrete_uniform(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("discrete_uniform: requires lo <= hi");
    return DiscreteDist(DiscreteUniformP{lo, hi});
  }

  double pmf(std::int64_t k) const {
    return std::visit(
        detail::overloaded{
            [&](const BernoulliP& p) {
              if (k == 1) return p.p;
              if (k == 0) return 1.0 - p.p;
              return 0.0;
            },
            [&](const BinomialP& p) {
              if (k < 0 || k > p.n) return 0.0;
              if (p.p == 0.0) return k == 0 ? 1.0 : 0.0;
              if (p.p == 1.0) return k == p.n ? 1.0 : 0.0;
              const double kk = static_cast<double>(k);
              const double nn = static_cast<double>(p.n);
              const double lchoose = detail::lgamma_ts(nn + 1.0) -
                                     detail::lgamma_ts(kk + 1.0) -
                                     detail::lgamma_ts(nn - kk + 1.0);
              return std::exp(lchoose + kk * std::log(p.p) +
                              (nn - kk) * std::log1p(-p.p));
            },
            [&](const DiscreteUniformP& p) {
              if (k < p.lo || k > p.hi) return 0.0;
              return 1.0 / static_cast<double>(p.hi - p.lo + 1);
            }},
        v_);
  }

  std::int64_t sample(RandomStream& rng) const {
    return std::visit(
        detail::overloaded{
            [&](const BernoulliP& p) -> std::int64_t {
              return rng.next_double() < p.p ? 1 : 0;
            },
            [&](const BinomialP& p) -> std::int64_t {
              if (p.n == 0 || p.p == 0.0) return 0;
              if (p.p == 1.0) return p.n;
              // Exact inverse-cdf sampling: one uniform, then a binary
              // search on P(X <= k) = I_{1-p}(n-k, k+1). Works at large n
              // where pmf recurrences from 0 underflow.
              const double u = rng.next_double();
              std::int64_t lo = 0, hi = p.n;
              while (lo < hi) {
                const std::int64_t mid = lo + (hi - lo) / 2;
                if (cdf(p, mid) >= u)
                  hi = mid;
                else
                  lo = mid + 1;
              }
              return lo;
            },
            [&](const DiscreteUniformP& p) -> std::int64_t {
              const double span = static_cast<double>(p.hi - p.lo + 1);
              const auto offset =
                  static_cast<std::int64_t>(rng.next_double() * span);
              const std::int64_t k = p.lo + offset;
              return k > p.hi ? p.hi : k;
            }},
        v_);
  }

 private:
  struct BernoulliP {
    double p;
  };
  struct BinomialP {
    std::int64_t n;
    double p;
  };
  struct DiscreteUniformP {
    std::int64_t lo, hi;
  };

  static double cdf(const BinomialP& p, std::int64_t k) {
    if (k < 0) return 0.0;
    if (k >= p.n) return 1.0;
    const double a = static_cast<double>(p.n - k);
    const double b = static_cast<double>(k + 1);
    return detail::ibeta(a, b, 1.0 - p.p);
  }

  template <class P>
  explicit DiscreteDist(P p) : v_(p) {}

  std::variant<BernoulliP, BinomialP, DiscreteUniformP> v_;
};

// Anything with pointwise density, cumulative probability, and sampling:
// the built-in ContinuousDist and any distribution produced by pushing one
// through a transform.
template <class D>
concept ContinuousDistribution = requires(const D& d, double x, RandomStream& rng) {
  { d.pdf(x) } -> std::convertible_to<double>;
  { d.cdf(x) } -> std::convertible_to<double>;
  { d.sample(rng) } -> std::convertible_to<double>;
};

static_assert(ContinuousDistribution<ContinuousDist>);

}  // namespace infppl
