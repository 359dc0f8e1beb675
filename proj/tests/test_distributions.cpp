#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "infppl/distributions.hpp"
#include "test_support.hpp"
#include "infppl/random.hpp"

using infppl::ContinuousDist;
using infppl::DiscreteDist;
using infppl::RandomStream;

namespace {

double ks_distance(std::vector<double> xs, const ContinuousDist& d) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double c = d.cdf(xs[i]);
    worst = std::max(worst, std::abs((i + 1) / n - c));
    worst = std::max(worst, std::abs(i / n - c));
  }
  return worst;
}

}  // namespace

TEST_CASE("philox known-answer vectors", "[distributions][random]") {
  // Published test vectors for Philox 4x32 with 10 rounds.
  const auto zero = infppl::detail::philox10({0, 0, 0, 0}, {0, 0});
  CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du,
                                             0xbc57ac4cu, 0x9b00dbd8u});

  const auto ones = infppl::detail::philox10(
      {0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
      {0xffffffffu, 0xffffffffu});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu,
                                             0xa20bc7c6u, 0x6d5451fdu});

  const auto pi = infppl::detail::philox10(
      {0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
      {0xa4093822u, 0x299f31d0u});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu,
                                           0x5001e420u, 0x24126ea1u});
}

TEST_CASE("random streams are reproducible and distinct", "[distributions][random]") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  bool all_equal = true, differs_stream = false, differs_seed = false;
  for (int i = 0; i < 64; ++i) {
    const double va = a.next_double();
    all_equal = all_equal && va == b.next_double();
    differs_stream = differs_stream || va != c.next_double();
    differs_seed = differs_seed || va != d.next_double();
  }
  CHECK(all_equal);
  CHECK(differs_stream);
  CHECK(differs_seed);
}

TEST_CASE("uniform doubles stay strictly inside (0,1)", "[distributions][random]") {
  RandomStream rng(1, 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = rng.next_double();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(lo < 1e-4);   // the range is actually being covered
  CHECK(hi > 1.0 - 1e-4);
}

TEST_CASE("normal density and cumulative", "[distributions]") {
  const auto std_normal = ContinuousDist::normal(0, 1);
  CHECK(std_normal.pdf(0.0) == Catch::Approx(0.3989422804014327).epsilon(1e-14));
  CHECK(std_normal.cdf(0.0) == Catch::Approx(0.5).margin(1e-15));

  // Central interval mass, checked against quadrature of the density and
  // against the frozen value of that quadrature.
  const double mass = std_normal.cdf(1.0) - std_normal.cdf(-1.0);
  const double oracle =
      test_support::integrate([&](double x) { return std_normal.pdf(x); }, -1.0, 1.0);
  CHECK(std::abs(mass - oracle) <= 1e-12);
  CHECK(std::abs(mass - 0.6826894921370859) <= 1e-10);

  // Location-scale invariance.
  const auto shifted = ContinuousDist::normal(2, 3);
  for (double z : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    CHECK(shifted.cdf(2.0 + 3.0 * z) == Catch::Approx(std_normal.cdf(z)).margin(1e-14));
    CHECK(shifted.pdf(2.0 + 3.0 * z) ==
          Catch::Approx(std_normal.pdf(z) / 3.0).epsilon(1e-13));
  }
  CHECK(shifted.pdf(2.0) == Catch::Approx(0.1329807601338109).epsilon(1e-13));

  // Complementary form keeps the lower tail meaningful instead of
  // cancelling to zero anywhere near the working range.
  CHECK(std_normal.cdf(-37.0) > 0.0);
  CHECK(std_normal.cdf(-37.0) < 1e-200);
  CHECK(std_normal.cdf(8.0) < 1.0);
}

TEST_CASE("lognormal is the exponentiated normal", "[distributions]") {
  const auto ln = ContinuousDist::lognormal(0, 1);
  const auto n = ContinuousDist::normal(0, 1);
  CHECK(ln.cdf(1.0) == Catch::Approx(0.5).margin(1e-14));
  CHECK(ln.cdf(std::exp(1.0)) == Catch::Approx(0.8413447460685429).margin(1e-10));
  for (double x : {0.2, 0.7, 1.0, 2.5, 9.0}) {
    CHECK(ln.pdf(x) == Catch::Approx(n.pdf(std::log(x)) / x).epsilon(1e-13));
    CHECK(ln.cdf(x) == Catch::Approx(n.cdf(std::log(x))).margin(1e-14));
  }
  CHECK(ln.pdf(-1.0) == 0.0);
  CHECK(ln.cdf(-1.0) == 0.0);
  CHECK(ln.cdf(0.0) == 0.0);
}

TEST_CASE("uniform and cauchy closed forms", "[distributions]") {
  const auto u = ContinuousDist::uniform(-1, 3);
  CHECK(u.pdf(0.0) == 0.25);
  CHECK(u.pdf(5.0) == 0.0);
  CHECK(u.cdf(-1.0) == 0.0);
  CHECK(u.cdf(1.0) == 0.5);
  CHECK(u.cdf(3.0) == 1.0);
  CHECK(u.cdf(100.0) == 1.0);

  const auto c = ContinuousDist::cauchy(0, 1);
  CHECK(c.cdf(0.0) == Catch::Approx(0.5).margin(1e-15));
  CHECK(c.cdf(1.0) == Catch::Approx(0.75).margin(1e-14));
  CHECK(c.pdf(0.0) == Catch::Approx(1.0 / infppl::detail::kPi).epsilon(1e-14));
  const double mass = c.cdf(2.0) - c.cdf(-0.5);
  const double oracle = test_support::integrate([&](double x) { return c.pdf(x); }, -0.5, 2.0);
  CHECK(std::abs(mass - oracle) <= 1e-12);
}

TEST_CASE("beta density and cumulative", "[distributions]") {
  const auto b23 = ContinuousDist::beta(2, 3);
  // pdf = 12 x (1-x)^2; cdf(1/2) = 11/16 by the polynomial antiderivative.
  CHECK(b23.pdf(0.25) == Catch::Approx(1.6875).epsilon(1e-13));
  CHECK(b23.cdf(0.5) == Catch::Approx(0.6875).margin(1e-12));
  CHECK(b23.cdf(0.0) == 0.0);
  CHECK(b23.cdf(1.0) == 1.0);

  // Quadrature oracle across parameter space.
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> param(1.0, 20.0), point(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const double a = param(gen), b = param(gen), x = point(gen);
    const auto d = ContinuousDist::beta(a, b);
    const double oracle = test_support::integrate([&](double t) { return d.pdf(t); }, 0.0, x);
    CHECK(std::abs(d.cdf(x) - oracle) <= 1e-10);
  }

  // Reflection identity covers shapes below 1.
  std::uniform_real_distribution<double> small(0.2, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double a = small(gen), b = small(gen), x = point(gen);
    CHECK(ContinuousDist::beta(a, b).cdf(x) ==
          Catch::Approx(1.0 - ContinuousDist::beta(b, a).cdf(1.0 - x)).margin(1e-12));
  }
}

TEST_CASE("cdf numerically differentiates to pdf", "[distributions]") {
  std::mt19937_64 gen(4242);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<ContinuousDist> dists = {
      ContinuousDist::normal(0, 1),     ContinuousDist::normal(-3, 0.5),
      ContinuousDist::lognormal(0, 1),  ContinuousDist::uniform(-2, 5),
      ContinuousDist::cauchy(1, 2),     ContinuousDist::beta(2, 3),
      ContinuousDist::beta(5, 1.5),     ContinuousDist::normal(170, 50)};
  int checked = 0;
  while (checked < 100) {
    const auto& d = dists[gen() % dists.size()];
    // Sample a point from the distribution itself so it lands where the
    // density is meaningful, and skip points outside the support interior.
    RandomStream rng(55, static_cast<std::uint64_t>(checked));
    const double x = d.sample(rng);
    const double scale = std::max(1.0, std::abs(x));
    const double h = 1e-6 * scale;
    const double lo = d.cdf(x - h), hi = d.cdf(x + h);
    if (lo == 0.0 || hi == 1.0) continue;  // outside the support's interior
    const double deriv = (hi - lo) / (2.0 * h);
    const double pdf = d.pdf(x);
    if (!(std::isfinite(pdf)) || pdf > 1e3) continue;
    CHECK(std::abs(deriv - pdf) <= 1e-6 * std::max(1.0, pdf));
    ++checked;
    (void)u01;
  }
}

TEST_CASE("bernoulli and discrete uniform pmf", "[distributions]") {
  const auto bern = DiscreteDist::bernoulli(0.3);
  CHECK(bern.pmf(1) == 0.3);
  CHECK(bern.pmf(0) == 0.7);
  CHECK(bern.pmf(2) == 0.0);
  CHECK(bern.pmf(-1) == 0.0);

  const auto du = DiscreteDist::discrete_uniform(1, 6);
  CHECK(du.pmf(1) == Catch::Approx(1.0 / 6.0));
  CHECK(du.pmf(6) == Catch::Approx(1.0 / 6.0));
  CHECK(du.pmf(0) == 0.0);
  CHECK(du.pmf(7) == 0.0);
}

TEST_CASE("binomial pmf against exact combinatorics", "[distributions]") {
  const auto b10 = DiscreteDist::binomial(10, 0.5);
  CHECK(b10.pmf(5) == Catch::Approx(252.0 / 1024.0).epsilon(1e-13));
  CHECK(b10.pmf(0) == Catch::Approx(1.0 / 1024.0).epsilon(1e-12));
  CHECK(b10.pmf(11) == 0.0);
  CHECK(b10.pmf(-1) == 0.0);

  // Large-n value against the log-factorial oracle.
  const auto big = DiscreteDist::binomial(10000, 0.5);
  const long double lf = test_support::log_factorial(10000) - 2.0L * test_support::log_factorial(5000) +
                         10000.0L * std::log(0.5L);
  const double oracle = static_cast<double>(std::exp(lf));
  CHECK(std::abs(big.pmf(5000) - oracle) <= 1e-9 * oracle);

  const auto skew = DiscreteDist::binomial(10000, 0.9);
  const long double lf2 = test_support::log_factorial(10000) - test_support::log_factorial(9000) -
                          test_support::log_factorial(1000) + 9000.0L * std::log(0.9L) +
                          1000.0L * std::log(0.1L);
  CHECK(std::abs(skew.pmf(9000) - static_cast<double>(std::exp(lf2))) <=
        1e-9 * static_cast<double>(std::exp(lf2)));

  // Edge probabilities.
  CHECK(DiscreteDist::binomial(5, 0.0).pmf(0) == 1.0);
  CHECK(DiscreteDist::binomial(5, 1.0).pmf(5) == 1.0);
  CHECK(DiscreteDist::binomial(5, 1.0).pmf(4) == 0.0);
}

TEST_CASE("binomial pmf sums to one over the full support", "[distributions]") {
  for (const auto& [n, p] : std::vector<std::pair<std::int64_t, double>>{
           {10, 0.5}, {123, 0.07}, {10000, 0.5}, {10000, 0.9}}) {
    const auto d = DiscreteDist::binomial(n, p);
    long double total = 0.0L;
    for (std::int64_t k = 0; k <= n; ++k) total += d.pmf(k);
    CHECK(std::abs(static_cast<double>(total) - 1.0) <= 1e-9);
  }
}

TEST_CASE("sampling matches the cumulative distribution (KS)", "[distributions]") {
  const std::vector<ContinuousDist> dists = {
      ContinuousDist::normal(0, 1), ContinuousDist::lognormal(0, 1),
      ContinuousDist::uniform(-1, 2), ContinuousDist::cauchy(0, 1),
      ContinuousDist::beta(2, 3)};
  for (std::size_t i = 0; i < dists.size(); ++i) {
    std::vector<double> xs(100000);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      RandomStream rng(2024, (i << 32) | k);
      xs[k] = dists[i].sample(rng);
    }
    CHECK(ks_distance(std::move(xs), dists[i]) <= 0.01);
  }
}

TEST_CASE("sample mean obeys the law of large numbers", "[distributions]") {
  const auto d = ContinuousDist::normal(1.7, 0.5);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < 1000000; ++k) {
    RandomStream rng(99, k);
    sum += d.sample(rng);
  }
  CHECK(std::abs(sum / 1e6 - 1.7) <= 0.002);
}

TEST_CASE("discrete sampling matches pmf frequencies", "[distributions]") {
  const auto du = DiscreteDist::discrete_uniform(1, 6);
  std::array<int, 7> face{};
  for (std::uint64_t k = 0; k < 100000; ++k) {
    RandomStream rng(7, k);
    const auto v = du.sample(rng);
    REQUIRE(v >= 1);
    REQUIRE(v <= 6);
    ++face[v];
  }
  for (int f = 1; f <= 6; ++f)
    CHECK(std::abs(face[f] / 1e5 - 1.0 / 6.0) <= 0.01);

  const auto bin = DiscreteDist::binomial(10, 0.3);
  std::array<int, 11> hist{};
  for (std::uint64_t k = 0; k < 100000; ++k) {
    RandomStream rng(8, k);
    const auto v = bin.sample(rng);
    REQUIRE(v >= 0);
    REQUIRE(v <= 10);
    ++hist[v];
  }
  for (int k = 0; k <= 10; ++k)
    CHECK(std::abs(hist[k] / 1e5 - bin.pmf(k)) <= 0.01);

  const auto bern = DiscreteDist::bernoulli(0.25);
  int ones = 0;
  for (std::uint64_t k = 0; k < 100000; ++k) {
    RandomStream rng(9, k);
    ones += static_cast<int>(bern.sample(rng));
  }
  CHECK(std::abs(ones / 1e5 - 0.25) <= 0.01);

  RandomStream edge(1, 1);
  CHECK(DiscreteDist::bernoulli(0.0).sample(edge) == 0);
  CHECK(DiscreteDist::bernoulli(1.0).sample(edge) == 1);
}

TEST_CASE("large-n binomial sampling is exact inverse-cdf", "[distributions]") {
  const auto big = DiscreteDist::binomial(10000, 0.5);
  double sum = 0.0;
  std::int64_t lo = 10000, hi = 0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    RandomStream rng(6, static_cast<std::uint64_t>(k));
    const auto v = big.sample(rng);
    sum += static_cast<double>(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // mean 5000, sd 50; the sample mean lands within 4 standard errors.
  CHECK(std::abs(sum / n - 5000.0) <= 4.0 * 50.0 / std::sqrt(1.0 * n));
  CHECK(lo >= 4700);
  CHECK(hi <= 5300);
}

TEST_CASE("parameter validation", "[distributions]") {
  CHECK_THROWS_AS(ContinuousDist::normal(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::normal(0, -1), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::lognormal(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::uniform(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::uniform(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::cauchy(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::beta(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousDist::beta(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist::bernoulli(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist::bernoulli(1.1), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist::binomial(-1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist::binomial(10, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteDist::discrete_uniform(3, 2), std::invalid_argument);
}
