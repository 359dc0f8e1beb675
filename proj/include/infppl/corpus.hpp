#pragma once

// Bundled example programs.  Each entry pairs a model with whatever ground
// truth is available: a full enumeration for the discrete ones, a conjugate
// closed form for the single-observation ones, and the width -> 0 limit
// (which is just the prior mean) for the maybe-measured mixtures.  Models
// that observe through an interval inside a branch are flagged
// width_sensitive: for those, forgetting the interval width -- as plain
// density weighting does -- changes the answer with the choice of units.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infppl/engine.hpp"

namespace infppl {

struct Example {
  std::string name;
  std::string summary;
  Program program;
  std::optional<double> exact_value;
  std::string oracle_note;
  bool width_sensitive = false;
};

namespace detail {

// E[x | x + y = 8] for two fair dice, by enumeration.
inline double exact_two_dice() {
  const auto die = DiscreteDist::discrete_uniform(1, 6);
  double num = 0.0, den = 0.0;
  for (int x = 1; x <= 6; ++x) {
    const double w = die.pmf(8 - x);
    num += w * x;
    den += w;
  }
  return num / den;
}

// Same but the second die is only rolled (and conditioned) on heads.
inline double exact_dice_coin() {
  const auto die = DiscreteDist::discrete_uniform(1, 6);
  double num = 0.0, den = 0.0;
  for (int x = 1; x <= 6; ++x)
    for (int b = 0; b <= 1; ++b) {
      const double w = b == 1 ? die.pmf(8 - x) : 1.0;
      num += w * x;
      den += w;
    }
  return num / den;
}

// Binomial count, observed through a second binomial on heads.  The exact
// posterior mean by summing over all 10001 support points.
inline double exact_binomial_analogue() {
  const auto prior = DiscreteDist::binomial(10000, 0.5);
  const auto obs = DiscreteDist::binomial(10000, 0.9);
  double num = 0.0, den = 0.0;
  for (std::int64_t h = 0; h <= 10000; ++h) {
    const double w = prior.pmf(h) * (0.5 + 0.5 * obs.pmf(h));
    num += w * static_cast<double>(h);
    den += w;
  }
  return num / den;
}

}  // namespace detail

inline const std::vector<Example>& catalog() {
  static const std::vector<Example> examples = [] {
    std::vector<Example> v;

    v.push_back(
        {"two_dice", "roll two dice, condition on their sum being 8, report the first",
         [](TrialContext& ctx, const InfNum&) {
           const auto die = DiscreteDist::discrete_uniform(1, 6);
           const std::int64_t x = ctx.draw(die);
           ctx.observe_discrete(die, 8 - x);
           return static_cast<double>(x);
         },
         detail::exact_two_dice(), "posterior mean by enumeration", false});

    v.push_back(
        {"dice_coin", "roll a die, then on heads roll another and condition on the sum being 8",
         [](TrialContext& ctx, const InfNum&) {
           const auto die = DiscreteDist::discrete_uniform(1, 6);
           const std::int64_t x = ctx.draw(die);
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe_discrete(die, 8 - x);
           return static_cast<double>(x);
         },
         detail::exact_dice_coin(), "posterior mean by enumeration", false});

    v.push_back(
        {"intro_m", "height in meters, measured only when a coin lands heads",
         [](TrialContext& ctx, const InfNum& width) {
           const double h = ctx.draw(ContinuousDist::normal(1.7, 0.5));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe(ContinuousDist::normal(2.0, 0.1), Interval(h, width));
           return h;
         },
         1.7, "width -> 0 limit is the prior mean", true});

    v.push_back(
        {"intro_cm", "the same maybe-measured height written in centimeters",
         [](TrialContext& ctx, const InfNum& width) {
           const double h = ctx.draw(ContinuousDist::normal(170, 50));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe(ContinuousDist::normal(200, 10),
                         Interval(h, width * InfNum(100.0, 0)));
           return h;
         },
         170.0, "width -> 0 limit is the prior mean", true});

    v.push_back(
        {"bmi_m", "body mass index from height in meters, observing height or weight",
         [](TrialContext& ctx, const InfNum& width) {
           const double h = ctx.draw(ContinuousDist::normal(1.7, 0.5));
           const double w = ctx.draw(ContinuousDist::normal(70, 30));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe(ContinuousDist::normal(2.0, 0.1), Interval(h, width));
           else
             ctx.observe(ContinuousDist::normal(90, 5), Interval(w, width));
           return w / (h * h);
         },
         std::nullopt, "", true});

    v.push_back(
        {"bmi_cm", "the same body mass index model with height in centimeters",
         [](TrialContext& ctx, const InfNum& width) {
           const double h = ctx.draw(ContinuousDist::normal(170, 50));
           const double w = ctx.draw(ContinuousDist::normal(70, 30));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe(ContinuousDist::normal(200, 10),
                         Interval(h, width * InfNum(100.0, 0)));
           else
             ctx.observe(ContinuousDist::normal(90, 5), Interval(w, width));
           return 1e4 * w / (h * h);
         },
         std::nullopt, "", true});

    v.push_back(
        {"binomial_analogue", "a count measured only on heads, everything binomial",
         [](TrialContext& ctx, const InfNum&) {
           const std::int64_t h = ctx.draw(DiscreteDist::binomial(10000, 0.5));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe_discrete(DiscreteDist::binomial(10000, 0.9), h);
           return static_cast<double>(h);
         },
         detail::exact_binomial_analogue(), "posterior mean by enumeration", false});

    v.push_back(
        {"type3_db", "noise level in decibels with one interval observation",
         [](TrialContext& ctx, const InfNum& width) {
           const double x = ctx.draw(ContinuousDist::normal(10, 5));
           ctx.observe(ContinuousDist::normal(15, 5), Interval(x, width));
           return x;
         },
         12.5, "conjugate closed form", false});

    v.push_back(
        {"type3_energy", "the same noise model in energy units (exponentiated decibels)",
         [](TrialContext& ctx, const InfNum& width) {
           const double e = ctx.draw(ContinuousDist::lognormal(10, 5));
           ctx.observe(ContinuousDist::lognormal(15, 5),
                       Interval(e, width * InfNum(e, 0)));
           return e;
         },
         std::nullopt, "weights match type3_db trial for trial", false});

    v.push_back(
        {"example1", "body mass index with a ten times wider height interval",
         [](TrialContext& ctx, const InfNum& width) {
           const double h = ctx.draw(ContinuousDist::normal(1.70, 0.2));
           const double w = ctx.draw(ContinuousDist::normal(70, 30));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe(ContinuousDist::normal(2.0, 0.1),
                         Interval(h, width * InfNum(10.0, 0)));
           else
             ctx.observe(ContinuousDist::normal(90, 5), Interval(w, width));
           return w / (h * h);
         },
         std::nullopt, "", true});

    v.push_back(
        {"example2", "maybe-measured height in meters (same body as intro_m)",
         [](TrialContext& ctx, const InfNum& width) {
           const double h = ctx.draw(ContinuousDist::normal(1.7, 0.5));
           if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
             ctx.observe(ContinuousDist::normal(2.0, 0.1), Interval(h, width));
           return h;
         },
         1.7, "width -> 0 limit is the prior mean", true});

    v.push_back(
        {"example3", "single interval observation (same body as type3_db)",
         [](TrialContext& ctx, const InfNum& width) {
           const double x = ctx.draw(ContinuousDist::normal(10, 5));
           ctx.observe(ContinuousDist::normal(15, 5), Interval(x, width));
           return x;
         },
         12.5, "conjugate closed form", false});

    return v;
  }();
  return examples;
}

inline const Example* find_example(std::string_view name) {
  for (const auto& e : catalog())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace infppl
