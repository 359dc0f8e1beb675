// Using the library directly: define a custom model, watch finite interval
// widths converge to the infinitesimal limit, and rewrite the model in
// different units without changing the answer.

#include <cstdio>

#include "infppl/infppl.hpp"

using namespace infppl;

int main() {
  // A room's temperature has a vague prior around 20 C; a sensor reading of
  // 21.5 +/- 0.5 C is observed to agree with the true value up to the
  // interval width we condition on.
  const Program celsius = [](TrialContext& ctx, const InfNum& width) {
    const double t = ctx.draw(ContinuousDist::normal(20.0, 3.0));
    ctx.observe(ContinuousDist::normal(21.5, 0.5), Interval(t, width));
    return t;
  };

  const double closed_form = (20.0 / 9.0 + 21.5 / 0.25) / (1.0 / 9.0 + 1.0 / 0.25);
  std::printf("temperature posterior mean, conjugate closed form: %.4f C\n", closed_form);
  for (const InfNum& w : {InfNum(4.0, 0), InfNum(1.0, 0), InfNum(0.25, 0), InfNum(1.0, 1)}) {
    const auto r = run(celsius, Mode::kWeighted, w, 200000, 42);
    std::printf("  width %-6s -> %.4f\n", to_string(w).c_str(), r.estimate.value);
  }

  // The same model in Fahrenheit: push the prior, the sensor model, and the
  // interval through t -> 9t/5 + 32.  The interval probability is invariant
  // under the change of units, so the estimate converts exactly.
  const auto f = affine(9.0 / 5.0, 32.0);
  const Program fahrenheit = [f](TrialContext& ctx, const InfNum& width) {
    const double t = ctx.draw(push_dist(f, ContinuousDist::normal(20.0, 3.0)));
    ctx.observe(push_dist(f, ContinuousDist::normal(21.5, 0.5)),
                push_interval(f, Interval(f.inv(t), width)));
    return t;
  };
  const auto rc = run(celsius, Mode::kWeighted, InfNum(1.0, 1), 200000, 42);
  const auto rf = run(fahrenheit, Mode::kWeighted, InfNum(1.0, 1), 200000, 42);
  std::printf("units: %.6f C directly, %.6f F -> %.6f C converted back\n",
              rc.estimate.value, rf.estimate.value, f.inv(rf.estimate.value));

  // Widths earn their keep once an observation sits inside a branch.  When
  // the sensor only sometimes works, the infinitesimally-thin observation is
  // infinitely less likely than the no-reading branch, so the posterior
  // collapses to the prior.  Density weighting has no way to notice.
  const Program sometimes = [](TrialContext& ctx, const InfNum& width) {
    const double t = ctx.draw(ContinuousDist::normal(20.0, 3.0));
    if (ctx.draw(DiscreteDist::bernoulli(0.5)) == 1)
      ctx.observe(ContinuousDist::normal(21.5, 0.5), Interval(t, width));
    return t;
  };
  const auto weighted = run(sometimes, Mode::kWeighted, InfNum(1.0, 1), 200000, 42);
  const auto density = run(sometimes, Mode::kDensity, InfNum(1.0, 1), 200000, 42);
  std::printf("sometimes-measured: weighted at eps %.4f (the prior mean), density %.4f\n",
              weighted.estimate.value, density.estimate.value);
  return 0;
}
