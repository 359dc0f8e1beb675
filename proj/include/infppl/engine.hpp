#pragma once

// Importance-sampling engine over programs that draw from distributions and
// condition on intervals.  Three modes share one driver:
//
//   weighted   keep the interval probability (often an infinitesimal) as the
//              trial weight and report the ratio sum(w*v)/sum(w) at the
//              dominant order -- this is the limit the width tends to.
//   density    keep the density at the interval midpoint and forget the
//              width entirely.  This is what naive likelihood weighting
//              does, and it is where the unit paradoxes live.
//   rejection  sample from the observed distribution and test membership in
//              the interval.  Only meaningful for finite widths.
//
// Randomness is one Philox substream per operation: the stream id packs
// (trial, op index, op kind), where draws and rejection observes count
// separately.  A program's draws therefore see bit-identical randomness in
// every mode and at every width, which is what makes cross-mode and
// cross-unit weight comparisons exact rather than statistical.

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "infppl/distributions.hpp"
#include "infppl/infnum.hpp"
#include "infppl/measure.hpp"
#include "infppl/random.hpp"

namespace infppl {

enum class Mode { kWeighted, kDensity, kRejection };

// Every trial weight had coefficient zero at the leading order, so the
// normalizing constant vanishes and the posterior ratio is 0/0.
class UndefinedEstimateError : public std::runtime_error {
 public:
  explicit UndefinedEstimateError(std::int32_t min_order)
      : std::runtime_error("estimate undefined: every weight at order " +
                           std::to_string(min_order) +
                           " has coefficient zero"),
        min_order_(min_order) {}
  std::int32_t min_order() const { return min_order_; }

 private:
  std::int32_t min_order_;
};

class ZeroAcceptedError : public std::runtime_error {
 public:
  ZeroAcceptedError() : std::runtime_error("rejection run accepted no trials") {}
};

class RejectionWidthError : public std::runtime_error {
 public:
  RejectionWidthError()
      : std::runtime_error(
            "rejection mode cannot condition on an infinitesimal-width "
            "interval; use a finite width or the weighted mode") {}
};

// Control-flow token for abandoning a trial whose weight can no longer reach
// the dominant order.  Deliberately not a std::exception so model code that
// catches std::exception cannot swallow it.
struct TrialPruned {};

class TrialContext {
 public:
  TrialContext(std::uint64_t seed, std::int64_t trial, Mode mode,
               const std::atomic<std::int32_t>* prune_bar)
      : seed_(seed), trial_(trial), mode_(mode), prune_bar_(prune_bar) {}

  Mode mode() const { return mode_; }
  const InfNum& weight() const { return weight_; }
  bool alive() const { return alive_; }

  template <ContinuousDistribution D>
  double draw(const D& d) {
    RandomStream s = draw_stream();
    return d.sample(s);
  }
  std::int64_t draw(const DiscreteDist& d) {
    RandomStream s = draw_stream();
    return d.sample(s);
  }

  template <ContinuousDistribution D>
  void observe(const D& d, const Interval& interval) {
    const std::uint64_t op = observe_count_++;
    if (!alive_) return;  // a rejected trial ignores later conditions
    switch (mode_) {
      case Mode::kWeighted:
        scale_weight(prob(d, interval));
        break;
      case Mode::kDensity:
        scale_weight(InfNum(d.pdf(interval.mid()), 0));
        break;
      case Mode::kRejection: {
        if (interval.width().order() != 0) throw RejectionWidthError();
        RandomStream s = observe_stream(op);
        const double x = d.sample(s);
        const double half = 0.5 * interval.width().coeff();
        if (x < interval.mid() - half || x > interval.mid() + half)
          alive_ = false;
        break;
      }
    }
  }

  void observe_discrete(const DiscreteDist& d, std::int64_t k) {
    const std::uint64_t op = observe_count_++;
    if (!alive_) return;
    if (mode_ == Mode::kRejection) {
      RandomStream s = observe_stream(op);
      if (d.sample(s) != k) alive_ = false;
    } else {
      scale_weight(InfNum(d.pmf(k), 0));
    }
  }

  // Multiply the trial weight by an arbitrary factor.  Rejection runs ignore
  // weights entirely -- acceptance is all that counts there.
  void scale_weight(const InfNum& factor) {
    weight_ = weight_ * factor;
    if (prune_bar_ &&
        weight_.order() > prune_bar_->load(std::memory_order_relaxed))
      throw TrialPruned{};
  }

  void reject() { alive_ = false; }

 private:
  RandomStream draw_stream() { return RandomStream(seed_, stream_id(kKindDraw, draw_count_++)); }
  RandomStream observe_stream(std::uint64_t op) { return RandomStream(seed_, stream_id(kKindObserve, op)); }
  std::uint64_t stream_id(std::uint64_t kind, std::uint64_t op) const {
    return static_cast<std::uint64_t>(trial_) | (op << 32) | (kind << 62);
  }

  static constexpr std::uint64_t kKindDraw = 0;
  static constexpr std::uint64_t kKindObserve = 1;

  std::uint64_t seed_;
  std::int64_t trial_;
  Mode mode_;
  const std::atomic<std::int32_t>* prune_bar_;
  InfNum weight_{1.0, 0};
  bool alive_ = true;
  std::uint64_t draw_count_ = 0;
  std::uint64_t observe_count_ = 0;
};

// A model: draws and observes through the context, conditions its intervals
// on the supplied width, and returns the quantity whose posterior mean we
// want.  Must return a finite value for every trial.
using Program = std::function<double(TrialContext&, const InfNum&)>;

struct RunOptions {
  int threads = 1;
  bool prune = false;        // abandon trials that cannot reach the leading order
  bool keep_trials = false;  // return per-trial weights and values
};

struct Estimate {
  double value = 0.0;
  std::int32_t min_order = 0;         // leading order of the weight sum
  std::int64_t effective_trials = 0;  // weights with nonzero coefficient there
  double denom_coeff = 0.0;           // coefficient of the weight sum
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

struct RunResult {
  Estimate estimate;
  std::vector<InfNum> weights;  // filled when RunOptions::keep_trials
  std::vector<double> values;
};

inline RunResult run(const Program& program, Mode mode, const InfNum& width,
                     std::int64_t trials, std::uint64_t seed,
                     const RunOptions& options = {}) {
  if (trials < 1) throw std::invalid_argument("run: trials must be >= 1");
  if (!(width.coeff() >= 0) || width.order() < 0)
    throw std::invalid_argument("run: width must be nonnegative with order >= 0");
  if (options.threads < 1) throw std::invalid_argument("run: threads must be >= 1");

  std::vector<InfNum> weights(static_cast<std::size_t>(trials), InfNum(0.0, 0));
  std::vector<double> values(static_cast<std::size_t>(trials), 0.0);
  std::atomic<std::int32_t> prune_bar{std::numeric_limits<std::int32_t>::max()};

  auto run_range = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t t = lo; t < hi; ++t) {
      TrialContext ctx(seed, t, mode, options.prune ? &prune_bar : nullptr);
      bool pruned = false;
      double value = 0.0;
      try {
        value = program(ctx, width);
      } catch (const TrialPruned&) {
        pruned = true;  // weight order already exceeds the bar; keep it as-is
      }
      InfNum w = ctx.weight();
      if (mode == Mode::kRejection) w = InfNum(ctx.alive() ? 1.0 : 0.0, 0);
      weights[static_cast<std::size_t>(t)] = w;
      values[static_cast<std::size_t>(t)] = pruned ? 0.0 : value;
      if (options.prune && !pruned) {
        std::int32_t cur = prune_bar.load(std::memory_order_relaxed);
        while (w.order() < cur &&
               !prune_bar.compare_exchange_weak(cur, w.order(),
                                                std::memory_order_relaxed)) {
        }
      }
    }
  };

  const int threads =
      static_cast<int>(std::min<std::int64_t>(options.threads, trials));
  if (threads <= 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const std::int64_t chunk = trials / threads;
    const std::int64_t rem = trials % threads;
    std::int64_t lo = 0;
    for (int w = 0; w < threads; ++w) {
      const std::int64_t hi = lo + chunk + (w < rem ? 1 : 0);
      pool.emplace_back([&, w, lo, hi] {
        try {
          run_range(lo, hi);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
      lo = hi;
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  // Fold in trial order.  Sums of these scalars keep only the lowest order
  // present, so the fold must start from trial 0's own terms: there is no
  // neutral element that could seed it.  A fixed sequential order over the
  // filled arrays also makes the result independent of the thread count.
  InfNum den = weights[0];
  InfNum num = weights[0] * InfNum(values[0], 0);
  for (std::size_t i = 1; i < weights.size(); ++i) {
    den = den + weights[i];
    num = num + weights[i] * InfNum(values[i], 0);
  }

  if (den.coeff() == 0.0) {
    if (mode == Mode::kRejection) throw ZeroAcceptedError();
    throw UndefinedEstimateError(den.order());
  }
  const auto ratio = div(num, den);
  if (!ratio || ratio->order() != 0)
    throw std::logic_error("run: estimate did not reduce to a real number");

  RunResult result;
  result.estimate.value = ratio->coeff();
  result.estimate.min_order = den.order();
  std::int64_t eff = 0;
  for (const InfNum& w : weights)
    if (w.order() == den.order() && w.coeff() != 0.0) ++eff;
  result.estimate.effective_trials = eff;
  result.estimate.denom_coeff = den.coeff();
  result.estimate.trials = trials;
  result.estimate.seed = seed;
  if (options.keep_trials) {
    result.weights = std::move(weights);
    result.values = std::move(values);
  }
  return result;
}

}  // namespace infppl
