#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "infppl/corpus.hpp"

using infppl::catalog;
using infppl::find_example;
using infppl::InfNum;
using infppl::Mode;
using infppl::RunOptions;

namespace {

infppl::RunResult run_example(const char* name, Mode mode, const InfNum& width,
                              std::int64_t trials, std::uint64_t seed,
                              bool keep = false) {
  const auto* e = find_example(name);
  REQUIRE(e != nullptr);
  RunOptions o;
  o.keep_trials = keep;
  return run(e->program, mode, width, trials, seed, o);
}

const InfNum kEps(1.0, 1);

}  // namespace

TEST_CASE("the catalog lists every example once", "[corpus]") {
  const auto& all = catalog();
  CHECK(all.size() == 12);
  std::set<std::string> names;
  for (const auto& e : all) {
    CHECK(names.insert(e.name).second);
    CHECK_FALSE(e.summary.empty());
    CHECK(e.program != nullptr);
  }
  CHECK(all.front().name == "two_dice");
  CHECK(find_example("type3_db") != nullptr);
  CHECK(find_example("no_such_model") == nullptr);
}

TEST_CASE("enumeration oracles hit their closed forms", "[corpus]") {
  CHECK(find_example("two_dice")->exact_value.value() ==
        Catch::Approx(4.0).margin(1e-12));
  CHECK(find_example("dice_coin")->exact_value.value() ==
        Catch::Approx(146.0 / 41.0).margin(1e-12));
  // The coin branch multiplies two binomial pmfs whose overlap underflows to
  // zero in doubles, so the enumerated mean is the prior mean on the nose.
  CHECK(find_example("binomial_analogue")->exact_value.value() ==
        Catch::Approx(5000.0).margin(1e-6));
}

TEST_CASE("examples with ground truth converge to it", "[corpus]") {
  auto r = run_example("two_dice", Mode::kWeighted, kEps, 20000, 1);
  CHECK(std::abs(r.estimate.value - 4.0) < 0.1);
  r = run_example("dice_coin", Mode::kWeighted, kEps, 20000, 1);
  CHECK(std::abs(r.estimate.value - 146.0 / 41.0) < 0.1);
  r = run_example("type3_db", Mode::kWeighted, kEps, 20000, 1);
  CHECK(std::abs(r.estimate.value - 12.5) < 0.3);
  r = run_example("binomial_analogue", Mode::kWeighted, kEps, 5000, 1);
  CHECK(std::abs(r.estimate.value - 5000.0) < 5.0);
}

TEST_CASE("maybe-measured heights: the limit is unit-invariant, densities are not",
          "[corpus]") {
  // At infinitesimal width the unmeasured branch dominates, so both unit
  // systems report their prior mean and agree after conversion.
  const auto m = run_example("intro_m", Mode::kWeighted, kEps, 10000, 1);
  const auto cm = run_example("intro_cm", Mode::kWeighted, kEps, 10000, 1);
  CHECK(std::abs(m.estimate.value - 1.7) < 0.05);
  CHECK(std::abs(cm.estimate.value - 170.0) < 5.0);
  CHECK(std::abs(100.0 * m.estimate.value - cm.estimate.value) < 1e-9);

  // Density weighting mixes the branches and the answers drift apart by
  // about 11 cm depending on nothing but the units.
  const auto md = run_example("intro_m", Mode::kDensity, kEps, 10000, 1);
  const auto cmd = run_example("intro_cm", Mode::kDensity, kEps, 10000, 1);
  CHECK(md.estimate.value > 1.76);
  CHECK(md.estimate.value < 1.87);
  CHECK(cmd.estimate.value > 168.0);
  CHECK(cmd.estimate.value < 173.0);
  CHECK(std::abs(100.0 * md.estimate.value - cmd.estimate.value) > 5.0);
}

TEST_CASE("unit changes leave weights in step trial for trial", "[corpus]") {
  const auto m = run_example("bmi_m", Mode::kWeighted, kEps, 10000, 1, true);
  const auto cm = run_example("bmi_cm", Mode::kWeighted, kEps, 10000, 1, true);
  REQUIRE(m.weights.size() == cm.weights.size());
  for (std::size_t i = 0; i < m.weights.size(); ++i) {
    REQUIRE(cm.weights[i].order() == m.weights[i].order());
    REQUIRE(std::abs(cm.weights[i].coeff() - m.weights[i].coeff()) <=
            1e-9 * std::abs(m.weights[i].coeff()));
  }
  CHECK(std::abs(cm.estimate.value - m.estimate.value) <=
        1e-6 * std::abs(m.estimate.value));

  const auto db = run_example("type3_db", Mode::kWeighted, kEps, 10000, 1, true);
  const auto en = run_example("type3_energy", Mode::kWeighted, kEps, 10000, 1, true);
  for (std::size_t i = 0; i < db.weights.size(); ++i) {
    REQUIRE(en.weights[i].order() == db.weights[i].order());
    REQUIRE(std::abs(en.weights[i].coeff() - db.weights[i].coeff()) <=
            1e-9 * std::abs(db.weights[i].coeff()));
  }
}

TEST_CASE("duplicate bodies reproduce their originals bit for bit", "[corpus]") {
  const auto a = run_example("intro_m", Mode::kWeighted, kEps, 2000, 17, true);
  const auto b = run_example("example2", Mode::kWeighted, kEps, 2000, 17, true);
  CHECK(a.estimate.value == b.estimate.value);
  CHECK(a.weights == b.weights);
  CHECK(a.values == b.values);

  const auto c = run_example("type3_db", Mode::kWeighted, kEps, 2000, 17);
  const auto d = run_example("example3", Mode::kWeighted, kEps, 2000, 17);
  CHECK(c.estimate.value == d.estimate.value);
}

TEST_CASE("width sensitivity flags mark the branching interval observes", "[corpus]") {
  for (const char* name : {"intro_m", "intro_cm", "bmi_m", "bmi_cm", "example1", "example2"})
    CHECK(find_example(name)->width_sensitive);
  for (const char* name :
       {"two_dice", "dice_coin", "binomial_analogue", "type3_db", "type3_energy", "example3"})
    CHECK_FALSE(find_example(name)->width_sensitive);

  // For a width-insensitive continuous model, density and weighted runs agree
  // to the bit: one observation of the same order in every trial.
  const auto w = run_example("type3_db", Mode::kWeighted, kEps, 5000, 3);
  const auto d = run_example("type3_db", Mode::kDensity, kEps, 5000, 3);
  CHECK(w.estimate.value == d.estimate.value);
}
