#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "fuzzycal/metrics.hpp"
#include "fuzzycal/solver.hpp"

using namespace fuzzycal;

namespace {

std::vector<ClassAccuracy> accs(std::initializer_list<double> values) {
  std::vector<ClassAccuracy> out;
  for (double v : values) {
    out.push_back({v, 1});
  }
  return out;
}

// Ten copies of the row (0.6, 0.4), all labeled class 1.
LabeledProbabilities skewed_two_class() {
  LabeledProbabilities data;
  data.n_classes = 2;
  for (int i = 0; i < 10; ++i) {
    data.probs.push_back(0.6);
    data.probs.push_back(0.4);
    data.labels.push_back(1);
  }
  return data;
}

}  // namespace

TEST_CASE("per_class_accuracy counts hits per label") {
  const std::vector<int> preds{0, 1, 1, 1};
  const std::vector<int> labels{0, 0, 1, 1};
  const auto pc = per_class_accuracy(preds, labels, 2);
  REQUIRE(pc.size() == 2);
  CHECK(pc[0].accuracy == 0.5);
  CHECK(pc[0].support == 2);
  CHECK(pc[1].accuracy == 1.0);
  CHECK(pc[1].support == 2);
}

TEST_CASE("per_class_accuracy marks unsupported classes absent") {
  const std::vector<int> labels{0, 0, 0};
  const auto pc = per_class_accuracy(labels, labels, 2);
  CHECK(pc[0].accuracy == 1.0);
  CHECK_FALSE(pc[1].accuracy.has_value());
  CHECK(pc[1].support == 0);
}

TEST_CASE("per_class_accuracy input validation") {
  const std::vector<int> a{0, 1};
  const std::vector<int> b{0};
  CHECK_THROWS_AS(per_class_accuracy(a, b, 2), std::invalid_argument);
  const std::vector<int> bad{0, 5};
  CHECK_THROWS_AS(per_class_accuracy(a, bad, 2), std::invalid_argument);
}

TEST_CASE("cobias on pinned examples") {
  CHECK(cobias(accs({1.0, 0.5})) == 0.5);
  CHECK(cobias(accs({0.7, 0.7, 0.7})) == 0.0);
  // four skewed letter-option class accuracies; 6 pairs summing to 2.74
  CHECK(std::abs(cobias(accs({0.40, 0.99, 0.12, 0.27})) - 2.74 / 6.0) < 1e-15);
}

TEST_CASE("cobias edge cases") {
  CHECK(cobias(accs({0.3})) == 0.0);
  std::vector<ClassAccuracy> unsupported(2);
  CHECK_THROWS_AS(cobias(unsupported), std::invalid_argument);
  std::vector<ClassAccuracy> one_supported{{0.4, 10}, {std::nullopt, 0}};
  CHECK(cobias(one_supported) == 0.0);
}

TEST_CASE("cobias is permutation invariant and bounded") {
  std::mt19937_64 rng(7);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> values(2 + rng() % 8);
    for (auto& v : values) {
      v = unit();
    }
    std::vector<ClassAccuracy> pc;
    for (double v : values) {
      pc.push_back({v, 1});
    }
    const double base = cobias(pc);
    REQUIRE(base >= 0.0);
    REQUIRE(base <= 1.0);

    std::shuffle(pc.begin(), pc.end(), rng);
    REQUIRE(std::abs(cobias(pc) - base) < 1e-12);

    const bool all_equal = std::all_of(values.begin(), values.end(),
                                       [&](double v) { return v == values[0]; });
    REQUIRE((base == 0.0) == all_equal);
  }
}

TEST_CASE("overall_accuracy") {
  const std::vector<int> preds{0, 1};
  const std::vector<int> labels{0, 0};
  CHECK(overall_accuracy(preds, labels) == 0.5);
  CHECK(overall_accuracy(labels, labels) == 1.0);
  const std::vector<int> disjoint{1, 1};
  CHECK(overall_accuracy(disjoint, labels) == 0.0);
  const std::vector<int> shorter{0};
  CHECK_THROWS_AS(overall_accuracy(shorter, labels), std::invalid_argument);
}

TEST_CASE("extreme_penalty sums shortfalls below the threshold") {
  CHECK(extreme_penalty(accs({0.9, 0.1}), 0.5) == 0.4);
  CHECK(extreme_penalty(accs({0.6, 0.9}), 0.5) == 0.0);
  CHECK(extreme_penalty(accs({0.0, 0.0}), 0.5) == 1.0);
  CHECK_THROWS_AS(extreme_penalty(accs({0.5}), 1.5), std::invalid_argument);
  // unsupported classes contribute nothing
  std::vector<ClassAccuracy> pc{{0.9, 5}, {std::nullopt, 0}};
  CHECK(extreme_penalty(pc, 0.5) == 0.0);
}

TEST_CASE("energy of the identity selection equals the raw baseline") {
  const LabeledProbabilities data = skewed_two_class();
  const ObjectiveConfig cfg{1.0, 0.5, 0.5};
  const EnergyBreakdown ident = energy(Selection::identity(2), data, cfg);

  const std::vector<int> raw = raw_predictions(data);
  const EnergyBreakdown base = evaluate_predictions(raw, data.labels, 2, cfg);
  CHECK(ident == base);
  CHECK(ident.energy == 1.0);  // every row predicted class 0, all labels 1
  CHECK(ident.z_acc == 0.0);
}

TEST_CASE("energy of a corrective selection on the skewed dataset") {
  const LabeledProbabilities data = skewed_two_class();
  ObjectiveConfig cfg;
  cfg.alpha = 1.0;
  cfg.beta = 0.0;

  // f1 zeroes the over-predicted class 0 (0.6 is outside its support);
  // class 1 keeps 0.4 via identity, so every row flips to class 1
  Selection sel;
  sel.functions = {1, 19};
  const EnergyBreakdown b = energy(sel, data, cfg);
  CHECK(b.z_acc == 1.0);
  CHECK(b.z_cobias == 0.0);  // class 0 has no support
  CHECK(b.energy == 0.0);
}

TEST_CASE("energy validates dimensions") {
  const LabeledProbabilities data = skewed_two_class();
  CHECK_THROWS_AS(energy(Selection::identity(3), data, ObjectiveConfig{}),
                  std::invalid_argument);
}

TEST_CASE("scalarization is strictly decreasing in accuracy") {
  const ObjectiveConfig cfg{2.0, 3.0, 0.5};
  const double lo = scalarized_energy(0.4, 0.2, 0.1, cfg);
  const double hi = scalarized_energy(0.5, 0.2, 0.1, cfg);
  CHECK(hi < lo);
  CHECK(std::abs(scalarized_energy(0.5, 0.2, 0.1, cfg) - (1.0 - 0.5 + 2.0 * 0.2 + 3.0 * 0.1)) <
        1e-15);
}

TEST_CASE("with alpha=beta=0 the energy minimizer maximizes accuracy") {
  LabeledProbabilities data;
  data.n_classes = 2;
  std::mt19937_64 rng(21);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  for (int i = 0; i < 40; ++i) {
    const double p = unit();
    data.probs.push_back(p);
    data.probs.push_back(1.0 - p);
    data.labels.push_back(static_cast<int>(rng() % 2));
  }

  SolverConfig cfg;
  cfg.objective = {0.0, 0.0, 0.5};
  cfg.allowed = {1, 3, 18, 19};
  const ExhaustiveResult best = exhaustive_search(data, cfg);

  // enumerate accuracies by hand and compare against the oracle's pick
  double best_acc = 0.0;
  for (int f0 : cfg.allowed) {
    for (int f1 : cfg.allowed) {
      Selection s;
      s.functions = {f0, f1};
      best_acc = std::max(best_acc, energy(s, data, cfg.objective).z_acc);
    }
  }
  CHECK(best.breakdown.z_acc == best_acc);
  CHECK(best.breakdown.energy == 1.0 - best_acc);
}

TEST_CASE("energy is a pure function") {
  const LabeledProbabilities data = skewed_two_class();
  Selection sel;
  sel.functions = {18, 11};
  const ObjectiveConfig cfg{1.3, 0.7, 0.45};
  const EnergyBreakdown a = energy(sel, data, cfg);
  const EnergyBreakdown b = energy(sel, data, cfg);
  CHECK(a == b);
  CHECK(a.energy ==
        scalarized_energy(a.z_acc, a.z_cobias, a.z_extreme, cfg));
}

TEST_CASE("metrics agree with brute-force recomputation") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n_classes = 2 + rng() % 7;
    const std::size_t m = 1 + rng() % 120;
    std::vector<int> preds(m), labels(m);
    for (std::size_t i = 0; i < m; ++i) {
      preds[i] = static_cast<int>(rng() % n_classes);
      // leave some classes without support
      labels[i] = static_cast<int>(rng() % std::max<std::size_t>(1, n_classes - 1));
    }

    const auto pc = per_class_accuracy(preds, labels, n_classes);

    // explicit double loops, no shared code with the library reductions
    for (std::size_t c = 0; c < n_classes; ++c) {
      std::size_t support = 0, correct = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (labels[i] == static_cast<int>(c)) {
          ++support;
          if (preds[i] == static_cast<int>(c)) {
            ++correct;
          }
        }
      }
      REQUIRE(pc[c].support == support);
      if (support == 0) {
        REQUIRE_FALSE(pc[c].accuracy.has_value());
      } else {
        REQUIRE(std::abs(*pc[c].accuracy - static_cast<double>(correct) / support) < 1e-12);
      }
    }

    std::vector<double> supported;
    for (const auto& c : pc) {
      if (c.accuracy.has_value()) {
        supported.push_back(*c.accuracy);
      }
    }
    double pair_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < supported.size(); ++i) {
      for (std::size_t j = i + 1; j < supported.size(); ++j) {
        pair_sum += std::abs(supported[i] - supported[j]);
        ++pairs;
      }
    }
    const double expected_cobias = pairs == 0 ? 0.0 : pair_sum / static_cast<double>(pairs);
    REQUIRE(std::abs(cobias(pc) - expected_cobias) < 1e-12);

    const double lambda = 0.5;
    double expected_extreme = 0.0;
    for (double accv : supported) {
      expected_extreme += std::max(0.0, lambda - accv);
    }
    REQUIRE(std::abs(extreme_penalty(pc, lambda) - expected_extreme) < 1e-12);
  }
}
