#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fuzzycal/benchgen.hpp"
#include "fuzzycal/corrector.hpp"

using namespace fuzzycal;

namespace {

Selection make_selection(std::vector<int> ids) {
  Selection s;
  s.functions = std::move(ids);
  return s;
}

}  // namespace

TEST_CASE("news-style row flips to the underpredicted class") {
  // 4-class row predicted as class 0; the per-class functions zero out
  // everything except class 2, which rises to 0.44.
  const std::vector<double> probs{0.42, 0.01, 0.32, 0.25};
  const Selection sel = make_selection({7, 16, 11, 7});
  const CorrectedRow row = correct_row(probs, sel);

  CHECK(row.corrected[0] == 0.0);
  CHECK(row.corrected[1] == 0.0);
  CHECK(row.corrected[3] == 0.0);
  CHECK(row.corrected[2] > 0.0);
  CHECK(std::abs(row.corrected[2] - 0.44) < 1e-12);
  CHECK_FALSE(row.fallback_applied);
  CHECK(row.prediction == 2);
  CHECK(argmax_lowest(probs) == 0);
}

TEST_CASE("all-zero transform falls back to the original row") {
  const std::vector<double> probs{0.9, 0.1};
  const CorrectedRow row = correct_row(probs, make_selection({1, 3}));
  CHECK(row.fallback_applied);
  CHECK(row.corrected == probs);
  CHECK(row.prediction == 0);
}

TEST_CASE("identity selection returns the row unchanged") {
  const std::vector<double> probs{0.25, 0.25, 0.5};
  const CorrectedRow row = correct_row(probs, Selection::identity(3));
  CHECK(row.corrected == probs);
  CHECK_FALSE(row.fallback_applied);
  CHECK(row.prediction == 2);
}

TEST_CASE("all-zero input row is returned unchanged and flagged") {
  const std::vector<double> probs{0.0, 0.0, 0.0};
  const CorrectedRow row = correct_row(probs, make_selection({1, 1, 1}));
  CHECK(row.fallback_applied);
  CHECK(row.corrected == probs);
  CHECK(row.prediction == 0);
}

TEST_CASE("argmax ties resolve to the lowest class index") {
  const std::vector<double> probs{0.3, 0.4, 0.3};
  // f18 maps 0.3 -> 0.7 in coordinates 0 and 2; both tie above coordinate 1
  const CorrectedRow row = correct_row(probs, make_selection({18, 19, 18}));
  CHECK(row.corrected[0] == row.corrected[2]);
  CHECK(row.prediction == 0);
}

TEST_CASE("length mismatch is rejected") {
  const std::vector<double> probs{0.5, 0.5};
  CHECK_THROWS_AS(correct_row(probs, make_selection({19, 19, 19})), std::invalid_argument);
}

TEST_CASE("correct_dataset preserves row order and counts fallbacks") {
  LabeledProbabilities data;
  data.n_classes = 2;
  data.probs = {0.9, 0.1, 0.2, 0.8, 0.6, 0.4};
  data.labels = {0, 1, 0};

  SECTION("identity matches raw argmax") {
    const CorrectionResult res = correct_dataset(data, Selection::identity(2));
    CHECK(res.predictions == raw_predictions(data));
    CHECK(res.fallback_count == 0);
    CHECK(res.corrected == data.probs);
  }

  SECTION("selection outside every row's support falls back everywhere") {
    // f1 dies above 0.5, f3 below 0.5: rows (0.9,.1),(0.6,.4) zero out; the
    // middle row (0.2,0.8) keeps f3(0.8)=0.6
    const CorrectionResult res = correct_dataset(data, make_selection({1, 3}));
    CHECK(res.fallback_count == 2);
    CHECK(res.fallback_rows == std::vector<std::uint8_t>{1, 0, 1});
  }

  SECTION("dimension mismatch rejected") {
    CHECK_THROWS_AS(correct_dataset(data, Selection::identity(3)), std::invalid_argument);
  }
}

TEST_CASE("fallback soundness and locality over random rows") {
  std::mt19937_64 rng(99);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    std::vector<double> probs(n);
    double sum = 0.0;
    for (auto& p : probs) {
      p = unit();
      sum += p;
    }
    for (auto& p : probs) {
      p /= sum;
    }
    Selection sel;
    for (std::size_t i = 0; i < n; ++i) {
      sel.functions.push_back(1 + static_cast<int>(rng() % 19));
    }

    const CorrectedRow row = correct_row(probs, sel);
    double corrected_sum = 0.0;
    for (double v : row.corrected) {
      corrected_sum += v;
    }
    REQUIRE(corrected_sum > 0.0);  // input rows are normalized, never all-zero
    if (row.fallback_applied) {
      REQUIRE(row.corrected == probs);
    }

    // locality: changing one class's function moves only that coordinate of
    // the pre-fallback transform
    const std::size_t j = rng() % n;
    Selection perturbed = sel;
    perturbed.functions[j] = perturbed.functions[j] == 19 ? 18 : 19;
    const CorrectedRow a = correct_row(probs, sel);
    const CorrectedRow b = correct_row(probs, perturbed);
    if (!a.fallback_applied && !b.fallback_applied) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i != j) {
          REQUIRE(a.corrected[i] == b.corrected[i]);
        }
      }
    }
  }
}
