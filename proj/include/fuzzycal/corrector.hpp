#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzycal/dataset.hpp"
#include "fuzzycal/membership.hpp"

namespace fuzzycal {

/// Solver settings that produced a selection; kept alongside it so a saved
/// selection can be reproduced and re-evaluated under the same objective.
struct SelectionProvenance {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  std::vector<int> allowed;  // candidate function ids the solver drew from

  bool operator==(const SelectionProvenance&) const = default;
};

/// One membership-function id per class. Applying a selection to a
/// probability row transforms each coordinate through its class's function.
struct Selection {
  std::vector<int> functions;  // length N, ids in 1..19
  std::optional<SelectionProvenance> provenance;

  std::size_t num_classes() const { return functions.size(); }

  static Selection identity(std::size_t n_classes) {
    Selection s;
    s.functions.assign(n_classes, kIdentityFunctionId);
    return s;
  }

  bool operator==(const Selection&) const = default;
};

inline void validate_selection(const Selection& selection) {
  if (selection.functions.size() < 2) {
    throw std::invalid_argument("selection needs at least 2 classes");
  }
  for (int id : selection.functions) {
    if (id < 1 || id > kNumMembershipFunctions) {
      throw std::invalid_argument("selection contains invalid function id: " +
                                  std::to_string(id));
    }
  }
}

struct CorrectedRow {
  std::vector<double> corrected;
  bool fallback_applied = false;
  int prediction = 0;
};

/// Argmax with ties resolved to the lowest index.
inline int argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) {
      best = i;
    }
  }
  return static_cast<int>(best);
}

/// Transforms one probability row through the selection.
///
/// Every coordinate is mapped through its class's function first; if the
/// transformed row is exactly all-zero, the original row is restored and the
/// fallback flag set. The zero test is exact on purpose: membership values
/// are exactly 0 outside their support, and an epsilon would silently rewrite
/// small but valid corrections. Corrected values are not renormalized.
inline CorrectedRow correct_row(std::span<const double> probs, const Selection& selection) {
  if (probs.size() != selection.functions.size()) {
    throw std::invalid_argument("row width does not match selection size");
  }
  CorrectedRow out;
  out.corrected.resize(probs.size());

  bool input_all_zero = true;
  bool output_all_zero = true;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double v = evaluate(describe(selection.functions[i]), probs[i]);
    out.corrected[i] = v;
    input_all_zero = input_all_zero && probs[i] == 0.0;
    output_all_zero = output_all_zero && v == 0.0;
  }

  if (input_all_zero || output_all_zero) {
    out.fallback_applied = true;
    std::copy(probs.begin(), probs.end(), out.corrected.begin());
  }
  out.prediction = argmax_lowest(out.corrected);
  return out;
}

struct CorrectionResult {
  std::vector<double> corrected;  // M * N, row-major
  std::vector<int> predictions;   // length M
  std::vector<std::uint8_t> fallback_rows;
  std::size_t fallback_count = 0;
};

/// Row-wise correct_row over a whole dataset; row order preserved.
inline CorrectionResult correct_dataset(const LabeledProbabilities& data,
                                        const Selection& selection) {
  if (data.n_classes != selection.functions.size()) {
    throw std::invalid_argument("dataset class count does not match selection size");
  }
  validate_shape(data);
  CorrectionResult out;
  out.corrected.reserve(data.probs.size());
  out.predictions.reserve(data.num_rows());
  out.fallback_rows.reserve(data.num_rows());
  for (std::size_t m = 0; m < data.num_rows(); ++m) {
    CorrectedRow row = correct_row(data.row(m), selection);
    out.corrected.insert(out.corrected.end(), row.corrected.begin(), row.corrected.end());
    out.predictions.push_back(row.prediction);
    out.fallback_rows.push_back(row.fallback_applied ? 1 : 0);
    if (row.fallback_applied) {
      ++out.fallback_count;
    }
  }
  return out;
}

/// Argmax predictions of the uncorrected rows, with the same tie rule the
/// corrector uses.
inline std::vector<int> raw_predictions(const LabeledProbabilities& data) {
  validate_shape(data);
  std::vector<int> preds;
  preds.reserve(data.num_rows());
  for (std::size_t m = 0; m < data.num_rows(); ++m) {
    preds.push_back(argmax_lowest(data.row(m)));
  }
  return preds;
}

}  // namespace fuzzycal
