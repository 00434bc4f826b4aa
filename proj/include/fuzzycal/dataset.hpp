#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzycal {

/// A labeled matrix of per-class probabilities: M rows, N classes, row-major.
/// Rows are expected to sum to 1 (loaders renormalize within tolerance).
/// `class_names` is optional (empty when unknown); `source` records where the
/// data came from.
struct LabeledProbabilities {
  std::vector<double> probs;  // M * N, row-major
  std::size_t n_classes = 0;
  std::vector<int> labels;  // length M, values in [0, n_classes)
  std::vector<std::string> class_names;
  std::string source;

  std::size_t num_rows() const { return labels.size(); }

  std::span<const double> row(std::size_t m) const {
    return std::span<const double>(probs.data() + m * n_classes, n_classes);
  }

  bool operator==(const LabeledProbabilities& other) const = default;
};

/// Basic shape checks shared by loaders and generators.
inline void validate_shape(const LabeledProbabilities& data) {
  if (data.n_classes < 2) {
    throw std::invalid_argument("dataset needs at least 2 classes");
  }
  if (data.labels.empty()) {
    throw std::invalid_argument("dataset needs at least 1 row");
  }
  if (data.probs.size() != data.labels.size() * data.n_classes) {
    throw std::invalid_argument("probability matrix shape does not match labels");
  }
  for (int label : data.labels) {
    if (label < 0 || static_cast<std::size_t>(label) >= data.n_classes) {
      throw std::invalid_argument("label out of range: " + std::to_string(label));
    }
  }
}

}  // namespace fuzzycal
