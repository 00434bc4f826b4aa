#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzycal/corrector.hpp"
#include "fuzzycal/dataset.hpp"

namespace fuzzycal {

/// Weights of the scalarized objective. `alpha` scales the pairwise
/// class-accuracy imbalance term, `beta` the below-threshold penalty,
/// `lambda` is the per-class accuracy threshold.
struct ObjectiveConfig {
  double alpha = 1.0;
  double beta = 1.0;
  double lambda = 0.5;

  bool operator==(const ObjectiveConfig&) const = default;
};

/// Accuracy of one class. `accuracy` is absent when no instance of the class
/// exists (support 0); such classes are excluded from the pairwise imbalance
/// mean and from the threshold penalty.
struct ClassAccuracy {
  std::optional<double> accuracy;
  std::size_t support = 0;

  bool operator==(const ClassAccuracy&) const = default;
};

/// All objective components for one (selection, dataset, config) evaluation.
struct EnergyBreakdown {
  double z_acc = 0.0;      // overall accuracy
  double z_cobias = 0.0;   // mean pairwise |Acc_i - Acc_j| over supported classes
  double z_extreme = 0.0;  // sum of per-class shortfalls below lambda
  double energy = 0.0;     // scalarization of the three
  std::vector<ClassAccuracy> per_class;
  ObjectiveConfig objective;

  bool operator==(const EnergyBreakdown&) const = default;
};

/// The single definition of the scalarization:
///   energy = 1 - z_acc + alpha * z_cobias + beta * z_extreme
inline double scalarized_energy(double z_acc, double z_cobias, double z_extreme,
                                const ObjectiveConfig& cfg) {
  return 1.0 - z_acc + cfg.alpha * z_cobias + cfg.beta * z_extreme;
}

inline std::vector<ClassAccuracy> per_class_accuracy(std::span<const int> predictions,
                                                     std::span<const int> labels,
                                                     std::size_t n_classes) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("predictions and labels differ in length");
  }
  if (labels.empty()) {
    throw std::invalid_argument("per_class_accuracy: empty input");
  }
  std::vector<std::size_t> support(n_classes, 0);
  std::vector<std::size_t> correct(n_classes, 0);
  for (std::size_t m = 0; m < labels.size(); ++m) {
    const int y = labels[m];
    const int p = predictions[m];
    if (y < 0 || static_cast<std::size_t>(y) >= n_classes || p < 0 ||
        static_cast<std::size_t>(p) >= n_classes) {
      throw std::invalid_argument("class index out of range at row " + std::to_string(m));
    }
    ++support[y];
    if (p == y) {
      ++correct[y];
    }
  }
  std::vector<ClassAccuracy> out(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    out[c].support = support[c];
    if (support[c] > 0) {
      out[c].accuracy = static_cast<double>(correct[c]) / static_cast<double>(support[c]);
    }
  }
  return out;
}

/// Mean absolute pairwise accuracy difference over supported classes.
/// A single supported class has no pairs and scores 0. Pair order is fixed
/// (i < j, ascending) so the reduction is deterministic.
inline double cobias(std::span<const ClassAccuracy> per_class) {
  std::vector<double> accs;
  for (const auto& c : per_class) {
    if (c.accuracy.has_value()) {
      accs.push_back(*c.accuracy);
    }
  }
  if (accs.empty()) {
    throw std::invalid_argument("cobias: no supported class");
  }
  if (accs.size() == 1) {
    return 0.0;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < accs.size(); ++i) {
    for (std::size_t j = i + 1; j < accs.size(); ++j) {
      sum += accs[i] > accs[j] ? accs[i] - accs[j] : accs[j] - accs[i];
    }
  }
  const double n = static_cast<double>(accs.size());
  return sum / (n * (n - 1.0) / 2.0);
}

inline double overall_accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size()) {
    throw std::invalid_argument("predictions and labels differ in length");
  }
  if (labels.empty()) {
    throw std::invalid_argument("overall_accuracy: empty input");
  }
  std::size_t correct = 0;
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (predictions[m] == labels[m]) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

/// Sum of accuracy shortfalls below `lambda` over supported classes.
inline double extreme_penalty(std::span<const ClassAccuracy> per_class, double lambda) {
  if (!(0.0 <= lambda && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must be in [0,1]");
  }
  double sum = 0.0;
  for (const auto& c : per_class) {
    if (c.accuracy.has_value() && *c.accuracy < lambda) {
      sum += lambda - *c.accuracy;
    }
  }
  return sum;
}

/// Breakdown for a fixed prediction vector. This is the shared reduction for
/// both baseline (raw argmax) and corrected predictions.
inline EnergyBreakdown evaluate_predictions(std::span<const int> predictions,
                                            std::span<const int> labels,
                                            std::size_t n_classes,
                                            const ObjectiveConfig& cfg) {
  EnergyBreakdown out;
  out.objective = cfg;
  out.per_class = per_class_accuracy(predictions, labels, n_classes);
  out.z_acc = overall_accuracy(predictions, labels);
  out.z_cobias = cobias(out.per_class);
  out.z_extreme = extreme_penalty(out.per_class, cfg.lambda);
  out.energy = scalarized_energy(out.z_acc, out.z_cobias, out.z_extreme, cfg);
  return out;
}

/// Full objective of a selection on a dataset: corrects every row, takes the
/// corrected predictions, and reduces them to the scalarized energy.
inline EnergyBreakdown energy(const Selection& selection, const LabeledProbabilities& data,
                              const ObjectiveConfig& cfg) {
  if (selection.functions.size() != data.n_classes) {
    throw std::invalid_argument("selection size does not match dataset class count");
  }
  const CorrectionResult corrected = correct_dataset(data, selection);
  return evaluate_predictions(corrected.predictions, data.labels, data.n_classes, cfg);
}

}  // namespace fuzzycal
