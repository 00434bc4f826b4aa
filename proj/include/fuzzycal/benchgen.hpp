#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzycal/dataset.hpp"

namespace fuzzycal {

/// Recipe for a synthetic biased classifier: rows are softmax outputs of
/// noisy logits where the true class gets a fixed margin and each class an
/// additive offset. Positive offsets make a class systematically
/// over-predicted, starving the others; that is the failure mode the
/// corrector targets.
struct BiasSpec {
  std::size_t n_classes = 4;
  std::size_t n_rows = 2000;
  std::vector<double> class_priors;   // empty = uniform
  std::vector<double> bias_offsets;   // empty = all zero
  double concentration = 1.25;        // stddev of per-coordinate logit noise
  std::uint64_t seed = 0;

  /// The spec used throughout the test suite: a 4-class task where class 1
  /// is heavily over-predicted and class 3 heavily under-predicted, leaving
  /// the worst class around 10% raw accuracy.
  static BiasSpec desk_default() {
    BiasSpec spec;
    spec.bias_offsets = {0.0, 2.0, 0.0, -2.0};
    return spec;
  }
};

namespace detail {

// Logit boost the true class receives on every row. Large enough that the
// unbiased generator is clearly better than chance, small enough that the
// offsets above can drown it.
inline constexpr double kTrueClassMargin = 2.0;

inline double unit_double_gen(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Marsaglia polar method over the portable unit draw; pairs are cached, so
// draw counts stay independent of spec parameters.
class GaussianStream {
 public:
  explicit GaussianStream(std::mt19937_64& rng) : rng_(rng) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * unit_double_gen(rng_) - 1.0;
      v = 2.0 * unit_double_gen(rng_) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::mt19937_64& rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace detail

/// Deterministic synthetic dataset for `spec`. Rows come out softmax
/// normalized, so they satisfy dataset invariants without renormalization.
inline LabeledProbabilities generate(const BiasSpec& spec) {
  if (spec.n_classes < 2) {
    throw std::invalid_argument("generator needs at least 2 classes");
  }
  if (spec.n_rows < 1) {
    throw std::invalid_argument("generator needs at least 1 row");
  }
  if (!(spec.concentration > 0.0)) {
    throw std::invalid_argument("concentration must be positive");
  }

  std::vector<double> priors = spec.class_priors;
  if (priors.empty()) {
    priors.assign(spec.n_classes, 1.0 / static_cast<double>(spec.n_classes));
  }
  if (priors.size() != spec.n_classes) {
    throw std::invalid_argument("class_priors length must equal n_classes");
  }
  double prior_sum = 0.0;
  for (double p : priors) {
    if (p < 0.0) {
      throw std::invalid_argument("class_priors must be non-negative");
    }
    prior_sum += p;
  }
  if (std::abs(prior_sum - 1.0) > 1e-6) {
    throw std::invalid_argument("class_priors must sum to 1");
  }
  for (double& p : priors) {
    p /= prior_sum;
  }

  std::vector<double> offsets = spec.bias_offsets;
  if (offsets.empty()) {
    offsets.assign(spec.n_classes, 0.0);
  }
  if (offsets.size() != spec.n_classes) {
    throw std::invalid_argument("bias_offsets length must equal n_classes");
  }

  std::mt19937_64 rng(spec.seed);
  detail::GaussianStream gauss(rng);

  LabeledProbabilities data;
  data.n_classes = spec.n_classes;
  data.labels.reserve(spec.n_rows);
  data.probs.reserve(spec.n_rows * spec.n_classes);
  data.source = "synthetic(seed=" + std::to_string(spec.seed) + ")";

  std::vector<double> logits(spec.n_classes);
  for (std::size_t m = 0; m < spec.n_rows; ++m) {
    // label from the prior CDF
    const double u = detail::unit_double_gen(rng);
    std::size_t label = spec.n_classes - 1;
    double cdf = 0.0;
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      cdf += priors[c];
      if (u < cdf) {
        label = c;
        break;
      }
    }
    data.labels.push_back(static_cast<int>(label));

    // noise draws are independent of the offsets, so two specs differing
    // only in offsets see identical noise at the same seed
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      logits[c] = (c == label ? detail::kTrueClassMargin : 0.0) + offsets[c] +
                  spec.concentration * gauss.next();
      max_logit = std::max(max_logit, logits[c]);
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      logits[c] = std::exp(logits[c] - max_logit);
      denom += logits[c];
    }
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
      data.probs.push_back(logits[c] / denom);
    }
  }
  return data;
}

}  // namespace fuzzycal
