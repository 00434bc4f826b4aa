#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fuzzycal/corrector.hpp"
#include "fuzzycal/dataset.hpp"
#include "fuzzycal/errors.hpp"
#include "fuzzycal/membership.hpp"
#include "fuzzycal/metrics.hpp"

namespace fuzzycal {

enum class CoolingSchedule { Geometric };

/// Annealing settings. `steps` defaults to 20000 per class when unset.
/// Restart chains use seeds seed, seed+1, ... and the best chain wins,
/// ties to the lowest chain index.
struct SolverConfig {
  ObjectiveConfig objective;
  std::vector<int> allowed = all_function_ids();
  std::optional<std::size_t> steps;
  double t_initial = 0.2;
  double t_final = 1e-3;
  CoolingSchedule cooling = CoolingSchedule::Geometric;
  int restarts = 3;
  std::uint64_t seed = 0;
  std::size_t exhaustive_cap = 1'000'000;

  std::size_t resolved_steps(std::size_t n_classes) const {
    return steps.has_value() ? *steps : 20000 * n_classes;
  }
};

struct TraceStep {
  std::size_t step = 0;
  double temperature = 0.0;
  double proposed_energy = 0.0;
  bool accepted = false;
  double best_energy = 0.0;

  bool operator==(const TraceStep&) const = default;
};

struct SolveTrace {
  std::vector<TraceStep> steps;

  bool operator==(const SolveTrace&) const = default;
};

struct SolveResult {
  Selection selection;
  EnergyBreakdown breakdown;
  SolveTrace trace;        // trace of the winning chain
  std::size_t chain_index = 0;
};

struct ExhaustiveResult {
  Selection selection;
  EnergyBreakdown breakdown;
  std::size_t states_visited = 0;
};

namespace detail {

// Draw helpers are hand-rolled so seeded runs reproduce bit-identically
// across standard libraries; std::uniform_int_distribution is
// implementation-defined.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) {
    return 0;
  }
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % n;
  std::uint64_t x = rng();
  while (x >= limit) {
    x = rng();
  }
  return x % n;
}

inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// One coordinate move: (class index, replacement id != current id).
// Exactly two rng draws.
inline std::pair<std::size_t, int> draw_move(std::span<const int> current,
                                             std::span<const int> allowed,
                                             std::mt19937_64& rng) {
  const std::size_t j = static_cast<std::size_t>(uniform_below(rng, current.size()));
  int candidates[kNumMembershipFunctions];
  std::size_t n_candidates = 0;
  for (int id : allowed) {
    if (id != current[j]) {
      candidates[n_candidates++] = id;
    }
  }
  const int k = candidates[uniform_below(rng, n_candidates)];
  return {j, k};
}

/// Incremental objective evaluation for one-coordinate moves.
///
/// Corrected columns are cached per (class, function id); a proposal swaps a
/// single column and repairs each row's argmax and nonzero count instead of
/// re-evaluating membership functions for the whole matrix. All counters are
/// integers, so cached energies are bit-identical to a full recomputation
/// through metrics.
class EnergyCache {
 public:
  EnergyCache(const LabeledProbabilities& data, ObjectiveConfig cfg, const Selection& initial)
      : data_(data),
        cfg_(cfg),
        n_(data.n_classes),
        m_(data.num_rows()),
        columns_(data.n_classes * kNumMembershipFunctions),
        active_ids_(initial.functions),
        active_col_(data.n_classes, nullptr),
        cur_best_idx_(m_),
        cur_best_val_(m_),
        cur_nonzero_(m_),
        prop_best_idx_(m_),
        prop_best_val_(m_),
        prop_nonzero_(m_),
        raw_argmax_(m_),
        support_(n_, 0),
        cur_correct_(n_, 0),
        prop_correct_(n_, 0) {
    if (initial.functions.size() != n_) {
      throw std::invalid_argument("initial selection does not match class count");
    }
    for (std::size_t m = 0; m < m_; ++m) {
      raw_argmax_[m] = argmax_lowest(data_.row(m));
      ++support_[static_cast<std::size_t>(data_.labels[m])];
    }
    for (std::size_t i = 0; i < n_; ++i) {
      active_col_[i] = column(i, active_ids_[i]);
    }
    rebuild();
    cur_energy_ = energy_from_counts(cur_correct_, cur_total_correct_);
  }

  double current_energy() const { return cur_energy_; }

  const std::vector<int>& selection_ids() const { return active_ids_; }

  /// Energy if class `cls` switched to function `fn_id`. Leaves the current
  /// state untouched until commit().
  double propose(std::size_t cls, int fn_id) {
    const double* q = column(cls, fn_id);
    const double* old_col = active_col_[cls];
    prop_correct_ = cur_correct_;
    prop_total_correct_ = cur_total_correct_;

    for (std::size_t m = 0; m < m_; ++m) {
      const double v_old = old_col[m];
      const double v_new = q[m];
      const int cnt = cur_nonzero_[m] + (v_new != 0.0 ? 1 : 0) - (v_old != 0.0 ? 1 : 0);

      int bi;
      double bv;
      if (cnt == 0) {
        bi = 0;
        bv = 0.0;
      } else if (cur_nonzero_[m] == 0) {
        rescan_row(m, cls, q, bi, bv);
      } else {
        bi = cur_best_idx_[m];
        bv = cur_best_val_[m];
        if (static_cast<std::size_t>(bi) == cls) {
          if (v_new >= bv) {
            bv = v_new;
          } else {
            rescan_row(m, cls, q, bi, bv);
          }
        } else if (v_new > bv || (v_new == bv && cls < static_cast<std::size_t>(bi))) {
          bi = static_cast<int>(cls);
          bv = v_new;
        }
      }
      prop_best_idx_[m] = bi;
      prop_best_val_[m] = bv;
      prop_nonzero_[m] = cnt;

      const int pred_old = cur_nonzero_[m] > 0 ? cur_best_idx_[m] : raw_argmax_[m];
      const int pred_new = cnt > 0 ? bi : raw_argmax_[m];
      if (pred_new != pred_old) {
        const int y = data_.labels[m];
        if (pred_old == y) {
          --prop_correct_[static_cast<std::size_t>(y)];
          --prop_total_correct_;
        }
        if (pred_new == y) {
          ++prop_correct_[static_cast<std::size_t>(y)];
          ++prop_total_correct_;
        }
      }
    }
    pending_cls_ = cls;
    pending_id_ = fn_id;
    has_pending_ = true;
    prop_energy_ = energy_from_counts(prop_correct_, prop_total_correct_);
    return prop_energy_;
  }

  /// Adopts the last proposal as the current state.
  void commit() {
    if (!has_pending_) {
      throw std::logic_error("EnergyCache::commit without pending proposal");
    }
    active_ids_[pending_cls_] = pending_id_;
    active_col_[pending_cls_] = column(pending_cls_, pending_id_);
    std::swap(cur_best_idx_, prop_best_idx_);
    std::swap(cur_best_val_, prop_best_val_);
    std::swap(cur_nonzero_, prop_nonzero_);
    std::swap(cur_correct_, prop_correct_);
    cur_total_correct_ = prop_total_correct_;
    cur_energy_ = prop_energy_;
    has_pending_ = false;
  }

  EnergyBreakdown current_breakdown() const {
    EnergyBreakdown out;
    out.objective = cfg_;
    out.per_class = class_accuracies(cur_correct_);
    out.z_acc =
        static_cast<double>(cur_total_correct_) / static_cast<double>(m_);
    out.z_cobias = cobias(out.per_class);
    out.z_extreme = extreme_penalty(out.per_class, cfg_.lambda);
    out.energy = scalarized_energy(out.z_acc, out.z_cobias, out.z_extreme, cfg_);
    return out;
  }

 private:
  const double* column(std::size_t cls, int fn_id) {
    auto& col = columns_[cls * kNumMembershipFunctions + static_cast<std::size_t>(fn_id - 1)];
    if (col.empty()) {
      const MembershipFunction& fn = describe(fn_id);
      col.resize(m_);
      for (std::size_t m = 0; m < m_; ++m) {
        col[m] = evaluate(fn, data_.probs[m * n_ + cls]);
      }
    }
    return col.data();
  }

  void rescan_row(std::size_t m, std::size_t swapped_cls, const double* q, int& bi,
                  double& bv) const {
    bi = 0;
    bv = swapped_cls == 0 ? q[m] : active_col_[0][m];
    for (std::size_t i = 1; i < n_; ++i) {
      const double v = i == swapped_cls ? q[m] : active_col_[i][m];
      if (v > bv) {
        bv = v;
        bi = static_cast<int>(i);
      }
    }
  }

  void rebuild() {
    cur_total_correct_ = 0;
    std::fill(cur_correct_.begin(), cur_correct_.end(), std::size_t{0});
    for (std::size_t m = 0; m < m_; ++m) {
      int bi = 0;
      double bv = active_col_[0][m];
      int cnt = bv != 0.0 ? 1 : 0;
      for (std::size_t i = 1; i < n_; ++i) {
        const double v = active_col_[i][m];
        if (v != 0.0) {
          ++cnt;
        }
        if (v > bv) {
          bv = v;
          bi = static_cast<int>(i);
        }
      }
      cur_best_idx_[m] = bi;
      cur_best_val_[m] = bv;
      cur_nonzero_[m] = cnt;
      const int pred = cnt > 0 ? bi : raw_argmax_[m];
      const int y = data_.labels[m];
      if (pred == y) {
        ++cur_correct_[static_cast<std::size_t>(y)];
        ++cur_total_correct_;
      }
    }
  }

  std::vector<ClassAccuracy> class_accuracies(const std::vector<std::size_t>& correct) const {
    std::vector<ClassAccuracy> per_class(n_);
    for (std::size_t c = 0; c < n_; ++c) {
      per_class[c].support = support_[c];
      if (support_[c] > 0) {
        per_class[c].accuracy =
            static_cast<double>(correct[c]) / static_cast<double>(support_[c]);
      }
    }
    return per_class;
  }

  double energy_from_counts(const std::vector<std::size_t>& correct,
                            std::size_t total_correct) const {
    const std::vector<ClassAccuracy> per_class = class_accuracies(correct);
    const double z_acc = static_cast<double>(total_correct) / static_cast<double>(m_);
    return scalarized_energy(z_acc, cobias(per_class), extreme_penalty(per_class, cfg_.lambda),
                             cfg_);
  }

  const LabeledProbabilities& data_;
  ObjectiveConfig cfg_;
  std::size_t n_;
  std::size_t m_;

  std::vector<std::vector<double>> columns_;  // lazily filled per (class, id)
  std::vector<int> active_ids_;
  std::vector<const double*> active_col_;

  std::vector<int> cur_best_idx_;
  std::vector<double> cur_best_val_;
  std::vector<int> cur_nonzero_;
  std::vector<int> prop_best_idx_;
  std::vector<double> prop_best_val_;
  std::vector<int> prop_nonzero_;
  std::vector<int> raw_argmax_;

  std::vector<std::size_t> support_;
  std::vector<std::size_t> cur_correct_;
  std::vector<std::size_t> prop_correct_;
  std::size_t cur_total_correct_ = 0;
  std::size_t prop_total_correct_ = 0;

  double cur_energy_ = 0.0;
  double prop_energy_ = 0.0;
  std::size_t pending_cls_ = 0;
  int pending_id_ = 0;
  bool has_pending_ = false;
};

inline void validate_allowed(std::span<const int> allowed) {
  if (allowed.empty()) {
    throw std::invalid_argument("allowed function set is empty");
  }
  bool seen[kNumMembershipFunctions] = {};
  for (int id : allowed) {
    if (id < 1 || id > kNumMembershipFunctions) {
      throw std::invalid_argument("allowed set contains invalid id: " + std::to_string(id));
    }
    if (seen[id - 1]) {
      throw std::invalid_argument("allowed set contains duplicate id: " + std::to_string(id));
    }
    seen[id - 1] = true;
  }
}

inline void validate_solver_config(const SolverConfig& cfg, std::size_t n_classes) {
  validate_allowed(cfg.allowed);
  if (!(cfg.t_initial > 0.0) || !(cfg.t_final > 0.0)) {
    throw std::invalid_argument("temperatures must be positive");
  }
  if (!(cfg.t_final < cfg.t_initial)) {
    throw std::invalid_argument("t_final must be below t_initial");
  }
  if (cfg.restarts < 1) {
    throw std::invalid_argument("restarts must be at least 1");
  }
  if (cfg.resolved_steps(n_classes) < 1) {
    throw std::invalid_argument("steps must be at least 1");
  }
}

}  // namespace detail

/// Uniformly picks one class and replaces its function with a uniformly
/// chosen different id from `allowed`. Exactly one coordinate changes.
/// Requires at least two allowed ids, otherwise no move exists.
inline Selection propose_neighbor(const Selection& selection, std::span<const int> allowed,
                                  std::mt19937_64& rng) {
  detail::validate_allowed(allowed);
  if (allowed.size() < 2) {
    throw std::invalid_argument("neighbor proposal needs at least 2 allowed ids");
  }
  if (selection.functions.empty()) {
    throw std::invalid_argument("selection is empty");
  }
  auto [j, k] = detail::draw_move(selection.functions, allowed, rng);
  Selection out = selection;
  out.functions[j] = k;
  return out;
}

/// Simulated annealing over selections, starting from the all-identity
/// selection so the initial energy is the uncorrected baseline.
///
/// Each step draws, in fixed order, a coordinate, a replacement id, and an
/// acceptance uniform; a worse move is accepted with probability
/// exp(-delta/T) under a geometric temperature schedule. The best state seen
/// is returned, never the final one, so the result can only improve on the
/// baseline. Deterministic given the config, seed included.
inline SolveResult simulated_annealing(const LabeledProbabilities& data,
                                       const SolverConfig& cfg) {
  validate_shape(data);
  detail::validate_solver_config(cfg, data.n_classes);

  const std::size_t n = data.n_classes;
  const std::size_t steps = cfg.resolved_steps(n);
  const double ratio = std::pow(cfg.t_final / cfg.t_initial, 1.0 / static_cast<double>(steps));

  struct ChainOutcome {
    Selection best;
    double best_energy;
    SolveTrace trace;
  };
  std::vector<ChainOutcome> chains;
  chains.reserve(static_cast<std::size_t>(cfg.restarts));

  for (int chain = 0; chain < cfg.restarts; ++chain) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(chain));
    Selection cur = Selection::identity(n);
    detail::EnergyCache cache(data, cfg.objective, cur);
    double cur_energy = cache.current_energy();
    Selection best = cur;
    double best_energy = cur_energy;
    SolveTrace trace;

    // With fewer than two allowed ids no neighbor exists; the chain stays at
    // the baseline state.
    if (cfg.allowed.size() >= 2) {
      trace.steps.reserve(steps);
      double temperature = cfg.t_initial;
      for (std::size_t t = 0; t < steps; ++t) {
        const auto [j, k] = detail::draw_move(cur.functions, cfg.allowed, rng);
        const double u = detail::unit_double(rng);
        const double proposed = cache.propose(j, k);
        const double delta = proposed - cur_energy;
        const bool accepted = delta < 0.0 || u < std::exp(-delta / temperature);
        if (accepted) {
          cache.commit();
          cur.functions[j] = k;
          cur_energy = proposed;
          if (cur_energy < best_energy) {
            best_energy = cur_energy;
            best = cur;
          }
        }
        trace.steps.push_back({t, temperature, proposed, accepted, best_energy});
        temperature *= ratio;
      }
    }
    chains.push_back({std::move(best), best_energy, std::move(trace)});
  }

  std::size_t winner = 0;
  for (std::size_t c = 1; c < chains.size(); ++c) {
    if (chains[c].best_energy < chains[winner].best_energy) {
      winner = c;
    }
  }

  SolveResult result;
  result.selection = std::move(chains[winner].best);
  result.selection.provenance = SelectionProvenance{
      cfg.objective.alpha, cfg.objective.beta, cfg.objective.lambda, cfg.seed, cfg.allowed};
  result.breakdown = energy(result.selection, data, cfg.objective);
  result.trace = std::move(chains[winner].trace);
  result.chain_index = winner;
  return result;
}

/// Enumerates every selection over the allowed set in lexicographic order and
/// returns the first one attaining the minimum energy. Used as an oracle for
/// the annealer on small instances; evaluation goes through the plain
/// metrics path, not the solver's cache. Refuses state spaces above the cap.
inline ExhaustiveResult exhaustive_search(const LabeledProbabilities& data,
                                          const SolverConfig& cfg) {
  validate_shape(data);
  detail::validate_allowed(cfg.allowed);

  const std::size_t n = data.n_classes;
  const std::size_t k = cfg.allowed.size();
  double size = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    size *= static_cast<double>(k);
  }
  if (size > static_cast<double>(cfg.exhaustive_cap)) {
    throw SolverRefusal("exhaustive search refused: " + std::to_string(size) + " states exceed cap of " +
                            std::to_string(cfg.exhaustive_cap),
                        size);
  }

  std::vector<std::size_t> odometer(n, 0);
  Selection candidate;
  candidate.functions.resize(n);

  std::optional<ExhaustiveResult> best;
  std::size_t visited = 0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      candidate.functions[i] = cfg.allowed[odometer[i]];
    }
    EnergyBreakdown breakdown = energy(candidate, data, cfg.objective);
    ++visited;
    if (!best.has_value() || breakdown.energy < best->breakdown.energy) {
      best = ExhaustiveResult{candidate, std::move(breakdown), 0};
    }

    // advance, rightmost coordinate fastest
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++odometer[pos] < k) {
        break;
      }
      odometer[pos] = 0;
      if (pos == 0) {
        best->states_visited = visited;
        best->selection.provenance = SelectionProvenance{
            cfg.objective.alpha, cfg.objective.beta, cfg.objective.lambda, cfg.seed, cfg.allowed};
        return std::move(*best);
      }
    }
  }
}

}  // namespace fuzzycal
