#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fuzzycal {

/// Fuzzy partition families, indexed by slope magnitude. Every function in a
/// partition belongs to exactly one family, and each family sums to 1 over
/// [0,1].
enum class Partition { P1, P2, P4, P8 };

inline const char* to_string(Partition p) {
  switch (p) {
    case Partition::P1: return "P1";
    case Partition::P2: return "P2";
    case Partition::P4: return "P4";
    case Partition::P8: return "P8";
  }
  return "?";
}

/// One triangular membership function: left endpoint `a`, peak location `b`,
/// right endpoint `c`. Degenerate shoulders (a == b or b == c) peak at the
/// shared endpoint. `identity` marks the pass-through function, which leaves
/// a probability unchanged.
struct MembershipFunction {
  int id;  // 1-based, stable across releases
  double a;
  double b;
  double c;
  const char* name;
  const char* short_form;
  Partition partition;
  bool identity;
};

/// The fixed family of 19 functions. Parameters are not configurable; the
/// only supported variation is restricting a solver to a subset.
inline constexpr std::array<MembershipFunction, 19> kMembershipFamily{{
    {1, 0.0, 0.0, 0.5, "Low-2", "L-2", Partition::P2, false},
    {2, 0.0, 0.5, 1.0, "Medium-2", "M-2", Partition::P2, false},
    {3, 0.5, 1.0, 1.0, "High-2", "H-2", Partition::P2, false},
    {4, 0.0, 0.0, 0.25, "Low-4", "L-4", Partition::P4, false},
    {5, 0.0, 0.25, 0.5, "Medium Low-4", "ML-4", Partition::P4, false},
    {6, 0.25, 0.5, 0.75, "Medium-4", "M-4", Partition::P4, false},
    {7, 0.5, 0.75, 1.0, "Medium High-4", "MH-4", Partition::P4, false},
    {8, 0.75, 1.0, 1.0, "High-4", "H-4", Partition::P4, false},
    {9, 0.0, 0.0, 0.125, "Very Very Low-8", "VVL-8", Partition::P8, false},
    {10, 0.0, 0.125, 0.25, "Very Low-8", "VL-8", Partition::P8, false},
    {11, 0.125, 0.25, 0.375, "Low-8", "L-8", Partition::P8, false},
    {12, 0.25, 0.375, 0.5, "Medium Low-8", "ML-8", Partition::P8, false},
    {13, 0.375, 0.5, 0.625, "Medium-8", "M-8", Partition::P8, false},
    {14, 0.5, 0.625, 0.75, "Medium High-8", "MH-8", Partition::P8, false},
    {15, 0.625, 0.75, 0.875, "High-8", "H-8", Partition::P8, false},
    {16, 0.75, 0.875, 1.0, "Very High-8", "VH-8", Partition::P8, false},
    {17, 0.875, 1.0, 1.0, "Very Very High-8", "VVH-8", Partition::P8, false},
    {18, 0.0, 0.0, 1.0, "Full-1", "F-1", Partition::P1, false},
    {19, 0.0, 1.0, 1.0, "Don't Change", "Don't Change", Partition::P1, true},
}};

inline constexpr int kNumMembershipFunctions = 19;
inline constexpr int kIdentityFunctionId = 19;

inline std::vector<int> all_function_ids() {
  std::vector<int> ids(kNumMembershipFunctions);
  for (int i = 0; i < kNumMembershipFunctions; ++i) {
    ids[static_cast<std::size_t>(i)] = i + 1;
  }
  return ids;
}

/// Lookup by 1-based id. Throws std::invalid_argument if out of range.
inline const MembershipFunction& describe(int id) {
  if (id < 1 || id > kNumMembershipFunctions) {
    throw std::invalid_argument("membership function id out of range: " +
                                std::to_string(id));
  }
  return kMembershipFamily[static_cast<std::size_t>(id - 1)];
}

/// Triangular membership value of `p` under `fn`.
///
/// The identity function returns `p` unchanged. Degenerate shoulders take the
/// peak value at the shared endpoint (a left shoulder is 1 at p == a, a right
/// shoulder is 1 at p == c). Throws std::domain_error if p is outside [0,1].
inline double evaluate(const MembershipFunction& fn, double p) {
  if (!(0.0 <= p && p <= 1.0)) {
    throw std::domain_error("membership input outside [0,1]");
  }
  if (fn.identity) {
    return p;
  }
  if (p < fn.a || p > fn.c) {
    return 0.0;
  }
  if (fn.a == fn.b) {
    return (fn.c - p) / (fn.c - fn.b);  // left shoulder, peak at a
  }
  if (fn.b == fn.c) {
    return (p - fn.a) / (fn.b - fn.a);  // right shoulder, peak at c
  }
  if (p <= fn.b) {
    return (p - fn.a) / (fn.b - fn.a);
  }
  return (fn.c - p) / (fn.c - fn.b);
}

inline double evaluate(int id, double p) { return evaluate(describe(id), p); }

/// Union of the requested partition families, in ascending id order.
/// Duplicated tags are harmless. Throws std::invalid_argument when empty.
inline std::vector<MembershipFunction> family(std::span<const Partition> partitions) {
  if (partitions.empty()) {
    throw std::invalid_argument("family: no partitions requested");
  }
  std::vector<MembershipFunction> out;
  for (const auto& fn : kMembershipFamily) {
    for (Partition p : partitions) {
      if (fn.partition == p) {
        out.push_back(fn);
        break;
      }
    }
  }
  return out;
}

inline std::vector<MembershipFunction> family(std::initializer_list<Partition> partitions) {
  return family(std::span<const Partition>(partitions.begin(), partitions.size()));
}

/// Same selection as family(), reduced to ids. This is the form solver
/// configs consume.
inline std::vector<int> family_ids(std::span<const Partition> partitions) {
  std::vector<int> out;
  for (const auto& fn : family(partitions)) {
    out.push_back(fn.id);
  }
  return out;
}

inline std::vector<int> family_ids(std::initializer_list<Partition> partitions) {
  return family_ids(std::span<const Partition>(partitions.begin(), partitions.size()));
}

}  // namespace fuzzycal
