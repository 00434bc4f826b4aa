#pragma once

namespace fuzzycal {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSelectionFormatVersion = 1;

}  // namespace fuzzycal
