#pragma once
// Numeric comparison policy: relative 1e-9 with an absolute floor of 1e-12.

#include <algorithm>
#include <cmath>

namespace gtc {

constexpr double kRelTol = 1e-9;

// |a-b| / max(|a|, |b|, 1e-3); a deviation of at most kRelTol is relative 1e-9 or absolute 1e-12.
inline double rel_dev(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-3}); }

}  // namespace gtc
