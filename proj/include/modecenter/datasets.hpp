#pragma once

#include <span>
#include <vector>

namespace modecenter {

struct ValueCount {
  int value;
  int count;
};

/// Newcomb's 1882 speed-of-light passage times, as deviations from 24,800
/// nanoseconds: 23 distinct values with multiplicities (66 observations).
std::span<const ValueCount> newcomb_table();

/// The table expanded to the 66 observations, in ascending order.
std::vector<double> newcomb_data();

/// Seven-point toy sample with a two-point cluster far from the bulk.
std::vector<double> synthetic_example();

}  // namespace modecenter
