#include "modecenter/datasets.hpp"

#include <array>

namespace modecenter {
namespace {

constexpr std::array<ValueCount, 23> kNewcomb = {{
    {-44, 1}, {-2, 1}, {16, 2}, {19, 1}, {20, 1}, {21, 2}, {22, 2}, {23, 3},
    {24, 5},  {25, 5}, {26, 5}, {27, 6}, {28, 7}, {29, 5}, {30, 3}, {31, 2},
    {32, 5},  {33, 2}, {34, 1}, {36, 4}, {37, 1}, {39, 1}, {40, 1},
}};

}  // namespace

std::span<const ValueCount> newcomb_table() { return kNewcomb; }

std::vector<double> newcomb_data() {
  std::vector<double> out;
  for (const ValueCount& vc : kNewcomb) out.insert(out.end(), vc.count, vc.value);
  return out;
}

std::vector<double> synthetic_example() { return {-2, -1, 0, 1, 2, 10, 11}; }

}  // namespace modecenter
