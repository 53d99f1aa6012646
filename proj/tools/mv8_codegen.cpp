// Prints the expanded MV8 geometric product in the Cl(3,0) slot layout, as
// frozen into src/cl3_fast.cpp. The table is derived from ga_core basis
// products; tests/test_cl3_fast.cpp re-derives it and checks every cell.

#include <array>
#include <iostream>
#include <vector>

#include "cliffrope/ga_core.hpp"

int main() {
  using cliffrope::ga::Multivector;
  using cliffrope::ga::kCl3Slots;

  std::array<std::vector<std::pair<int, std::pair<int, int>>>, kCl3Slots> terms;
  for (std::size_t i = 0; i < kCl3Slots; ++i) {
    for (std::size_t j = 0; j < kCl3Slots; ++j) {
      std::vector<double> ea(kCl3Slots, 0.0), eb(kCl3Slots, 0.0);
      ea[i] = 1.0;
      eb[j] = 1.0;
      const auto prod = cliffrope::ga::to_cl3_layout(cliffrope::ga::from_cl3_layout(ea) *
                                                     cliffrope::ga::from_cl3_layout(eb));
      for (std::size_t k = 0; k < kCl3Slots; ++k) {
        if (prod[k] != 0.0) {
          terms[k].push_back({prod[k] > 0 ? 1 : -1, {static_cast<int>(i), static_cast<int>(j)}});
        }
      }
    }
  }
  for (std::size_t k = 0; k < kCl3Slots; ++k) {
    std::cout << "  out[" << k << "] =";
    bool first = true;
    for (const auto& [sign, ij] : terms[k]) {
      std::cout << (first ? (sign > 0 ? " " : " -") : (sign > 0 ? " + " : " - ")) << "a[" << ij.first
                << "] * b[" << ij.second << "]";
      first = false;
    }
    std::cout << ";\n";
  }
}
