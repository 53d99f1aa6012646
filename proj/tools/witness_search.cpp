// Regenerates tests/fixtures/shift_witnesses.json: one two-token configuration
// per non-commuting method whose attention scores change under a common shift.
//
//   witness_search [output.json]

#include <fstream>
#include <iostream>

#include "cliffrope/harness.hpp"

int main(int argc, char** argv) {
  using cliffrope::rotary::Method;
  constexpr double kMinGap = 1e-2;
  std::vector<cliffrope::harness::ShiftWitness> witnesses;
  for (Method method : {Method::Spherical, Method::QuatRo, Method::Care}) {
    witnesses.push_back(cliffrope::harness::search_shift_witness(method, 2024, kMinGap));
  }
  const std::string text = cliffrope::harness::witnesses_to_json(witnesses);
  if (argc > 1) {
    std::ofstream(argv[1]) << text;
  } else {
    std::cout << text;
  }
}
