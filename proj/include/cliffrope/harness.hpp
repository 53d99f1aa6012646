#pragma once

// Attention-score experiments: shift-equivariance gaps and rotor
// commutators for each encoding method.

#include <cstdint>
#include <string>
#include <vector>

#include "cliffrope/rotary.hpp"

namespace cliffrope::harness {

// Pre-softmax scores q k^T / sqrt(head_dim), one tokens x tokens matrix per batch entry.
struct AttentionScores {
  std::size_t batch = 0;
  std::size_t tokens = 0;
  std::vector<double> scores;

  double at(std::size_t b, std::size_t i, std::size_t j) const {
    return scores[(b * tokens + i) * tokens + j];
  }
};

// Throws std::invalid_argument unless the blocks agree on batch, tokens, head_dim and positions.
AttentionScores score_matrix(const rotary::TokenBlock& q, const rotary::TokenBlock& k,
                             const rotary::EncodingMethod& method);

double max_abs_diff(const AttentionScores& a, const AttentionScores& b);

rotary::TokenBlock shifted(const rotary::TokenBlock& block, rotary::Position2D shift);

// Max |score(p) - score(p + shift)| with every position moved by the same shift.
double shift_invariance_gap(const rotary::EncodingMethod& method, const rotary::TokenBlock& q,
                            const rotary::TokenBlock& k, rotary::Position2D shift);

// max over unit directions v of |R(a) R(b) v - R(b) R(a) v|, where R(p) is one
// band's rotation at position p. Directions are a fixed pseudo-random sample
// of the unit sphere in the method's sub-vector space.
double commutator_norm(rotary::Method method, rotary::Position2D a, rotary::Position2D b,
                       const rotary::Band& band, std::size_t directions = 128);

// A two-token configuration whose scores change under a common shift.
struct ShiftWitness {
  rotary::Method method = rotary::Method::Spherical;
  std::size_t head_dim = 3;
  double base = 10000.0;
  rotary::Vec3 axis_x{1, 0, 0};
  rotary::Vec3 axis_y{0, 0, 1};
  std::vector<rotary::Position2D> positions;
  std::vector<double> q;
  std::vector<double> k;
  rotary::Position2D shift;
  double recorded_gap = 0.0;

  rotary::EncodingMethod encoding() const;
  rotary::TokenBlock q_block() const;
  rotary::TokenBlock k_block() const;
  double gap() const;
};

// Seeded random search over grid positions, shifts and (for QuatRo/CARE)
// axes until the gap exceeds min_gap. Throws std::runtime_error if nothing is found.
ShiftWitness search_shift_witness(rotary::Method method, std::uint64_t seed, double min_gap,
                                  int attempts = 10000);

// Sampling setup shared by the reduction and gradient evaluations. Positions
// are integer points of a grid_h x grid_w grid; bands are drawn from the
// head_dim / 3 schedule.
struct SampleSetup {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t grid_h = 14;
  std::size_t grid_w = 14;
  std::size_t head_dim = 64;
  double base = 10000.0;
  double scale_x = 1.0;
  double scale_y = 1.0;
};

struct ReductionResult {
  std::string name;
  double max_abs_dev = 0.0;
};

// The four reductions, in order:
//   quatro_orthogonal_eq_spherical  QuatRo with axes (i, k) vs the Spherical matrices
//   quatro_parallel_eq_mixed        QuatRo with one shared axis vs Mixed
//   care_grade1_eq_quatro           CARE on a grade-1 input vs QuatRo in the same rotor order
//   care_parallel_eq_mixed          CARE with one shared axis on a grade-1 input vs Mixed
std::vector<ReductionResult> evaluate_reductions(const SampleSetup& setup);

struct GradientResult {
  rotary::Method method = rotary::Method::QuatRo;
  rotary::Coordinate coordinate = rotary::Coordinate::AngleX;
  double h = 1e-5;
  std::size_t samples = 0;
  // max ||analytic - central difference|| / max(||analytic||, ||numeric||)
  double max_rel_err = 0.0;
  // Largest |value| in the CARE scalar and e123 slots of either gradient (0 for other methods).
  double max_invariant_abs = 0.0;
};

// One result per (method, coordinate, h). Throws std::invalid_argument for a non-positive step.
std::vector<GradientResult> evaluate_gradients(const SampleSetup& setup,
                                               const std::vector<double>& steps);

std::string witnesses_to_json(const std::vector<ShiftWitness>& witnesses);
std::vector<ShiftWitness> witnesses_from_json(const std::string& text);

}  // namespace cliffrope::harness
