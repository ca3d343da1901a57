#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace circattn::verify {

struct PropertyResult {
  std::string name;
  bool pass{false};
  double max_err{0.0};
};

using Suite = std::vector<PropertyResult>;

// Randomized-case properties draw `cases` samples; exhaustive sweeps
// (all lengths 1..64, basis orthogonality, the gradient-check matrix)
// ignore it. Output is deterministic for a given seed.
Suite run_fft_suite(std::uint64_t seed, int cases);
Suite run_bccb_suite(std::uint64_t seed, int cases);
Suite run_attention_suite(std::uint64_t seed, int cases);
Suite run_grad_suite(std::uint64_t seed, int cases);

// Individual checks reused by the acceptance harness.
PropertyResult check_fast_naive_equivalence(std::uint64_t seed, int cases);
PropertyResult check_roundtrip_1d();
PropertyResult check_parseval_1d();
PropertyResult check_naive_dft_agreement(std::uint64_t seed, int cases);
PropertyResult check_double_stochasticity(std::uint64_t seed, int cases);
PropertyResult check_shift_equivariance(std::uint64_t seed, int cases);
PropertyResult check_projection_idempotence(std::uint64_t seed, int cases);
PropertyResult check_basis_orthogonality();
PropertyResult check_pythagoras(std::uint64_t seed, int cases);
PropertyResult check_nearest_distance(std::uint64_t seed, int trials);
Suite run_gradcheck_matrix(std::uint64_t seed);

// One line per property: "PASS|FAIL <name> max_err=<%.3e>".
std::string format_result(const PropertyResult& r);

}  // namespace circattn::verify
