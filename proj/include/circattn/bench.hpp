#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "circattn/types.hpp"

namespace circattn::bench {

enum class Impl { ca_fast, ca_naive, sa_reference };

std::string impl_name(Impl impl);

struct BenchRow {
  Impl impl{Impl::ca_fast};
  GridShape grid;
  int d{1};
  int heads{1};
  double flops_model{0.0};
  double wall_ns_mean{0.0};
  double wall_ns_std{0.0};
};

// Per grid: one warm-up run, then `reps` timed runs (monotonic clock) on
// seeded random inputs; reports mean and standard deviation of wall
// nanoseconds plus the analytic flop count for the executed path. Dense
// paths refuse N > 4096 unless allow_large is set. Strictly sequential.
std::vector<BenchRow> wallclock_sweep(Impl impl,
                                      const std::vector<GridShape>& grids,
                                      int d, int heads, int reps,
                                      std::uint64_t seed,
                                      bool allow_large = false);

// Header exactly: impl,N,H,W,d,heads,flops_model,wall_ns_mean,wall_ns_std
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace circattn::bench
