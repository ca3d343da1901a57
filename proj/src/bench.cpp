#include "circattn/bench.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "circattn/attention.hpp"
#include "circattn/costmodel.hpp"
#include "circattn/io.hpp"
#include "circattn/rng.hpp"

namespace circattn::bench {

namespace {

using Clock = std::chrono::steady_clock;

SequenceTensor random_tensor(GridShape shape, int d, SplitMix64& rng) {
  SequenceTensor t(shape, d);
  for (auto& v : t.data) v = rng.uniform(-1.0, 1.0);
  return t;
}

// Accumulates into a sink the optimizer cannot drop.
double run_once(Impl impl, const SequenceTensor& q, const SequenceTensor& k,
                const SequenceTensor& v, int heads, bool allow_large) {
  double sink = 0.0;
  for (int h = 0; h < heads; ++h) {
    SequenceTensor out;
    switch (impl) {
      case Impl::ca_fast:
        out = attention::circulant_attention(q, k, v);
        break;
      case Impl::ca_naive:
        out = attention::circulant_attention_naive(q, k, v,
                                                   attention::Reweighting::none,
                                                   nullptr, allow_large);
        break;
      case Impl::sa_reference:
        out = attention::self_attention_reference(q, k, v);
        break;
    }
    sink += out.data.front() + out.data.back();
  }
  return sink;
}

}  // namespace

std::string impl_name(Impl impl) {
  switch (impl) {
    case Impl::ca_fast: return "ca_fast";
    case Impl::ca_naive: return "ca_naive";
    case Impl::sa_reference: return "sa_reference";
  }
  return "?";
}

std::vector<BenchRow> wallclock_sweep(Impl impl,
                                      const std::vector<GridShape>& grids,
                                      int d, int heads, int reps,
                                      std::uint64_t seed, bool allow_large) {
  if (reps < 3) throw DomainError("bench requires reps >= 3");
  if (d < 1 || heads < 1) throw DomainError("bench requires d, heads >= 1");

  volatile double sink = 0.0;
  SplitMix64 rng(seed);
  std::vector<BenchRow> rows;
  for (const GridShape& grid : grids) {
    grid.validate();
    const int n = grid.n();
    if (impl != Impl::ca_fast && n > 4096 && !allow_large)
      throw DomainError("dense benchmark path refused for N > 4096 "
                        "(pass allow_large to override)");

    const SequenceTensor q = random_tensor(grid, d, rng);
    const SequenceTensor k = random_tensor(grid, d, rng);
    const SequenceTensor v = random_tensor(grid, d, rng);

    sink = sink + run_once(impl, q, k, v, heads, allow_large);  // warm-up

    std::vector<double> ns(static_cast<std::size_t>(reps));
    for (int r = 0; r < reps; ++r) {
      const auto t0 = Clock::now();
      sink = sink + run_once(impl, q, k, v, heads, allow_large);
      const auto t1 = Clock::now();
      ns[static_cast<std::size_t>(r)] = static_cast<double>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }

    double mean = 0.0;
    for (double t : ns) mean += t;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (double t : ns) var += (t - mean) * (t - mean);
    var /= static_cast<double>(reps > 1 ? reps - 1 : 1);

    const auto fr = costmodel::attention_flops(n, d, heads);
    BenchRow row;
    row.impl = impl;
    row.grid = grid;
    row.d = d;
    row.heads = heads;
    row.flops_model = impl == Impl::ca_fast ? fr.flops_ca : fr.flops_sa;
    row.wall_ns_mean = mean;
    row.wall_ns_std = std::sqrt(var);
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "impl,N,H,W,d,heads,flops_model,wall_ns_mean,wall_ns_std\n";
  for (const BenchRow& r : rows) {
    out << impl_name(r.impl) << ',' << r.grid.n() << ',' << r.grid.h << ','
        << r.grid.w << ',' << r.d << ',' << r.heads << ','
        << io::format_double(r.flops_model) << ','
        << io::format_double(r.wall_ns_mean) << ','
        << io::format_double(r.wall_ns_std) << '\n';
  }
}

}  // namespace circattn::bench
