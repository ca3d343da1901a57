#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "circattn/analysis.hpp"
#include "circattn/attention.hpp"
#include "circattn/bench.hpp"
#include "circattn/costmodel.hpp"
#include "circattn/errors.hpp"
#include "circattn/io.hpp"
#include "circattn/rng.hpp"
#include "circattn/structured.hpp"
#include "circattn/types.hpp"
#include "circattn/verify.hpp"

namespace {

namespace ca = circattn;
using nlohmann::json;

// Exit-code contract: 0 success, 1 verification failure, 2 usage/validation,
// 3 I/O failure.
constexpr int kOk = 0;
constexpr int kVerifyFailure = 1;
constexpr int kUsage = 2;
constexpr int kIo = 3;

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CIRC_ATTN_SEED"))
    return std::strtoull(s, nullptr, 10);
  return 0;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed{0};
  int cases{20};
};

int run_verify(const VerifyArgs& args) {
  ca::verify::Suite results;
  auto append = [&](ca::verify::Suite s) {
    for (auto& r : s) results.push_back(std::move(r));
  };
  if (args.suite == "fft" || args.suite == "all")
    append(ca::verify::run_fft_suite(args.seed, args.cases));
  if (args.suite == "bccb" || args.suite == "all")
    append(ca::verify::run_bccb_suite(args.seed, args.cases));
  if (args.suite == "attention" || args.suite == "all")
    append(ca::verify::run_attention_suite(args.seed, args.cases));
  if (args.suite == "grad" || args.suite == "all")
    append(ca::verify::run_grad_suite(args.seed, args.cases));

  bool all_pass = true;
  for (const auto& r : results) {
    std::cout << ca::verify::format_result(r) << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kOk : kVerifyFailure;
}

struct ProjectArgs {
  std::string in_path;
  std::string grid;
  std::string out_kernel;
  std::string report_path;
};

int run_project(const ProjectArgs& args) {
  const ca::GridShape shape = ca::io::parse_grid_flag(args.grid);
  const ca::DenseMatrix a = ca::io::read_matrix_csv(args.in_path);
  const auto report = ca::analysis::bccb_similarity_report(a, shape);

  if (!args.out_kernel.empty()) {
    ca::DenseMatrix row(1, shape.n());
    row.data = report.kernel.b;
    ca::io::write_matrix_csv(args.out_kernel, row);
  }

  const json j = {{"similarity", report.similarity},
                  {"residual_fro", report.residual_fro},
                  {"grid", {shape.h, shape.w}}};
  if (!args.report_path.empty()) {
    std::ofstream out(args.report_path);
    if (!out) throw ca::IoError("cannot open for writing: " + args.report_path);
    out << j.dump(2) << '\n';
    if (!out) throw ca::IoError("write failed: " + args.report_path);
  }
  std::cout << j.dump() << '\n';
  return kOk;
}

struct KernelsArgs {
  std::uint64_t seed{0};
  std::string grid;
  int dim{4};
  int count{8};
  std::string out_dir;
};

int run_kernels(const KernelsArgs& args) {
  const ca::GridShape shape = ca::io::parse_grid_flag(args.grid);
  if (args.dim < 1) throw ca::DomainError("--dim must be >= 1");
  if (args.count < 0) throw ca::DomainError("--count must be >= 0");

  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) throw ca::IoError("cannot create output dir: " + args.out_dir);

  ca::SplitMix64 rng(args.seed);
  json files = json::array();
  for (int i = 0; i < args.count; ++i) {
    ca::SequenceTensor q(shape, args.dim), k(shape, args.dim);
    for (auto& v : q.data) v = rng.uniform(-1.0, 1.0);
    for (auto& v : k.data) v = rng.uniform(-1.0, 1.0);
    const auto kernel = ca::analysis::extract_equivalent_kernel(q, k);

    const auto base = std::filesystem::path(args.out_dir) /
                      ("kernel_" + std::to_string(i));
    ca::analysis::export_kernel_pgm(kernel, base.string() + ".pgm");
    ca::DenseMatrix grid_csv(shape.h, shape.w);
    grid_csv.data = kernel.b;
    ca::io::write_matrix_csv(base.string() + ".csv", grid_csv);
    files.push_back(base.filename().string() + ".pgm");
    files.push_back(base.filename().string() + ".csv");
    std::cerr << "wrote " << base.string() << ".{pgm,csv}\n";
  }
  std::cout << json{{"grid", {shape.h, shape.w}},
                    {"dim", args.dim},
                    {"count", args.count},
                    {"files", files}}
                   .dump()
            << '\n';
  return kOk;
}

struct BenchArgs {
  std::string impl;
  std::string grids;
  int dim{8};
  int heads{1};
  int reps{5};
  std::uint64_t seed{0};
  std::string out_path;
  bool allow_large{false};
};

int run_bench(const BenchArgs& args) {
  ca::bench::Impl impl;
  if (args.impl == "ca_fast") impl = ca::bench::Impl::ca_fast;
  else if (args.impl == "ca_naive") impl = ca::bench::Impl::ca_naive;
  else if (args.impl == "sa_reference") impl = ca::bench::Impl::sa_reference;
  else throw ca::DomainError("unknown --impl: " + args.impl);

  std::vector<ca::GridShape> grids;
  std::string tok;
  std::istringstream ss(args.grids);
  while (std::getline(ss, tok, ',')) grids.push_back(ca::io::parse_grid_flag(tok));
  if (grids.empty()) throw ca::DomainError("--grids must list at least one HxW");

  const auto rows = ca::bench::wallclock_sweep(impl, grids, args.dim, args.heads,
                                               args.reps, args.seed, args.allow_large);
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    if (!out) throw ca::IoError("cannot open for writing: " + args.out_path);
    ca::bench::write_bench_csv(out, rows);
    if (!out) throw ca::IoError("write failed: " + args.out_path);
  } else {
    ca::bench::write_bench_csv(std::cout, rows);
  }
  return kOk;
}

struct FlopsArgs {
  std::int64_t n{0};
  int dim{0};
  int heads{1};
  std::string model;
  int resolution{224};
};

int run_flops(const FlopsArgs& args) {
  if (!args.model.empty()) {
    ca::costmodel::BlockModelSpec spec;
    if (args.model == "deit-t") spec = ca::costmodel::deit_tiny_spec();
    else if (args.model == "ca-deit-t") spec = ca::costmodel::ca_deit_tiny_spec();
    else throw ca::DomainError("unknown --model: " + args.model);
    const auto tokens = ca::costmodel::tokens_for_resolution(args.resolution);
    const double flops = ca::costmodel::model_flops(spec, tokens);
    std::cout << json{{"model", args.model},
                      {"resolution", args.resolution},
                      {"tokens", tokens},
                      {"flops", flops}}
                     .dump()
              << '\n';
    return kOk;
  }
  if (args.n < 1 || args.dim < 1)
    throw ca::DomainError("provide --N and --dim, or --model");
  const auto r = ca::costmodel::attention_flops(args.n, args.dim, args.heads);
  std::cout << json{{"N", r.n},
                    {"d", r.d},
                    {"heads", r.heads},
                    {"flops_ca", r.flops_ca},
                    {"flops_sa", r.flops_sa},
                    {"ratio", r.ratio}}
                   .dump()
            << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BCCB-structured attention toolkit: DFT-based attention, "
               "projection analysis, cost model, benchmarks"};
  app.require_subcommand(1);

  VerifyArgs verify_args;
  verify_args.seed = default_seed();
  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", verify_args.suite, "fft|bccb|attention|grad|all")
      ->required()
      ->check(CLI::IsMember({"fft", "bccb", "attention", "grad", "all"}));
  verify->add_option("--seed", verify_args.seed, "RNG seed");
  verify->add_option("--cases", verify_args.cases, "randomized cases per property")
      ->check(CLI::PositiveNumber);

  ProjectArgs project_args;
  auto* project = app.add_subcommand("project",
                                     "project a matrix CSV onto the BCCB subspace");
  project->add_option("--in", project_args.in_path, "input matrix CSV")->required();
  project->add_option("--grid", project_args.grid, "token grid HxW")->required();
  project->add_option("--out-kernel", project_args.out_kernel, "kernel CSV (1 x N)");
  project->add_option("--report", project_args.report_path, "JSON report path");

  KernelsArgs kernels_args;
  kernels_args.seed = default_seed();
  auto* kernels = app.add_subcommand("kernels",
                                     "export equivalent convolution kernels "
                                     "for seeded random Q,K");
  kernels->add_option("--seed", kernels_args.seed, "RNG seed");
  kernels->add_option("--grid", kernels_args.grid, "token grid HxW")->required();
  kernels->add_option("--dim", kernels_args.dim, "head dim d");
  kernels->add_option("--count", kernels_args.count, "number of kernels");
  kernels->add_option("--out-dir", kernels_args.out_dir, "output directory")->required();

  BenchArgs bench_args;
  bench_args.seed = default_seed();
  auto* bench = app.add_subcommand("bench", "wall-clock scaling sweep (CSV)");
  bench->add_option("--impl", bench_args.impl, "ca_fast|ca_naive|sa_reference")
      ->required()
      ->check(CLI::IsMember({"ca_fast", "ca_naive", "sa_reference"}));
  bench->add_option("--grids", bench_args.grids, "comma-separated HxW list")->required();
  bench->add_option("--dim", bench_args.dim, "head dim d");
  bench->add_option("--heads", bench_args.heads, "head count");
  bench->add_option("--reps", bench_args.reps, "timed repetitions (>= 3)");
  bench->add_option("--seed", bench_args.seed, "RNG seed");
  bench->add_option("--out", bench_args.out_path, "CSV output path (default stdout)");
  bench->add_flag("--allow-large", bench_args.allow_large,
                  "permit dense paths beyond N = 4096");

  FlopsArgs flops_args;
  auto* flops = app.add_subcommand("flops", "analytic flop counts (JSON)");
  auto* flops_n = flops->add_option("--N", flops_args.n, "token count");
  flops->add_option("--dim", flops_args.dim, "head dim d");
  flops->add_option("--heads", flops_args.heads, "head count");
  auto* flops_model = flops->add_option("--model", flops_args.model, "deit-t|ca-deit-t")
                          ->check(CLI::IsMember({"deit-t", "ca-deit-t"}));
  flops->add_option("--resolution", flops_args.resolution, "square input resolution");
  flops_model->excludes(flops_n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (verify->parsed()) return run_verify(verify_args);
    if (project->parsed()) return run_project(project_args);
    if (kernels->parsed()) return run_kernels(kernels_args);
    if (bench->parsed()) return run_bench(bench_args);
    if (flops->parsed()) return run_flops(flops_args);
  } catch (const ca::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
