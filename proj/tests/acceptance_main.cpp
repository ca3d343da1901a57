// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// Usage: circattn_acceptance <path-to-circattn-cli>
//
// The scaling criterion is timing-sensitive; when the CI environment
// variable is set it is reported as ADVISORY and does not affect the exit
// code. Everywhere else it is mandatory.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "circattn/bench.hpp"
#include "circattn/costmodel.hpp"
#include "circattn/verify.hpp"

namespace fs = std::filesystem;
using namespace circattn;

namespace {

using Clock = std::chrono::steady_clock;

bool g_all_pass = true;

void report(const std::string& name, bool pass, const std::string& detail,
            bool advisory = false) {
  const char* tag = pass ? "PASS" : (advisory ? "ADVISORY-FAIL" : "FAIL");
  std::printf("%s %s %s\n", tag, name.c_str(), detail.c_str());
  if (!advisory) g_all_pass = g_all_pass && pass;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

bool suite_passes(const verify::Suite& suite, double& worst) {
  bool ok = true;
  for (const auto& r : suite) {
    ok = ok && r.pass;
    worst = std::max(worst, r.max_err);
  }
  return ok;
}

// ---- criterion 1: fast path equals projection-then-dense oracle ----------
void criterion_oracle_equivalence() {
  const auto t0 = Clock::now();
  const auto r = verify::check_fast_naive_equivalence(2026, 50);
  const double secs = seconds_since(t0);
  report("1-oracle-equivalence", r.pass && secs < 10.0,
         fmt("max_err=%.3e tol=1e-9 runtime=%.2fs limit=10s", r.max_err, secs));
}

// ---- criterion 2: projection correctness ----------------------------------
void criterion_projection() {
  double worst = 0.0;
  const verify::Suite parts = {
      verify::check_projection_idempotence(2026, 20),
      verify::check_basis_orthogonality(),
      verify::check_pythagoras(2026, 20),
      verify::check_nearest_distance(2026, 100),
  };
  const bool ok = [&] {
    double w = 0.0;
    const bool p = suite_passes(parts, w);
    worst = w;
    return p;
  }();
  report("2-projection-correctness", ok, fmt("max_err=%.3e", worst));
}

// ---- criterion 3: FFT core -------------------------------------------------
void criterion_fft_core() {
  double worst = 0.0;
  const verify::Suite parts = {
      verify::check_roundtrip_1d(),
      verify::check_parseval_1d(),
      verify::check_naive_dft_agreement(2026, 20),
  };
  const bool ok = suite_passes(parts, worst);
  report("3-fft-core", ok, fmt("max_err=%.3e", worst));
}

// ---- criterion 4: gradient checks ------------------------------------------
void criterion_gradients() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  const bool ok = suite_passes(verify::run_gradcheck_matrix(2026), worst);
  const double secs = seconds_since(t0);
  report("4-gradient-checks", ok && secs < 60.0,
         fmt("max_rel_err=%.3e tol=1e-6 runtime=%.2fs limit=60s", worst, secs));
}

// ---- criterion 5: structural properties ------------------------------------
void criterion_structural() {
  double worst = 0.0;
  const verify::Suite parts = {
      verify::check_double_stochasticity(2026, 20),
      verify::check_shift_equivariance(2026, 20),
  };
  const bool ok = suite_passes(parts, worst);
  report("5-structural-properties", ok, fmt("max_err=%.3e", worst));
}

// ---- criterion 6: analytic flop claims --------------------------------------
void criterion_flops() {
  // (a) tiny dense model at 224 within 5% of 1.2e9.
  const double tiny =
      costmodel::model_flops(costmodel::deit_tiny_spec(),
                             costmodel::tokens_for_resolution(224));
  const bool a_ok = std::abs(tiny - 1.2e9) / 1.2e9 <= 0.05;

  // (b) dense/circulant model ratio at 1536 resolution in [7, 9].
  const auto big_tokens = costmodel::tokens_for_resolution(1536);
  const double ratio =
      costmodel::model_flops(costmodel::deit_tiny_spec(), big_tokens) /
      costmodel::model_flops(costmodel::ca_deit_tiny_spec(), big_tokens);
  const bool b_ok = ratio >= 7.0 && ratio <= 9.0;

  // (c) report formula vs. independent arithmetic, exact.
  const std::pair<std::int64_t, std::int64_t> table[] = {
      {1, 1}, {2, 1}, {9, 3}, {196, 64}, {1024, 8}, {3136, 1}, {9216, 64}};
  bool c_ok = true;
  for (const auto& [n, d] : table) {
    const auto r = costmodel::attention_flops(n, d, 1);
    const double nn = static_cast<double>(n), dd = static_cast<double>(d);
    const double expect_ca = nn * std::log2(nn) * (4.0 * dd + 2.0) + 4.0 * nn * dd;
    const double expect_sa = 2.0 * nn * nn * dd;
    c_ok = c_ok && r.flops_ca == expect_ca && r.flops_sa == expect_sa;
    // Cross-check against the per-transform six-term expansion.
    const double l = std::log2(nn);
    const double expanded = 2.0 * nn * l * dd + 2.0 * nn * dd + nn * l +
                            nn * l * (dd + 1.0) + 2.0 * nn * dd + nn * l * dd;
    c_ok = c_ok && std::abs(r.flops_ca - expanded) <=
                       1e-12 * std::max(1.0, expanded);
  }
  report("6-flop-claims", a_ok && b_ok && c_ok,
         fmt("tiny224=%.4g (target 1.2e9 +-5%%) ratio1536=%.3f (band 7..9)",
             tiny, ratio));
}

// ---- criterion 7: wall-clock scaling ----------------------------------------
void criterion_scaling() {
  const bool advisory = std::getenv("CI") != nullptr;
  const std::vector<GridShape> grids = {GridShape{32, 32}, GridShape{64, 64}};
  const auto fast = bench::wallclock_sweep(bench::Impl::ca_fast, grids, 8, 1, 5, 11);
  const auto dense =
      bench::wallclock_sweep(bench::Impl::sa_reference, grids, 8, 1, 5, 11);
  const double fast_ratio = fast[1].wall_ns_mean / fast[0].wall_ns_mean;
  const double dense_ratio = dense[1].wall_ns_mean / dense[0].wall_ns_mean;
  const bool ok = fast_ratio <= 8.0 && dense_ratio >= 10.0;
  report("7-scaling-law", ok,
         fmt("ca_fast x%.2f (limit 8) sa_reference x%.2f (floor 10)",
             fast_ratio, dense_ratio),
         advisory);
}

// ---- criterion 8: determinism ------------------------------------------------
int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : (WIFEXITED(rc) ? WEXITSTATUS(rc) : -1);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism(const std::string& cli) {
  const fs::path root =
      fs::temp_directory_path() / ("circattn-accept-" + std::to_string(::getpid()));
  fs::create_directories(root);

  bool ok = true;
  std::string why = "byte-identical reruns";

  // kernels: two runs, same seed, byte-compare every artifact.
  const fs::path ka = root / "ka", kb = root / "kb";
  for (const auto& dir : {ka, kb}) {
    if (run_cmd(cli + " kernels --seed 9 --grid 4x5 --dim 2 --count 4 --out-dir " +
                dir.string() + " > " + (dir.string() + ".json") +
                " 2> /dev/null") != 0) {
      ok = false;
      why = "kernels command failed";
    }
  }
  if (ok) {
    for (int i = 0; i < 4 && ok; ++i) {
      for (const char* ext : {".pgm", ".csv"}) {
        const std::string name = "kernel_" + std::to_string(i) + ext;
        const auto a = slurp(ka / name), b = slurp(kb / name);
        ok = ok && !a.empty() && a == b;
      }
    }
    ok = ok && slurp(ka.string() + ".json") == slurp(kb.string() + ".json");
    if (!ok) why = "kernels output differs between reruns";
  }

  // verification suites: full run twice, stdout must match byte for byte.
  if (ok) {
    const fs::path va = root / "verify_a.txt", vb = root / "verify_b.txt";
    const std::string verify_cmd = " verify --suite all --seed 7 --cases 6 > ";
    const int rc_a = run_cmd(cli + verify_cmd + va.string() + " 2> /dev/null");
    const int rc_b = run_cmd(cli + verify_cmd + vb.string() + " 2> /dev/null");
    const auto a = slurp(va), b = slurp(vb);
    ok = rc_a == 0 && rc_b == 0 && !a.empty() && a == b;
    if (!ok) why = "verify output differs or suites failed";
  }

  fs::remove_all(root);
  report("8-determinism", ok, why);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-circattn-cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];

  criterion_oracle_equivalence();
  criterion_projection();
  criterion_fft_core();
  criterion_gradients();
  criterion_structural();
  criterion_flops();
  criterion_scaling();
  criterion_determinism(cli);

  return g_all_pass ? 0 : 1;
}
