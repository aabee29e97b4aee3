// Timing harness for the two hot kernels: exhaustive profile enumeration
// (strata/OpenMP kernel vs the serial Gray-code reference) and the
// event-driven phase simulator.  Prints a small table; not a correctness
// gate (the test suite compares the kernels' outputs).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <vector>

#include "rewire/interchange.hpp"
#include "rewire/isoperimetry.hpp"
#include "rewire/paths.hpp"
#include "rewire/phase_graph.hpp"
#include "rewire/pointer_config.hpp"
#include "rewire/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace rewire;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void bench_profiles() {
  std::printf("exhaustive profile: strata kernel vs Gray-code reference\n");
  std::printf("%6s %12s %12s %9s %8s\n", "n", "strata[s]", "gray[s]", "speedup", "agree");
  for (int n : {16, 18, 20}) {
    Rng rng(1, n);
    const PhaseGraph graph = build_phase_graph(make_random_config(n, rng), Color::Red);

    const auto t0 = Clock::now();
    const IsoProfile fast = profile_exact(graph, n / 2);
    const double fast_s = seconds_since(t0);

    const auto t1 = Clock::now();
    const IsoProfile slow = profile_exact_serial(graph, n / 2);
    const double slow_s = seconds_since(t1);

    const bool agree = fast.phi_card == slow.phi_card && fast.phi_ratio_frac == slow.phi_ratio_frac;
    std::printf("%6d %12.4f %12.4f %9.2f %8s\n", n, fast_s, slow_s, slow_s / fast_s,
                agree ? "yes" : "NO");
  }
}

void bench_simulation() {
  std::printf("\nevent-driven phase simulation\n");
  std::printf("%6s %10s %12s %14s\n", "n", "T", "events", "events/s");
  for (int n : {64, 512, 4096}) {
    const double t = 2048.0 / n;  // keep total work comparable
    Rng rng(2, n);
    const PointerConfig config = make_random_config(n, rng);
    const auto t0 = Clock::now();
    std::uint64_t events = 0;
    for (int rep = 0; rep < 64; ++rep) {
      events += simulate_phase(config, Color::Blue, t, rng).stats.total_swaps;
    }
    const double elapsed = seconds_since(t0);
    std::printf("%6d %10.3f %12llu %14.3g\n", n, t, static_cast<unsigned long long>(events),
                events / elapsed);
  }
}

void bench_paths() {
  std::printf("\npath sampling: parallel option vs serial option\n");
  std::printf("%6s %12s %12s %9s\n", "n", "parallel[s]", "serial[s]", "speedup");
  for (int n : {24, 48}) {
    Rng rng(3, n);
    const PhaseGraph graph = build_phase_graph(make_random_config(n, rng), Color::Red);
    PathOptions options;
    options.gamma = 0.5;
    options.walks_per_source = 64;

    options.parallel = true;
    const auto t0 = Clock::now();
    const PathSystem a = build_path_system(graph, options, 7);
    const double par_s = seconds_since(t0);

    options.parallel = false;
    const auto t1 = Clock::now();
    const PathSystem b = build_path_system(graph, options, 7);
    const double ser_s = seconds_since(t1);

    std::printf("%6d %12.4f %12.4f %9.2f%s\n", n, par_s, ser_s, ser_s / par_s,
                a.node_visits == b.node_visits ? "" : "  (MISMATCH)");
  }
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp threads: %d\n\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled\n\n");
#endif
  bench_profiles();
  bench_simulation();
  bench_paths();
  return 0;
}
