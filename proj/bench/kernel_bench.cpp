// Serial reference vs OpenMP kernels. Prints one line per kernel with both
// timings, the speedup, and whether the outputs agree bit for bit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "mvdeg/bench.hpp"
#include "mvdeg/entropy.hpp"
#include "mvdeg/kron.hpp"
#include "mvdeg/synth.hpp"

using namespace mvdeg;

namespace {

double seconds(const std::function<void()>& f, int reps = 3) {
  using clock = std::chrono::steady_clock;
  f();
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-34s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  %s\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::stoul(argv[1]) : 20000;
  const std::size_t p = argc > 2 ? std::stoul(argv[2]) : 16;
  std::printf("threads=%d N=%zu p=%zu\n", max_threads(), n, p);

  const auto signal = gen_wgn(p, n, 42);
  const auto graph = build_complete_graph(p);

  {
    HopVector a, b;
    const double s = seconds([&] { a = apply_hop(signal, graph, 3, Execution::serial); });
    const double q = seconds([&] { b = apply_hop(signal, graph, 3, Execution::parallel); });
    report("apply_hop k=3", s, q, a.values == b.values && a.valid == b.valid);
  }
  {
    double a = 0, b = 0;
    const double s = seconds([&] { a = mvdeg_single_scale(signal, graph, 4, 6, Execution::serial).entropy; });
    const double q = seconds([&] { b = mvdeg_single_scale(signal, graph, 4, 6, Execution::parallel).entropy; });
    report("mvdeg_single_scale m=4 c=6", s, q, a == b);
  }
  {
    const auto small = gen_wgn(6, 2000, 7);
    double a = 0, b = 0;
    const double s = seconds([&] { a = classical_mvde(small, 4, 6, 1, kDefaultPatternCap, Execution::serial); }, 1);
    const double q = seconds([&] { b = classical_mvde(small, 4, 6, 1, kDefaultPatternCap, Execution::parallel); }, 1);
    report("classical_mvde N=2000 p=6 m=4", s, q, a == b);
  }
  {
    const auto conds = correlation_degree_conditions(3, 2000);
    const EmbeddingConfig cfg{4, 6, 10};
    EnsembleReport a, b;
    const double s = seconds([&] { a = run_noise_experiment(conds, GraphPolicy::theoretical, cfg, 8, 3, Execution::serial); }, 1);
    const double q = seconds([&] { b = run_noise_experiment(conds, GraphPolicy::theoretical, cfg, 8, 3, Execution::parallel); }, 1);
    bool same = a.curves.size() == b.curves.size();
    for (std::size_t i = 0; same && i < a.curves.size(); ++i) {
      for (std::size_t s2 = 0; s2 < a.curves[i].records.size(); ++s2) {
        same = same && a.curves[i].records[s2].mean == b.curves[i].records[s2].mean;
      }
    }
    report("ensemble 5 conditions x 8", s, q, same);
  }
  return 0;
}
