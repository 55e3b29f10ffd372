// Serial vs OpenMP timings for the two parallel kernels.
// usage: rdd_bench [reps]

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "rdd/gen.hpp"
#include "rdd/oracle.hpp"

using namespace rdd;

namespace {

double best_of(int reps, const std::function<void()>& prepare, const std::function<void()>& run) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    prepare();
    const auto t0 = std::chrono::steady_clock::now();
    run();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-40s %12.6f %12.6f %8.2fx\n", name, serial, parallel, parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  const int reps = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads %d, best of %d\n", omp_get_max_threads(), reps);
  std::printf("%-40s %12s %12s %9s\n", "kernel", "serial s", "parallel s", "speedup");

  gen::RandomParams p;
  p.n = 2000;
  p.k = 64;
  p.density = 0.5;
  p.extra_edge_prob = 0.02;
  const InstanceData data = gen::gen_random(p, 9).to_data();
  // distance rows are cached per instance, so each run gets a fresh one
  std::optional<Instance> fresh;
  auto rebuild = [&] { fresh = Instance::build(data); };
  const double ds = best_of(reps, rebuild, [&] { precompute_distances(*fresh, Execution::serial); });
  const double dp = best_of(reps, rebuild, [&] { precompute_distances(*fresh, Execution::parallel); });
  row("precompute_distances n=2000 k=64", ds, dp);

  for (Objective obj : {Objective::time, Objective::energy}) {
    for (int k : {10, 13, 16}) {
      gen::RandomParams q;
      q.n = 12;
      q.k = k;
      q.density = 0.9;
      const Instance inst = gen::gen_random(q, 100 + k);
      oracle::Guard g;
      g.override_guard = true;
      double vs = 0, vp = 0;
      const double ss = best_of(reps, [] {}, [&] { vs = oracle::exact_single_copy(inst, obj, g, Execution::serial).value; });
      const double sp = best_of(reps, [] {}, [&] { vp = oracle::exact_single_copy(inst, obj, g, Execution::parallel).value; });
      char name[64];
      std::snprintf(name, sizeof name, "exact_single_copy %s n=12 k=%d", obj == Objective::time ? "time" : "energy", k);
      row(name, ss, sp);
      if (vs != vp) {
        std::printf("serial and parallel values differ: %.17g vs %.17g\n", vs, vp);
        return 1;
      }
    }
  }

  gen::ThreeDM no;
  no.n = 2;
  no.triples = {{1, 1, 1}, {1, 2, 2}, {2, 1, 2}};
  const Instance gadget = gen::gen_3dm_ddt(no, 2).instance;
  oracle::Guard g;
  g.override_guard = true;
  double vs = 0, vp = 0;
  const double ss = best_of(reps, [] {}, [&] { vs = oracle::exact_single_copy(gadget, Objective::time, g, Execution::serial).value; });
  const double sp = best_of(reps, [] {}, [&] { vp = oracle::exact_single_copy(gadget, Objective::time, g, Execution::parallel).value; });
  row("exact_single_copy 3DM no q=2 k=16", ss, sp);
  if (vs != vp) {
    std::printf("serial and parallel values differ: %.17g vs %.17g\n", vs, vp);
    return 1;
  }
  return 0;
}
