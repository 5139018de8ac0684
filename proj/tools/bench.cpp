// Compares the OpenMP kernels against the serial reference on one build:
// level convergence + connection selection (inside build_multilevel) and
// stretch sampling. Outputs wall times and the speedup.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "bmlrp/experiments.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace bmlrp;
using h_clock = std::chrono::high_resolution_clock;

namespace {

double ms_since(h_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(h_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  uint64_t nodes = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2048;
  uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;
  const size_t samples = 500;

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled\n");
#endif
  std::printf("network: %llu nodes, seed %llu\n", static_cast<unsigned long long>(nodes),
              static_cast<unsigned long long>(seed));

  GenConfig gen;
  gen.node_count = nodes;
  gen.seed = seed;
  const PhysicalNetwork net = generate_network(gen);
  std::printf("largest component: %zu nodes, %zu links\n", net.nodes.size(), net.links.size());

  BuildOptions serial, parallel;
  serial.engine.parallel = false;
  parallel.engine.parallel = true;

  auto t0 = h_clock::now();
  const MultiLevelNetwork m_ser = build_multilevel(net, serial);
  const double build_ser = ms_since(t0);

  t0 = h_clock::now();
  const MultiLevelNetwork m_par = build_multilevel(net, parallel);
  const double build_par = ms_since(t0);

  t0 = h_clock::now();
  const StretchStats s_ser = measure_stretch(m_ser, samples, seed, /*parallel=*/false);
  const double stretch_ser = ms_since(t0);

  t0 = h_clock::now();
  const StretchStats s_par = measure_stretch(m_par, samples, seed, /*parallel=*/true);
  const double stretch_par = ms_since(t0);

  bool identical = m_ser.levels.size() == m_par.levels.size() &&
                   s_ser.mean_stretch == s_par.mean_stretch && s_ser.mean_hops == s_par.mean_hops;
  for (const auto& [ref, ln] : m_ser.levels) {
    identical = identical && m_par.has_level(ref) && m_par.level(ref).links == ln.links;
  }

  std::printf("\n%-22s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");
  std::printf("%-22s %12.1f %12.1f %8.2fx\n", "build_multilevel", build_ser, build_par,
              build_ser / build_par);
  std::printf("%-22s %12.1f %12.1f %8.2fx\n", "measure_stretch", stretch_ser, stretch_par,
              stretch_ser / stretch_par);
  std::printf("\nserial/openmp results identical: %s\n", identical ? "yes" : "NO");
  std::printf("mean stretch %.4f, mean hops %.2f\n", s_par.mean_stretch, s_par.mean_hops);
  return identical ? 0 : 1;
}
