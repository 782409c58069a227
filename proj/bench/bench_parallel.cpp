// Serial reference vs OpenMP kernels. Prints wall times and checks that both
// paths produce identical results.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include <omp.h>

#include "qmem/microscopic.hpp"
#include "qmem/montecarlo.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t trials = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 100000;
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n", threads);

  const qmem::CoherentInput input{1.0, -2.0};
  const qmem::StorageParams params;
  std::vector<qmem::TrialRecord> serial, parallel;
  const double ts = seconds([&] {
    serial = qmem::run_series_serial(input, params, qmem::Arm::P, trials, 42);
  });
  const double tp = seconds([&] {
    parallel = qmem::run_series(input, params, qmem::Arm::P, trials, 42, threads);
  });
  bool same = serial.size() == parallel.size();
  for (std::size_t i = 0; same && i < serial.size(); ++i) {
    same = serial[i].verification_outcome == parallel[i].verification_outcome &&
           serial[i].feedback_outcome == parallel[i].feedback_outcome;
  }
  std::printf("run_series     %8zu trials  serial %8.3f s  openmp %8.3f s  speedup %5.2fx  %s\n",
              trials, ts, tp, ts / tp, same ? "identical" : "MISMATCH");

  const auto base = qmem::micro::with_k_theory(qmem::micro::PhysicalParams{}, 1.0);
  std::vector<double> omega_t;
  for (double m : {3.25, 5.25, 10.25, 17.25, 32.25, 64.25}) {
    omega_t.push_back(2.0 * std::numbers::pi * m);
  }
  std::vector<qmem::micro::SweepPoint> s1, s2;
  const double ms = seconds([&] { s1 = qmem::micro::leakage_sweep_serial(base, omega_t); });
  const double mp = seconds([&] { s2 = qmem::micro::leakage_sweep(base, omega_t); });
  bool same_sweep = s1.size() == s2.size();
  for (std::size_t i = 0; same_sweep && i < s1.size(); ++i) {
    same_sweep = s1[i].leakage == s2[i].leakage && s1[i].k_eff == s2[i].k_eff;
  }
  std::printf("leakage_sweep  %8zu points  serial %8.3f s  openmp %8.3f s  speedup %5.2fx  %s\n",
              omega_t.size(), ms, mp, ms / mp, same_sweep ? "identical" : "MISMATCH");
  return same && same_sweep ? 0 : 1;
}
