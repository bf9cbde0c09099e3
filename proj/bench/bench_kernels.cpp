// Serial reference vs OpenMP kernels. Prints one line per kernel with the best
// of a few runs and checks both paths agree bit for bit.

#include "gcv/batch.hpp"
#include "gcv/measure_sim.hpp"
#include "gcv/witnesses.hpp"
#include "test_support.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace gcv;
using namespace gcv::testing;

namespace {

double best_of(int runs, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < runs; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-28s serial %9.4f s  omp %9.4f s  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  Rng rng(2024);

  std::vector<Mat> mats;
  std::vector<CovarianceMatrix> cms;
  for (int i = 0; i < 20000; ++i) {
    mats.push_back(random_cm_matrix(1 + i % 5, rng));
    cms.push_back(random_cm(2, rng));
  }

  {
    std::vector<SymplecticSpectrum> a, b;
    const double s = best_of(3, [&] { a = batch_symplectic_spectra_serial(mats); });
    const double p = best_of(3, [&] { b = batch_symplectic_spectra(mats); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].values == b[i].values;
    report("symplectic spectra x20000", s, p, same);
  }
  {
    std::vector<double> a, b;
    const double s = best_of(3, [&] { a = batch_log_negativity_serial(cms, {1, 1}); });
    const double p = best_of(3, [&] { b = batch_log_negativity(cms, {1, 1}); });
    report("log-negativity x20000", s, p, a == b);
  }
  {
    const CovarianceMatrix g = CovarianceMatrix::from_matrix(reference_matrix());
    std::vector<double> grid;
    for (int i = 0; i < 20001; ++i) grid.push_back(std::pow(10.0, -2.0 + 4.0 * i / 20000.0));
    DuanScanResult a, b;
    const double s = best_of(3, [&] { a = duan_scan_serial(g, grid); });
    const double p = best_of(3, [&] { b = duan_scan(g, grid); });
    report("Duan scan 2x20001", s, p, a.values == b.values && a.best_a == b.best_a);
  }
  {
    const CovarianceMatrix g = CovarianceMatrix::from_matrix(reference_matrix());
    const MeasurementPlan plan{Strategy::nine_kinds, 100000, 200, 7};
    StrategyReport a, b;
    const double s = best_of(1, [&] { a = simulate_strategy_serial(g, plan); });
    const double p = best_of(1, [&] { b = simulate_strategy(g, plan); });
    report("simulate nine, N=1e5 M=200", s, p, a.deviation == b.deviation);
  }
  return 0;
}
