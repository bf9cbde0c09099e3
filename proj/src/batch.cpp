#include "gcv/batch.hpp"

#include <exception>

namespace gcv {

namespace {

// Exceptions must not escape an OpenMP region; keep the first by index.
template <class F>
void parallel_for_each_index(std::ptrdiff_t n, F&& f) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<SymplecticSpectrum> batch_symplectic_spectra(const std::vector<Mat>& matrices) {
  std::vector<SymplecticSpectrum> out(matrices.size());
  parallel_for_each_index(static_cast<std::ptrdiff_t>(matrices.size()),
                          [&](std::size_t i) { out[i] = symplectic_eigenvalues(matrices[i]); });
  return out;
}

std::vector<SymplecticSpectrum> batch_symplectic_spectra_serial(const std::vector<Mat>& matrices) {
  std::vector<SymplecticSpectrum> out;
  out.reserve(matrices.size());
  for (const Mat& m : matrices) out.push_back(symplectic_eigenvalues(m));
  return out;
}

std::vector<double> batch_log_negativity(const std::vector<CovarianceMatrix>& states, ModeSplit split) {
  std::vector<double> out(states.size());
  parallel_for_each_index(static_cast<std::ptrdiff_t>(states.size()), [&](std::size_t i) {
    out[i] = log_negativity(states[i], split).log_negativity;
  });
  return out;
}

std::vector<double> batch_log_negativity_serial(const std::vector<CovarianceMatrix>& states,
                                                ModeSplit split) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const CovarianceMatrix& s : states) out.push_back(log_negativity(s, split).log_negativity);
  return out;
}

}  // namespace gcv
