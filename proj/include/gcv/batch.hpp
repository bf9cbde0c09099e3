#pragma once

// Batch kernels over many covariance matrices. The OpenMP versions write each
// result into its own slot, so they match the serial references exactly.

#include "gcv/covariance.hpp"
#include "gcv/entanglement.hpp"

#include <vector>

namespace gcv {

std::vector<SymplecticSpectrum> batch_symplectic_spectra(const std::vector<Mat>& matrices);
std::vector<SymplecticSpectrum> batch_symplectic_spectra_serial(const std::vector<Mat>& matrices);

std::vector<double> batch_log_negativity(const std::vector<CovarianceMatrix>& states, ModeSplit split);
std::vector<double> batch_log_negativity_serial(const std::vector<CovarianceMatrix>& states,
                                                ModeSplit split);

}  // namespace gcv
