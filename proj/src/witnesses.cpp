#include "gcv/witnesses.hpp"

#include "gcv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gcv {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// tr[Z gamma] for symmetric matrices.
double trace_product(const Mat& z, const Mat& g) { return z.cwiseProduct(g).sum(); }

double duan_value(double a, const Mat& g) {
  const double a2 = a * a;
  const double s = a > 0.0 ? 1.0 : -1.0;
  const double scale = 1.0 / (2.0 * (a2 + 1.0 / a2));
  return scale * (a2 * (g(0, 0) + g(1, 1)) + (g(2, 2) + g(3, 3)) / a2 +
                  2.0 * s * (g(0, 2) - g(1, 3)));
}

double refine_duan(double sign, double lo, double hi, const Mat& g, double& best_a) {
  // Golden section in t = ln|a|.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double t) { return duan_value(sign * std::exp(t), g); };
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double t = 0.5 * (lo + hi);
  best_a = sign * std::exp(t);
  return f(t);
}

void check_duan_input(const CovarianceMatrix& gamma, std::span<const double> grid) {
  if (gamma.modes() != 2) {
    throw Error(Errc::invalid_dimension, "the Duan family acts on two modes");
  }
  if (grid.empty()) throw Error(Errc::precondition, "empty Duan grid");
  for (double g : grid) {
    if (!(g > 0.0)) throw Error(Errc::domain, "Duan grid magnitudes must be positive");
  }
}

DuanScanResult finish_scan(const Mat& g, std::span<const double> grid,
                           std::vector<double> values) {
  DuanScanResult out;
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  const std::size_t gi = best / 2;
  const double sign = best % 2 == 0 ? 1.0 : -1.0;
  out.best_value = values[best];
  out.best_a = sign * grid[gi];

  // Bracket between the neighbouring grid magnitudes.
  const double lo = std::log(grid[gi > 0 ? gi - 1 : gi]);
  const double hi = std::log(grid[gi + 1 < grid.size() ? gi + 1 : gi]);
  if (hi > lo) {
    double a_ref = out.best_a;
    const double v = refine_duan(sign, lo, hi, g, a_ref);
    if (v < out.best_value) {
      out.best_value = v;
      out.best_a = a_ref;
    }
  }
  out.values = std::move(values);
  return out;
}

}  // namespace

double symplectic_trace(const Mat& a) { return symplectic_eigenvalues(a).sum(); }

std::string_view to_string(WitnessStatus s) noexcept {
  switch (s) {
    case WitnessStatus::global_witness: return "global_witness";
    case WitnessStatus::split_witness: return "split_witness";
    case WitnessStatus::not_witness: return "not_witness";
  }
  return "unknown";
}

WitnessCertificate certify_witness(const Mat& z, ModeSplit split, double tol) {
  const int n = modes_of(z);
  check_split(split, n);
  if (max_abs(z - z.transpose()) > tol::symmetry * std::max(1.0, max_abs(z))) {
    throw Error(Errc::symmetry_violation, "witness matrix is not symmetric");
  }
  const Mat zs = symmetrized(z);
  WitnessCertificate out;
  out.min_eigenvalue = min_eigenvalue(zs);
  if (out.min_eigenvalue < -tol) {
    out.message = "witness is not positive semidefinite: min eigenvalue " + fmt(out.min_eigenvalue);
    return out;
  }
  // Clip tiny negative eigenvalues before taking symplectic traces.
  Mat zp = zs;
  if (out.min_eigenvalue < 0.0) zp += (-out.min_eigenvalue) * Mat::Identity(zs.rows(), zs.cols());
  const std::vector<int> a_modes = mode_range(0, split.n_a);
  const std::vector<int> b_modes = mode_range(split.n_a, split.n_b);
  out.str_a = symplectic_trace(mode_submatrix(zp, a_modes));
  out.str_b = symplectic_trace(mode_submatrix(zp, b_modes));
  out.str_total = symplectic_trace(zp);
  if (out.str_total >= 0.5 - tol) {
    out.status = WitnessStatus::global_witness;
  } else if (out.str_sum() >= 0.5 - tol) {
    out.status = WitnessStatus::split_witness;
  } else {
    out.message = "symplectic trace condition fails: str[Z_A] + str[Z_B] = " + fmt(out.str_sum());
  }
  return out;
}

Witness Witness::from_matrix(const Mat& z, ModeSplit split, double tol) {
  WitnessCertificate cert = certify_witness(z, split, tol);
  if (!cert.certified()) {
    throw Error(Errc::certification_failed,
                cert.message + " (str[Z_A] = " + fmt(cert.str_a) + ", str[Z_B] = " +
                    fmt(cert.str_b) + ")");
  }
  return Witness(symmetrized(z), split, std::move(cert));
}

WitnessOutcome witness_value(const Witness& z, const GaussianState& state) {
  if (state.modes() != z.modes()) {
    throw Error(Errc::invalid_dimension, "witness acts on " + std::to_string(z.modes()) +
                                             " modes, state has " +
                                             std::to_string(state.modes()));
  }
  const CovarianceMatrix g = state.cm.in_convention(Convention::gamma);
  Vec d = state.displacement;
  if (state.cm.convention() == Convention::capital) d = sigma(state.modes()).transpose() * d;
  WitnessOutcome out;
  out.value = trace_product(z.matrix(), g.matrix());
  out.expectation_with_displacement = out.value + 2.0 * d.dot(z.matrix() * d);
  out.p_bound = out.value;
  out.logneg_lower_bound = out.value > 0.0 && out.value < 1.0 ? -std::log(out.value) : 0.0;
  return out;
}

WitnessOutcome witness_value(const Witness& z, const CovarianceMatrix& gamma) {
  return witness_value(z, GaussianState(gamma));
}

PSeparabilityEstimate p_separability_level(const CovarianceMatrix& gamma, ModeSplit split,
                                           std::span<const Witness> family) {
  if (family.empty()) throw Error(Errc::precondition, "empty witness family");
  check_split(split, gamma.modes());
  PSeparabilityEstimate out;
  out.p_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (family[i].split().n_a != split.n_a || family[i].split().n_b != split.n_b) {
      throw Error(Errc::invalid_dimension, "witness split does not match");
    }
    const double v = witness_value(family[i], gamma).value;
    if (v < out.p_min) {
      out.p_min = v;
      out.arg_min = i;
    }
  }
  return out;
}

bool is_p_separable(const CovarianceMatrix& gamma, ModeSplit split, double p) {
  check_split(split, gamma.modes());
  if (!ppt_sufficient(split)) {
    throw Error(Errc::precondition,
                "p-separability is decided by PPT only when one party has a single mode");
  }
  if (!(p > 0.0)) throw Error(Errc::domain, "p must be positive");
  const CmValidation v = validate_cm(gamma.matrix() / p, tol::uncertainty, gamma.convention());
  return v.ok() && is_ppt(*v.cm, split);
}

MinimalWitness minimal_witness(const CovarianceMatrix& gamma, ModeSplit split) {
  check_split(split, gamma.modes());
  const CovarianceMatrix g = gamma.in_convention(Convention::gamma);
  const Mat pt = partial_transpose_cm(g.matrix(), split);
  const WilliamsonForm w = williamson(pt);
  const int n = g.modes();
  const Mat& s = w.transform.matrix();

  // S pt S^T = diag(nu_1, nu_1, ..., nu_N, nu_N) sorted descending, so the
  // smallest mode is the last pair. Z' = 1/2 S^T Pi S gives tr[Z' pt] = nu_N.
  // For the two rows of S on that mode, det U_A + det U_B = 1, which makes
  // the str condition hold.
  const Mat rows = s.middleRows(2 * (n - 1), 2);
  Mat z = 0.5 * rows.transpose() * rows;
  z = partial_transpose_cm(z, split);  // undo the momentum flip (involution)

  WitnessCertificate raw = certify_witness(z, split);
  double m_min = w.spectrum.min();
  bool rescaled = false;
  if (!raw.certified()) {
    // Numerical shortfall only: scale up to reach the bound and report it.
    const double sum = raw.str_sum();
    if (raw.min_eigenvalue < -tol::certification || !(sum > 0.0)) {
      throw Error(Errc::certification_failed,
                  "minimal witness construction failed: " + raw.message);
    }
    const double factor = 0.5 / sum;
    z *= factor;
    m_min *= factor;
    rescaled = true;
  }
  return MinimalWitness{Witness::from_matrix(z, split), m_min, rescaled, std::move(raw)};
}

MinimalWitness minimal_witness_two_mode(const CovarianceMatrix& gamma, ModeSplit split) {
  if (gamma.modes() != 2) {
    throw Error(Errc::invalid_dimension, "minimal_witness_two_mode needs a two-mode CM");
  }
  return minimal_witness(gamma, split);
}

Witness duan_witness(double a) {
  if (a == 0.0 || !std::isfinite(a)) {
    throw Error(Errc::domain, "Duan parameter must be a nonzero finite number");
  }
  const double a2 = a * a;
  const double s = a > 0.0 ? 1.0 : -1.0;
  Mat z(4, 4);
  z << a2, 0, s, 0,
       0, a2, 0, -s,
       s, 0, 1.0 / a2, 0,
       0, -s, 0, 1.0 / a2;
  z /= 2.0 * (a2 + 1.0 / a2);
  return Witness::from_matrix(z, ModeSplit{1, 1});
}

std::vector<double> duan_default_grid() {
  constexpr int points = 401;
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = std::pow(10.0, -2.0 + 4.0 * i / (points - 1));
  return g;
}

DuanScanResult duan_scan_serial(const CovarianceMatrix& gamma, std::span<const double> grid) {
  check_duan_input(gamma, grid);
  const Mat g = gamma.in_convention(Convention::gamma).matrix();
  std::vector<double> values(2 * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[2 * i] = duan_value(grid[i], g);
    values[2 * i + 1] = duan_value(-grid[i], g);
  }
  return finish_scan(g, grid, std::move(values));
}

DuanScanResult duan_scan(const CovarianceMatrix& gamma, std::span<const double> grid) {
  check_duan_input(gamma, grid);
  const Mat g = gamma.in_convention(Convention::gamma).matrix();
  std::vector<double> values(2 * grid.size());
  const auto count = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    values[2 * u] = duan_value(grid[u], g);
    values[2 * u + 1] = duan_value(-grid[u], g);
  }
  // Reduction by index in finish_scan keeps the result order-independent.
  return finish_scan(g, grid, std::move(values));
}

}  // namespace gcv
