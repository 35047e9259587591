#pragma once

// Least-squares fit of a trimon-transmon avoided crossing. The transmon
// follows omega_T(flux) = omega_max sqrt|cos(pi * scale * flux)|.

#include <cstdint>
#include <vector>

#include "trimon/types.hpp"

namespace trimon {

struct CrossingPoint {
  double flux = 0.0;      ///< Phi_T / Phi_0
  double freq_hz = 0.0;
  int branch = 0;         ///< +1 upper, -1 lower, 0 unknown
};

struct CrossingDataset {
  std::vector<CrossingPoint> points;
  Qubit qubit = Qubit::A;
};

struct CrossingModel {
  double omega_max_hz = 0.0;
  double flux_scale = 1.0;
  double omega_q_hz = 0.0;
  double j_hz = 0.0;      ///< half the minimum splitting

  double transmon_hz(double flux) const;
  double branch_hz(double flux, int branch) const;

  /// Flux where the bare transmon meets the qubit (first one above zero flux).
  double degeneracy_flux() const;
};

struct CrossingFit {
  CrossingModel model;
  double rms_hz = 0.0;
  int evaluations = 0;
  std::vector<int> branches;  ///< labels used in the fit

  double j_over_pi_mhz() const { return 2.0 * model.j_hz / 1e6; }
};

/// Labels inferred from ordering where two points share a flux value (within
/// tol); other points keep their label, or get the nearer branch of the
/// initial guess when unlabeled.
std::vector<int> infer_branches(const CrossingDataset& data, double flux_tol = 1e-9);

CrossingFit fit_avoided_crossing(const CrossingDataset& data);

/// Both branches at each flux, with optional Gaussian frequency noise.
CrossingDataset synthetic_crossing(const CrossingModel& model, const std::vector<double>& fluxes,
                                   double noise_hz = 0.0, std::uint64_t seed = 0);

}  // namespace trimon
