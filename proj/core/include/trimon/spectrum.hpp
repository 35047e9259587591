#pragma once

// Exact diagonalization of the truncated three-mode circuit Hamiltonian in a
// harmonic-oscillator product basis. Used as an independent check on the
// closed-form perturbative spectrum.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "trimon/circuit_model.hpp"

namespace trimon {

enum class Potential {
  Harmonic,    ///< kinetic + quadratic potential only
  Quartic,     ///< fourth-order expansion of the junction energy (zero flux)
  FullCosine,  ///< trigonometric junction energy at the device flux
};

struct SpectrumOptions {
  int n_max = 6;  ///< Fock states kept per mode
  Potential potential = Potential::Quartic;
  /// Ground-state weight on the highest kept Fock level above which the
  /// truncation is flagged.
  double edge_tolerance = 1e-6;
  /// Also diagonalise at n_max + 1 when comparing against the perturbative levels.
  bool convergence_check = true;
};

struct SpectrumResult {
  std::vector<double> energies_hz;   ///< ascending, ground state at 0
  std::vector<Occupation> labels;    ///< dominant Fock component of each eigenvector
  double edge_population = 0.0;      ///< ground-state weight on the truncation edge
  bool truncation_warning = false;

  /// Energy of the lowest eigenstate whose dominant label is `n`.
  double energy_of(const Occupation& n) const;
};

/// Circuit Hamiltonian in Hz on the n_max^3 product basis |n_A n_B n_C>,
/// index (n_A * n_max + n_B) * n_max + n_C. Not shifted.
Eigen::MatrixXd circuit_hamiltonian(const DeviceSpec& spec, const SpectrumOptions& options);

SpectrumResult exact_spectrum(const DeviceSpec& spec, const SpectrumOptions& options = {});

/// Matrix elements <m| exp(i lambda (a + a^dagger)) |n> for m, n < dim, from
/// the closed-form displacement-operator expression (no basis truncation error).
Eigen::MatrixXcd displacement_elements(double lambda, int dim);

/// Side-by-side exact vs perturbative numbers for the low-lying manifold.
struct OracleComparison {
  PerQubit<double> exact_transition_hz{};
  PerQubit<double> perturbative_transition_hz{};
  PerPair<double> exact_zz_hz{};          ///< E(11) - E(10) - E(01) + E(00) for each pair
  PerPair<double> perturbative_zz_hz{};   ///< equals -2 J_ij
  bool truncation_warning = false;
  /// Largest relative change of any exact transition or ZZ shift when n_max
  /// is incremented by one; empty when the check is disabled.
  std::optional<double> increment_change;

  double max_transition_relative_error() const;
  double max_zz_relative_error() const;
};

OracleComparison compare_to_perturbative(const DeviceSpec& spec, const SpectrumOptions& options = {});

}  // namespace trimon
