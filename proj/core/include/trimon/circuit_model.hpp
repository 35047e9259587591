#pragma once

// Static device parameters of the trimon: charging energies, mode frequencies,
// Kerr couplings, conditional transition bands and dispersive shifts.
//
// Every energy is stored as a linear frequency E/h in Hz. A coupling J_ij in
// this convention splits the two bands of a qubit by 2 J_ij, which is the
// quantity usually quoted as "J/pi" in MHz.

#include <array>
#include <optional>

#include "trimon/types.hpp"

namespace trimon {

namespace constants {
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / kTwoPi;
}  // namespace constants

/// Physical circuit inputs.
struct DeviceSpec {
  double ej_hz = 0.0;   ///< Josephson energy of each junction, E_J/h
  double ca_f = 0.0;    ///< diagonal shunt capacitance C_A
  double cb_f = 0.0;    ///< diagonal shunt capacitance C_B
  double ccp_f = 0.0;   ///< adjacent-node capacitance C_C' = C_C + C_J
  double flux = 0.0;    ///< loop flux in units of the flux quantum

  void validate() const;
};

struct ChargingEnergies {
  PerQubit<double> ec_hz{};  ///< E_CA, E_CB, E_CC

  double operator[](Qubit q) const { return ec_hz[index(q)]; }
};

struct ModeParams {
  PerQubit<double> frequency_hz{};  ///< uncoupled omega_i / 2 pi
  PerQubit<double> impedance_ohm{};
};

struct KerrCouplings {
  PerQubit<double> self_hz{};      ///< J_A, J_B, J_C
  PerPair<double> cross_hz{};      ///< J_AB, J_BC, J_CA
  PerQubit<double> beta_hz{};      ///< J_i + J_ij + J_ik
  PerQubit<double> alpha_hz{};     ///< anharmonicities (negative)

  double cross(Qubit a, Qubit b) const { return cross_hz[index(pair_of(a, b))]; }
};

/// Everything derived from a device: the inputs to the closed-form spectrum.
struct DerivedParams {
  double ej_hz = 0.0;
  ChargingEnergies charging;
  ModeParams modes;
  KerrCouplings kerr;
};

/// Conditional transition frequencies. conditional[q][s][t] is the frequency
/// of qubit q with its two partners (in cyclic order q+1, q+2) in states s, t.
struct TransitionTable {
  PerQubit<std::array<std::array<double, 2>, 2>> conditional{};

  /// Band frequency of A or B with qubit C in its ground state.
  double band(Qubit q, Band b) const;
  double upper(Qubit q) const { return band(q, Band::Upper); }
  double lower(Qubit q) const { return band(q, Band::Lower); }
};

struct CavityParams {
  double omega_bare_hz = 0.0;
  double g_hz = 0.0;       ///< qubit A - cavity coupling
  double kappa_hz = 0.0;
  double delta0_hz = 0.0;  ///< omega_A^u - omega_bare
  double delta1_hz = 0.0;  ///< delta0 + alpha_A
  double g_b_hz = 0.0;     ///< spurious couplings, carried as plain parameters
  double g_c_hz = 0.0;
};

struct DispersiveShifts {
  PerQubit<double> chi_hz{};
};

/// Occupation numbers (n_A, n_B, n_C).
using Occupation = std::array<int, 3>;

ChargingEnergies derive_charging_energies(const DeviceSpec& spec);

/// Inverse of derive_charging_energies for a given E_J.
DeviceSpec capacitances_from_charging_energies(double ej_hz, const ChargingEnergies& ec);

/// Charging energies that reproduce the given anharmonicities
/// (alpha_A = -E_CA/4, alpha_B = -E_CB/4, alpha_C = -E_CC).
ChargingEnergies charging_energies_from_anharmonicities(const PerQubit<double>& alpha_hz);

ModeParams derive_mode_params(double ej_hz, const ChargingEnergies& ec);

KerrCouplings derive_kerr_couplings(const ChargingEnergies& ec);

/// Full chain for a device at zero flux.
DerivedParams derive_params(const DeviceSpec& spec);
DerivedParams derive_params(double ej_hz, const ChargingEnergies& ec);

/// Second-order perturbative level energy E(n_A, n_B, n_C)/h, measured from E(0,0,0).
double perturbative_energy(const Occupation& n, const DerivedParams& params);

TransitionTable transition_bands(const DerivedParams& params);

/// Builds cavity parameters from the bare cavity and the derived spectrum
/// (delta0 from omega_A^u, delta1 from alpha_A).
CavityParams make_cavity(double omega_bare_hz, double g_hz, double kappa_hz,
                         const DerivedParams& params);
CavityParams make_cavity(double omega_bare_hz, double g_hz, double kappa_hz,
                         double omega_a_upper_hz, double alpha_a_hz);

/// Dispersive shifts of the three qubits. `j_ab_hz`/`j_ca_hz` default to the
/// couplings in `kerr` when not supplied.
DispersiveShifts dispersive_shifts(const CavityParams& cav, const KerrCouplings& kerr);
DispersiveShifts dispersive_shifts(const CavityParams& cav, double j_ab_hz, double j_ca_hz);

/// Qubit A - cavity coupling g that produces the given chi_A.
double coupling_from_chi_a(double chi_a_hz, double delta0_hz, double alpha_a_hz);

/// Qubit-level (two states per mode) Hamiltonian, parameterised by the
/// upper-band frequencies and the three pair couplings.
struct SpinModel {
  PerQubit<double> upper_hz{};  ///< omega_i with both partners in |0>
  PerPair<double> coupling_hz{};  ///< J_AB, J_BC, J_CA

  double coupling(Qubit a, Qubit b) const { return coupling_hz[index(pair_of(a, b))]; }

  /// omega_i - 2 beta_i, the single-qubit coefficient of sigma_z^i.
  double bare_term(Qubit q) const;

  /// Frequency of qubit q with the other two qubits in the given states.
  double conditional_frequency(Qubit q, const std::array<int, 3>& partner_states) const;

  /// Band frequency of A or B with C grounded.
  double band(Qubit q, Band b) const;

  /// Mean of the two band frequencies (C grounded).
  double mean_band(Qubit q) const;

  /// Diagonal energies over |ABC>, index 4a + 2b + c, ground state at 0.
  std::array<double, 8> energies() const;

  static SpinModel from_params(const DerivedParams& params);

  /// Measured device values: omega^u = (5.5585, 6.1470, 7.0180) GHz and
  /// J/pi = (201.2, 253.0, 232.0) MHz.
  static SpinModel measured_reference();
};

/// 8x8 diagonal spin Hamiltonian (Hz) over |ABC>, ground state shifted to 0.
Eigen::Matrix<double, 8, 8> spin_hamiltonian(const DerivedParams& params);
Eigen::Matrix<double, 8, 8> spin_hamiltonian(const SpinModel& model);

/// Index of |abc> in the 8-state computational basis.
constexpr int basis_index(int a, int b, int c) { return 4 * a + 2 * b + c; }

}  // namespace trimon
