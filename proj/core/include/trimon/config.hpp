#pragma once

// Run configuration read from JSON. Sections: device, cavity, readout,
// pulses, circuit, schedule, tomography, crossing; plus a top-level seed.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trimon/circuit_model.hpp"
#include "trimon/crossing.hpp"
#include "trimon/gates.hpp"
#include "trimon/pulse.hpp"
#include "trimon/readout.hpp"

namespace trimon {

struct DeviceConfig {
  DeviceSpec spec;
  /// Present when the device was given by anharmonicities instead of capacitances.
  std::optional<PerQubit<double>> alpha_hz;

  DerivedParams derive() const;
};

struct CavityConfig {
  double omega_bare_hz = 7.23e9;
  double g_hz = 0.0;
  double kappa_hz = 3.9e6;
  double g_b_hz = 0.0;
  double g_c_hz = 0.0;
};

/// Which spin-level model drives pulse simulations.
enum class SpinSource { Measured, Derived };

struct PulseConfig {
  SpinSource source = SpinSource::Measured;
  double dt_s = 10e-12;
  double rise_sigma_s = 10e-9;
  double gap_s = 0.0;
  double amp_max_hz = 100e6;
};

struct TomographyConfig {
  std::string state = "bell";  ///< bell | swap_initial | swap_final | transfer_initial | transfer_final
  std::size_t shots = 10000;
  int bootstrap = 100;
  int restarts = 5;
  bool pulse_level = true;
};

struct CrossingConfig {
  std::vector<CrossingPoint> points;      ///< from "points" or "csv"
  std::optional<CrossingModel> synthetic; ///< generate data instead
  std::vector<double> synthetic_flux;
  double noise_hz = 0.0;
  Qubit qubit = Qubit::A;
};

struct RunConfig {
  std::optional<std::uint64_t> seed;
  std::optional<DeviceConfig> device;
  std::optional<CavityConfig> cavity;
  MeasurementModel readout = MeasurementModel::default_overlap();
  PulseConfig pulses;
  std::optional<GateSequence> circuit;
  std::optional<std::vector<ScheduleEntry>> schedule;
  TomographyConfig tomography;
  std::optional<CrossingConfig> crossing;
};

/// Throws ConfigError on malformed or missing fields.
RunConfig parse_config(const nlohmann::json& j, const std::string& base_dir = ".");
RunConfig load_config(const std::string& path);

/// List of {op, target, control, band, phi_deg, theta_deg}; op is one of
/// crot, rot, cnot, swap, transfer.
GateSequence parse_circuit(const nlohmann::json& j);

/// List of {qubit, band ("upper" | "lower" | "both"), amp_mhz, rise_ns, flat_ns, total_ns, phase_deg, start_ns}.
std::vector<ScheduleEntry> parse_schedule(const nlohmann::json& j);

/// Rows of flux,freq_hz[,branch] with a header line.
std::vector<CrossingPoint> read_crossing_csv(const std::string& path);

SpinModel spin_model(const RunConfig& cfg);

}  // namespace trimon
