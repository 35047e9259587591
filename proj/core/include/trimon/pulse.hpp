#pragma once

// Time-domain simulation of multi-tone drives on the three-qubit ZZ
// Hamiltonian. Each qubit is a two-level system; the frame co-rotates with
// each qubit's mean band frequency, drive terms are kept in the rotating-wave
// approximation, and the propagator is a time-ordered product of exact
// exponentials of the midpoint drive Hamiltonian, taken in the interaction
// picture of the static ZZ part.

#include <optional>
#include <vector>

#include "trimon/circuit_model.hpp"
#include "trimon/gates.hpp"

namespace trimon {

/// Gaussian-edge flat-top envelope.
struct PulseShape {
  double amp_hz = 0.0;        ///< peak Rabi rate Omega / 2 pi
  double rise_sigma_s = 0.0;  ///< Gaussian edge width
  double flat_s = 0.0;        ///< flat-top duration
  double total_s = 0.0;       ///< total duration, two edges plus the flat top
  double phase_rad = 0.0;     ///< carrier phase
  double freq_hz = 0.0;       ///< carrier frequency

  double edge_s() const { return 0.5 * (total_s - flat_s); }
  void validate() const;

  /// Shape of the given total length with edges of kEdgeSigmas * sigma.
  static PulseShape flat_top(double total_s, double rise_sigma_s);
};

/// Edge length in units of sigma; keeps the envelope at both ends below 1e-4 of peak.
inline constexpr double kEdgeSigmas = 4.5;

double envelope(const PulseShape& shape, double t);

/// Closed-form area: amp * flat + sqrt(2 pi) * sigma * amp * erf(edge / (sqrt(2) sigma)).
double envelope_area(const PulseShape& shape);

struct DriveTone {
  Qubit target = Qubit::A;
  PulseShape shape;
  double start_s = 0.0;

  double end_s() const { return start_s + shape.total_s; }
};

struct PropagationOptions {
  double dt_s = 10e-12;
  std::optional<double> duration_s;  ///< defaults to the end of the last tone
};

struct PropagatorResult {
  Matrix8cd U;               ///< in the frame rotating at the mean band frequencies
  Matrix8cd U_interaction;   ///< with the static ZZ evolution removed
  double dt_s = 0.0;
  double duration_s = 0.0;
  double unitarity_error = 0.0;
  std::optional<double> fidelity_to_ideal;
};

/// Frame frequency of each qubit: the mean of its two bands (C grounded for A
/// and B; A-conditioned bands with B grounded for C).
PerQubit<double> frame_frequencies(const SpinModel& model);

/// Static energies in the rotating frame, Hz.
std::array<double, 8> rotating_frame_energies(const SpinModel& model);

PropagatorResult propagate(const std::vector<DriveTone>& tones, const SpinModel& model,
                           const PropagationOptions& options = {});

/// Rotation angle produced on the resonant two-level subspace of `target`
/// (partner fixed by `band`, C grounded), read from the interaction-frame propagator.
double resonant_rotation_angle(const PropagatorResult& result, Qubit target, Band band);

/// Worst excitation probability of `target` in the subspace the pulse should
/// not address (partner in the other state), C grounded.
double off_band_leakage(const PropagatorResult& result, Qubit target, Band band);

struct CalibrationRequest {
  PulseShape shape;        ///< amplitude ignored; phase and timing kept
  Qubit target = Qubit::A;
  Band band = Band::Upper;
  bool both_bands = false; ///< two tones of equal amplitude on both bands
  double theta = 0.0;      ///< target rotation angle, 0 <= theta <= 2 pi
  double dt_s = 10e-12;
  double amp_max_hz = 100e6;
  double tolerance_rad = 1e-4;
};

/// Bisection on amplitude until the simulated rotation angle matches theta.
PulseShape calibrate(const CalibrationRequest& request, const SpinModel& model);

/// Tones realising one native pulse with the given calibrated shape.
std::vector<DriveTone> tones_for(const NativePulse& pulse, const PulseShape& shape,
                                 const SpinModel& model, double start_s);

/// Pulse lengths used when lowering gate sequences onto drives.
struct PulseTiming {
  struct Entry {
    Qubit target;
    std::optional<Band> band;  ///< nullopt selects the two-tone pulse
    double theta;
    double duration_s;
  };
  std::vector<Entry> entries;
  double default_duration_s = 250e-9;
  double rise_sigma_s = 10e-9;
  double gap_s = 0.0;

  double duration_for(const NativePulse& pulse) const;

  /// Lengths of the demonstrated pulses: CNOT_BA 241 ns, CNOT_AB 497 ns,
  /// pi/2 on B 281 ns, pi/2 on A 152 ns, pi/4 on A (both bands) 108 ns.
  static PulseTiming reference();
};

/// One entry of a pulse schedule as it appears in schedule files.
struct ScheduleEntry {
  Qubit qubit = Qubit::A;
  std::optional<Band> band;  ///< nullopt: one tone on each band
  double amp_hz = 0.0;
  double rise_s = 0.0;
  double flat_s = 0.0;
  double total_s = 0.0;
  double phase_rad = 0.0;
  double start_s = 0.0;
};

std::vector<DriveTone> to_tones(const std::vector<ScheduleEntry>& schedule, const SpinModel& model);

struct CircuitSimulation {
  PropagatorResult propagator;
  LoweredSequence lowered;
  std::vector<DriveTone> schedule;
  Matrix4cd logical;          ///< C-grounded block in the logical frame
  double gate_fidelity = 1.0; ///< average gate fidelity against ideal_unitary
  /// Worst total-variation distance between simulated and ideal Z-basis
  /// populations over computational inputs. For a single conditional pulse
  /// this is its off-band leakage.
  double population_error = 0.0;
  std::vector<ScheduleEntry> entries;  ///< the calibrated schedule in file form
};

struct CircuitOptions {
  PulseTiming timing = PulseTiming::reference();
  double dt_s = 10e-12;
  double amp_max_hz = 100e6;
  FrameLedger ledger;
};

CircuitSimulation simulate_circuit(const GateSequence& seq, const SpinModel& model,
                                   const CircuitOptions& options = {});

}  // namespace trimon
