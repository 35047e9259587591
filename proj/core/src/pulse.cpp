#include "trimon/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "trimon/errors.hpp"

namespace trimon {

namespace {

constexpr int kStates = 8;

int bit_of(int state, Qubit q) { return (state >> (2 - index(q))) & 1; }
int flip(int state, Qubit q) { return state ^ (1 << (2 - index(q))); }

// The four (ground, excited) pairs of `q`, ordered by the other two bits.
std::array<std::array<int, 2>, 4> pairs_of(Qubit q) {
  std::array<std::array<int, 2>, 4> out{};
  int n = 0;
  for (int k = 0; k < kStates; ++k) {
    if (bit_of(k, q) == 0) out[n++] = {k, flip(k, q)};
  }
  return out;
}

int c_grounded_index(Qubit target, int target_state, int partner_state) {
  std::array<int, 3> bits{};
  bits[index(target)] = target_state;
  bits[index(partner(target))] = partner_state;
  return basis_index(bits[0], bits[1], bits[2]);
}

double max_transition_detuning(const std::vector<DriveTone>& tones,
                               const std::array<double, 8>& e, const PerQubit<double>& frame) {
  double worst = 0.0;
  for (int q = 0; q < 3; ++q) {
    for (const auto& p : pairs_of(qubit_at(q))) worst = std::max(worst, std::abs(e[p[1]] - e[p[0]]));
  }
  for (const DriveTone& tone : tones) {
    if (tone.shape.amp_hz == 0.0) continue;
    const double delta = frame[index(tone.target)] - tone.shape.freq_hz;
    for (const auto& p : pairs_of(tone.target)) {
      worst = std::max(worst, std::abs(delta + e[p[1]] - e[p[0]]));
    }
  }
  return worst;
}

// exp(-i tau H) for the 2x2 Hermitian block [[e0, conj(c)], [c, e1]].
Matrix2cd block_exponential(double e0, double e1, cdouble c, double tau) {
  const double mean = 0.5 * (e0 + e1);
  const double half = 0.5 * (e0 - e1);
  const double norm = std::sqrt(half * half + std::norm(c));
  const double cs = std::cos(norm * tau);
  const double sn = norm > 0.0 ? std::sin(norm * tau) / norm : tau;
  const cdouble global = std::polar(1.0, -mean * tau);
  const cdouble mi(0.0, -1.0);
  Matrix2cd s;
  s(0, 0) = global * (cs + mi * sn * half);
  s(1, 1) = global * (cs - mi * sn * half);
  s(0, 1) = global * mi * sn * std::conj(c);
  s(1, 0) = global * mi * sn * c;
  return s;
}

}  // namespace

void PulseShape::validate() const {
  if (!(std::isfinite(amp_hz) && std::isfinite(total_s) && std::isfinite(flat_s) &&
        std::isfinite(rise_sigma_s) && std::isfinite(phase_rad) && std::isfinite(freq_hz))) {
    throw InvalidInput("pulse shape has non-finite fields");
  }
  if (amp_hz < 0.0) throw InvalidInput("pulse amplitude must be non-negative");
  if (rise_sigma_s < 0.0 || flat_s < 0.0) throw InvalidInput("pulse timing must be non-negative");
  if (total_s < flat_s) throw InvalidInput("pulse total duration shorter than its flat top");
  const double edge = edge_s();
  if (rise_sigma_s > 0.0 && edge < kEdgeSigmas * rise_sigma_s * (1.0 - 1e-9)) {
    throw InvalidInput("pulse edges shorter than " + std::to_string(kEdgeSigmas) +
                       " sigma; envelope would not vanish at the ends");
  }
}

PulseShape PulseShape::flat_top(double total_s, double rise_sigma_s) {
  PulseShape s;
  s.total_s = total_s;
  s.rise_sigma_s = rise_sigma_s;
  const double edge = kEdgeSigmas * rise_sigma_s;
  if (2.0 * edge > total_s) {
    s.rise_sigma_s = total_s / (2.0 * kEdgeSigmas);
    s.flat_s = 0.0;
  } else {
    s.flat_s = total_s - 2.0 * edge;
  }
  return s;
}

double envelope(const PulseShape& shape, double t) {
  if (t < 0.0 || t > shape.total_s) return 0.0;
  const double edge = shape.edge_s();
  const double sigma = shape.rise_sigma_s;
  double offset = 0.0;
  if (t < edge) {
    offset = edge - t;
  } else if (t > edge + shape.flat_s) {
    offset = t - edge - shape.flat_s;
  } else {
    return shape.amp_hz;
  }
  if (sigma == 0.0) return 0.0;
  return shape.amp_hz * std::exp(-0.5 * offset * offset / (sigma * sigma));
}

double envelope_area(const PulseShape& shape) {
  const double sigma = shape.rise_sigma_s;
  double area = shape.amp_hz * shape.flat_s;
  if (sigma > 0.0) {
    area += std::sqrt(kTwoPi) * sigma * shape.amp_hz *
            std::erf(shape.edge_s() / (std::sqrt(2.0) * sigma));
  }
  return area;
}

PerQubit<double> frame_frequencies(const SpinModel& model) {
  PerQubit<double> f{};
  f[0] = model.mean_band(Qubit::A);
  f[1] = model.mean_band(Qubit::B);
  f[2] = 0.5 * (model.conditional_frequency(Qubit::C, {0, 0, 0}) +
                model.conditional_frequency(Qubit::C, {1, 0, 0}));
  return f;
}

std::array<double, 8> rotating_frame_energies(const SpinModel& model) {
  const auto lab = model.energies();
  const auto frame = frame_frequencies(model);
  std::array<double, 8> e{};
  for (int k = 0; k < kStates; ++k) {
    double shift = 0.0;
    for (int q = 0; q < 3; ++q) shift += frame[q] * bit_of(k, qubit_at(q));
    e[k] = lab[k] - shift;
  }
  return e;
}

PropagatorResult propagate(const std::vector<DriveTone>& tones, const SpinModel& model,
                           const PropagationOptions& options) {
  if (!(options.dt_s > 0.0)) throw InvalidInput("time step must be positive");
  double duration = 0.0;
  for (const DriveTone& tone : tones) {
    tone.shape.validate();
    if (tone.start_s < 0.0) throw InvalidInput("tone start time must be non-negative");
    duration = std::max(duration, tone.end_s());
  }
  if (options.duration_s) {
    if (*options.duration_s < 0.0) throw InvalidInput("duration must be non-negative");
    duration = *options.duration_s;
  }

  const auto e = rotating_frame_energies(model);
  const auto frame = frame_frequencies(model);
  const double fastest = max_transition_detuning(tones, e, frame);
  if (fastest > 0.0 && options.dt_s > 1.0 / (20.0 * fastest)) {
    throw StepSizeError("time step " + std::to_string(options.dt_s) + " s does not resolve a " +
                        std::to_string(fastest) + " Hz detuning (need dt <= 1/(20 * detuning))");
  }

  const long steps = duration > 0.0 ? static_cast<long>(std::ceil(duration / options.dt_s - 1e-9)) : 0;
  const double dt = steps > 0 ? duration / static_cast<double>(steps) : options.dt_s;
  const double tau = kTwoPi * dt;

  std::vector<double> tone_delta(tones.size());
  for (std::size_t j = 0; j < tones.size(); ++j) {
    tone_delta[j] = frame[index(tones[j].target)] - tones[j].shape.freq_hz;
  }

  PerQubit<std::array<std::array<int, 2>, 4>> pairs{pairs_of(Qubit::A), pairs_of(Qubit::B),
                                                     pairs_of(Qubit::C)};

  // Steps are taken in the interaction picture of the static Hamiltonian, so
  // a resonant tone gives a constant coupling and only detuned terms rotate.
  Matrix8cd u = Matrix8cd::Identity();
  for (long n = 0; n < steps; ++n) {
    const double t = (static_cast<double>(n) + 0.5) * dt;
    PerQubit<cdouble> drive{};
    PerQubit<bool> active{false, false, false};
    for (std::size_t j = 0; j < tones.size(); ++j) {
      const DriveTone& tone = tones[j];
      const double amp = envelope(tone.shape, t - tone.start_s);
      if (amp == 0.0) continue;
      const double x = kTwoPi * tone_delta[j] * t + tone.shape.phase_rad;
      drive[index(tone.target)] += 0.5 * amp * std::polar(1.0, x);
      active[index(tone.target)] = true;
    }
    const int count = static_cast<int>(active[0]) + active[1] + active[2];
    if (count == 0) continue;

    auto coupling = [&](int q, const std::array<int, 2>& p) {
      return drive[q] * std::polar(1.0, kTwoPi * (e[p[1]] - e[p[0]]) * t);
    };
    if (count == 1) {
      const int q = active[0] ? 0 : (active[1] ? 1 : 2);
      for (const auto& p : pairs[q]) {
        const Matrix2cd s = block_exponential(0.0, 0.0, coupling(q, p), tau);
        const Eigen::Matrix<cdouble, 1, 8> r0 = u.row(p[0]);
        const Eigen::Matrix<cdouble, 1, 8> r1 = u.row(p[1]);
        u.row(p[0]) = s(0, 0) * r0 + s(0, 1) * r1;
        u.row(p[1]) = s(1, 0) * r0 + s(1, 1) * r1;
      }
    } else {
      Matrix8cd h = Matrix8cd::Zero();
      for (int q = 0; q < 3; ++q) {
        if (!active[q]) continue;
        for (const auto& p : pairs[q]) {
          const cdouble c = coupling(q, p);
          h(p[1], p[0]) += c;
          h(p[0], p[1]) += std::conj(c);
        }
      }
      Eigen::SelfAdjointEigenSolver<Matrix8cd> solver(h);
      const auto& vals = solver.eigenvalues();
      Vector8cd phases;
      for (int k = 0; k < kStates; ++k) phases(k) = std::polar(1.0, -vals(k) * tau);
      const Matrix8cd& v = solver.eigenvectors();
      u = (v * phases.asDiagonal() * v.adjoint()) * u;
    }
  }

  PropagatorResult result;
  result.U_interaction = u;
  result.U = u;
  for (int k = 0; k < kStates; ++k) result.U.row(k) *= std::polar(1.0, -kTwoPi * e[k] * duration);
  result.dt_s = dt;
  result.duration_s = duration;
  result.unitarity_error = unitarity_error(u);
  if (result.unitarity_error > 1e-6) {
    throw StepSizeError("propagator unitarity drift " + std::to_string(result.unitarity_error) +
                        " exceeds 1e-6; reduce the time step");
  }
  return result;
}

double resonant_rotation_angle(const PropagatorResult& result, Qubit target, Band band) {
  const int cond = band == Band::Lower ? 1 : 0;
  const int k0 = c_grounded_index(target, 0, cond);
  const int k1 = c_grounded_index(target, 1, cond);
  const auto& u = result.U_interaction;
  return 2.0 * std::atan2(std::abs(u(k1, k0)), u(k0, k0).real());
}

double off_band_leakage(const PropagatorResult& result, Qubit target, Band band) {
  const int other = band == Band::Lower ? 0 : 1;
  const auto& u = result.U_interaction;
  const int k0 = c_grounded_index(target, 0, other);
  const int k1 = c_grounded_index(target, 1, other);
  return std::max(std::norm(u(k1, k0)), std::norm(u(k0, k1)));
}

std::vector<DriveTone> tones_for(const NativePulse& pulse, const PulseShape& shape,
                                 const SpinModel& model, double start_s) {
  std::vector<DriveTone> out;
  auto emit = [&](Band b) {
    DriveTone tone;
    tone.target = pulse.target;
    tone.shape = shape;
    tone.shape.freq_hz = model.band(pulse.target, b);
    tone.start_s = start_s;
    out.push_back(tone);
  };
  if (pulse.both_bands) {
    emit(Band::Upper);
    emit(Band::Lower);
  } else {
    emit(pulse.band);
  }
  return out;
}

PulseShape calibrate(const CalibrationRequest& request, const SpinModel& model) {
  if (request.target == Qubit::C) throw InvalidInput("calibration targets qubit A or B");
  if (!(request.theta >= 0.0 && request.theta <= kTwoPi + 1e-12)) {
    throw InvalidInput("calibration angle must lie in [0, 2 pi]");
  }
  PulseShape shape = request.shape;
  shape.amp_hz = 0.0;
  if (request.theta == 0.0) return shape;

  PulseShape unit = shape;
  unit.amp_hz = 1.0;
  const double unit_area = envelope_area(unit);
  if (!(unit_area > 0.0)) throw CalibrationError("pulse template has zero area");

  NativePulse pulse;
  pulse.target = request.target;
  pulse.band = request.band;
  pulse.both_bands = request.both_bands;
  const Band measured = request.both_bands ? Band::Upper : request.band;

  auto angle_at = [&](double amp) {
    PulseShape s = shape;
    s.amp_hz = amp;
    const auto result = propagate(tones_for(pulse, s, model, 0.0), model,
                                  {request.dt_s, shape.total_s});
    const double raw = resonant_rotation_angle(result, request.target, measured);
    // The readout angle folds at 2 pi; pick the branch nearest the area estimate.
    const double estimate = kTwoPi * amp * unit_area;
    const double alt = 2.0 * kTwoPi - raw;
    return std::abs(alt - estimate) < std::abs(raw - estimate) ? alt : raw;
  };

  const double guess = request.theta / (kTwoPi * unit_area);
  double lo = 0.9 * guess;
  double hi = std::min(1.1 * guess, request.amp_max_hz);
  double th_lo = angle_at(lo);
  if (th_lo > request.theta) {
    lo = 0.0;
    th_lo = 0.0;
  }
  double th_hi = angle_at(hi);
  while (th_hi < request.theta) {
    if (hi >= request.amp_max_hz) {
      throw CalibrationError("rotation angle " + std::to_string(request.theta) +
                             " rad unreachable below " + std::to_string(request.amp_max_hz) + " Hz");
    }
    lo = hi;
    th_lo = th_hi;
    hi = std::min(2.0 * hi, request.amp_max_hz);
    th_hi = angle_at(hi);
  }

  double best = std::abs(th_lo - request.theta) < std::abs(th_hi - request.theta) ? lo : hi;
  double best_err = std::min(std::abs(th_lo - request.theta), std::abs(th_hi - request.theta));
  for (int it = 0; it < 80 && best_err > 0.1 * request.tolerance_rad; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double th = angle_at(mid);
    const double err = std::abs(th - request.theta);
    if (err < best_err) {
      best_err = err;
      best = mid;
    }
    if (th < request.theta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (best_err > request.tolerance_rad) {
    throw CalibrationError("calibration stalled " + std::to_string(best_err) + " rad from target");
  }
  shape.amp_hz = best;
  return shape;
}

double PulseTiming::duration_for(const NativePulse& pulse) const {
  for (const Entry& e : entries) {
    const bool band_match = pulse.both_bands ? !e.band.has_value()
                                             : (e.band.has_value() && *e.band == pulse.band);
    if (e.target == pulse.target && band_match && std::abs(std::abs(pulse.theta) - e.theta) < 1e-9) {
      return e.duration_s;
    }
  }
  return default_duration_s;
}

PulseTiming PulseTiming::reference() {
  PulseTiming t;
  t.entries = {
      {Qubit::A, Band::Lower, kPi, 241e-9},
      {Qubit::B, Band::Lower, kPi, 497e-9},
      {Qubit::B, Band::Upper, 0.5 * kPi, 281e-9},
      {Qubit::B, std::nullopt, 0.5 * kPi, 281e-9},
      {Qubit::A, Band::Upper, 0.5 * kPi, 152e-9},
      {Qubit::A, std::nullopt, 0.25 * kPi, 108e-9},
  };
  return t;
}

std::vector<DriveTone> to_tones(const std::vector<ScheduleEntry>& schedule, const SpinModel& model) {
  std::vector<DriveTone> out;
  for (const ScheduleEntry& entry : schedule) {
    if (entry.qubit == Qubit::C) throw InvalidInput("schedules drive qubits A and B only");
    PulseShape shape;
    shape.amp_hz = entry.amp_hz;
    shape.rise_sigma_s = entry.rise_s;
    shape.flat_s = entry.flat_s;
    shape.total_s = entry.total_s;
    shape.phase_rad = entry.phase_rad;
    NativePulse pulse;
    pulse.target = entry.qubit;
    pulse.both_bands = !entry.band.has_value();
    if (entry.band) pulse.band = *entry.band;
    for (DriveTone& tone : tones_for(pulse, shape, model, entry.start_s)) out.push_back(tone);
  }
  return out;
}

CircuitSimulation simulate_circuit(const GateSequence& seq, const SpinModel& model,
                                   const CircuitOptions& options) {
  CircuitSimulation sim;
  sim.lowered = lower(seq, options.ledger);

  using Key = std::tuple<int, int, bool, double, double>;
  std::map<Key, PulseShape> cache;
  double clock = 0.0;
  for (NativePulse pulse : sim.lowered.pulses) {
    double phi = pulse.phi;
    double theta = pulse.theta;
    if (theta < 0.0) {
      theta = -theta;
      phi += kPi;
    }
    const double total = options.timing.duration_for(pulse);
    const Key key{index(pulse.target), pulse.band == Band::Lower ? 1 : 0, pulse.both_bands, theta, total};
    auto it = cache.find(key);
    if (it == cache.end()) {
      CalibrationRequest req;
      req.shape = PulseShape::flat_top(total, options.timing.rise_sigma_s);
      req.target = pulse.target;
      req.band = pulse.band;
      req.both_bands = pulse.both_bands;
      req.theta = theta;
      req.dt_s = options.dt_s;
      req.amp_max_hz = options.amp_max_hz;
      it = cache.emplace(key, calibrate(req, model)).first;
    }
    PulseShape shape = it->second;
    // Drive axis phi + pi/2 produces the rotation convention of the gate layer.
    shape.phase_rad = std::remainder(phi + 0.5 * kPi, kTwoPi);
    for (const DriveTone& tone : tones_for(pulse, shape, model, clock)) sim.schedule.push_back(tone);

    ScheduleEntry entry;
    entry.qubit = pulse.target;
    if (!pulse.both_bands) entry.band = pulse.band;
    entry.amp_hz = shape.amp_hz;
    entry.rise_s = shape.rise_sigma_s;
    entry.flat_s = shape.flat_s;
    entry.total_s = shape.total_s;
    entry.phase_rad = shape.phase_rad;
    entry.start_s = clock;
    sim.entries.push_back(entry);

    clock += total + options.timing.gap_s;
  }

  PropagationOptions popts;
  popts.dt_s = options.dt_s;
  popts.duration_s = clock;
  sim.propagator = propagate(sim.schedule, model, popts);

  const Matrix4cd physical = restrict_c_grounded(sim.propagator.U_interaction);
  sim.logical = sim.lowered.final.correction() * physical * sim.lowered.initial.correction().adjoint();
  const Matrix4cd ideal = ideal_unitary(seq);
  sim.gate_fidelity = average_gate_fidelity(ideal, sim.logical);
  sim.propagator.fidelity_to_ideal = sim.gate_fidelity;

  double worst = 0.0;
  for (int j = 0; j < 4; ++j) {
    double tv = 0.0;
    for (int i = 0; i < 4; ++i) tv += std::abs(std::norm(sim.logical(i, j)) - std::norm(ideal(i, j)));
    const double lost = 1.0 - sim.logical.col(j).squaredNorm();
    worst = std::max(worst, 0.5 * (tv + std::max(lost, 0.0)));
  }
  sim.population_error = worst;
  return sim;
}

}  // namespace trimon
