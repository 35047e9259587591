#include "trimon/circuit_model.hpp"

#include <cmath>
#include <string>

#include "trimon/errors.hpp"

namespace trimon {

namespace {

constexpr double kChargeSquaredOverH =
    constants::kElementaryCharge * constants::kElementaryCharge / constants::kPlanck;

// hbar / e^2 in ohms.
constexpr double kImpedanceQuantum =
    constants::kHbar / (constants::kElementaryCharge * constants::kElementaryCharge);

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidInput(std::string(name) + " must be positive and finite, got " +
                       std::to_string(value));
  }
}

void require_zero_flux(double flux) {
  if (flux != 0.0) {
    throw InvalidInput("closed-form spectrum requires zero loop flux, got " +
                       std::to_string(flux));
  }
}

}  // namespace

std::string_view to_string(Qubit q) {
  switch (q) {
    case Qubit::A: return "A";
    case Qubit::B: return "B";
    case Qubit::C: return "C";
  }
  return "?";
}

std::string_view to_string(Band b) { return b == Band::Upper ? "upper" : "lower"; }

Qubit parse_qubit(std::string_view s) {
  if (s == "A" || s == "a") return Qubit::A;
  if (s == "B" || s == "b") return Qubit::B;
  if (s == "C" || s == "c") return Qubit::C;
  throw InvalidInput("unknown qubit label '" + std::string(s) + "'");
}

Band parse_band(std::string_view s) {
  if (s == "upper" || s == "u") return Band::Upper;
  if (s == "lower" || s == "l") return Band::Lower;
  throw InvalidInput("unknown band '" + std::string(s) + "'");
}

void DeviceSpec::validate() const {
  require_positive(ej_hz, "E_J");
  require_positive(ca_f, "C_A");
  require_positive(cb_f, "C_B");
  require_positive(ccp_f, "C_C'");
  if (!std::isfinite(flux)) throw InvalidInput("flux must be finite");
}

ChargingEnergies derive_charging_energies(const DeviceSpec& spec) {
  require_positive(spec.ca_f, "C_A");
  require_positive(spec.cb_f, "C_B");
  require_positive(spec.ccp_f, "C_C'");
  ChargingEnergies ec;
  ec.ec_hz[0] = kChargeSquaredOverH / (2.0 * (spec.ccp_f + spec.ca_f));
  ec.ec_hz[1] = kChargeSquaredOverH / (2.0 * (spec.ccp_f + spec.cb_f));
  ec.ec_hz[2] = kChargeSquaredOverH / (8.0 * spec.ccp_f);
  return ec;
}

DeviceSpec capacitances_from_charging_energies(double ej_hz, const ChargingEnergies& ec) {
  for (double e : ec.ec_hz) require_positive(e, "charging energy");
  DeviceSpec spec;
  spec.ej_hz = ej_hz;
  spec.ccp_f = kChargeSquaredOverH / (8.0 * ec.ec_hz[2]);
  spec.ca_f = kChargeSquaredOverH / (2.0 * ec.ec_hz[0]) - spec.ccp_f;
  spec.cb_f = kChargeSquaredOverH / (2.0 * ec.ec_hz[1]) - spec.ccp_f;
  if (spec.ca_f <= 0.0 || spec.cb_f <= 0.0) {
    throw InvalidInput("charging energies are not realisable with positive shunt capacitances");
  }
  return spec;
}

ChargingEnergies charging_energies_from_anharmonicities(const PerQubit<double>& alpha_hz) {
  for (double a : alpha_hz) {
    if (!(a < 0.0)) throw InvalidInput("anharmonicities must be negative");
  }
  ChargingEnergies ec;
  ec.ec_hz = {-4.0 * alpha_hz[0], -4.0 * alpha_hz[1], -alpha_hz[2]};
  return ec;
}

ModeParams derive_mode_params(double ej_hz, const ChargingEnergies& ec) {
  require_positive(ej_hz, "E_J");
  for (double e : ec.ec_hz) require_positive(e, "charging energy");
  ModeParams m;
  // Modes A and B see two junctions in series; mode C sees all four in parallel.
  m.frequency_hz[0] = std::sqrt(8.0 * ej_hz * ec.ec_hz[0]);
  m.frequency_hz[1] = std::sqrt(8.0 * ej_hz * ec.ec_hz[1]);
  m.frequency_hz[2] = std::sqrt(32.0 * ej_hz * ec.ec_hz[2]);
  m.impedance_ohm[0] = kImpedanceQuantum * std::sqrt(ec.ec_hz[0] / (2.0 * ej_hz));
  m.impedance_ohm[1] = kImpedanceQuantum * std::sqrt(ec.ec_hz[1] / (2.0 * ej_hz));
  m.impedance_ohm[2] = kImpedanceQuantum * std::sqrt(ec.ec_hz[2] / (8.0 * ej_hz));
  return m;
}

KerrCouplings derive_kerr_couplings(const ChargingEnergies& ec) {
  for (double e : ec.ec_hz) require_positive(e, "charging energy");
  const double ea = ec.ec_hz[0];
  const double eb = ec.ec_hz[1];
  const double ecc = ec.ec_hz[2];

  KerrCouplings k;
  k.self_hz = {ea / 8.0, eb / 8.0, ecc / 2.0};
  k.cross_hz[index(Pair::AB)] = std::sqrt(ea * eb) / 4.0;
  k.cross_hz[index(Pair::BC)] = std::sqrt(eb * ecc) / 2.0;
  k.cross_hz[index(Pair::CA)] = std::sqrt(ecc * ea) / 2.0;

  // beta_i = J_i + J_(i, first partner) + J_(i, second partner).
  for (int i = 0; i < 3; ++i) {
    const Qubit q = qubit_at(i);
    k.beta_hz[i] = k.self_hz[i] + k.cross(q, qubit_at((i + 1) % 3)) +
                   k.cross(q, qubit_at((i + 2) % 3));
  }
  k.alpha_hz = {-ea / 4.0, -eb / 4.0, -ecc};
  return k;
}

DerivedParams derive_params(double ej_hz, const ChargingEnergies& ec) {
  DerivedParams p;
  p.ej_hz = ej_hz;
  p.charging = ec;
  p.modes = derive_mode_params(ej_hz, ec);
  p.kerr = derive_kerr_couplings(ec);
  return p;
}

DerivedParams derive_params(const DeviceSpec& spec) {
  spec.validate();
  require_zero_flux(spec.flux);
  return derive_params(spec.ej_hz, derive_charging_energies(spec));
}

double perturbative_energy(const Occupation& n, const DerivedParams& params) {
  double e = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (n[i] < 0) throw InvalidInput("occupation numbers must be non-negative");
    const double ni = n[i];
    e += (params.modes.frequency_hz[i] - params.kerr.beta_hz[i]) * ni -
         params.kerr.self_hz[i] * ni * ni;
  }
  // Each unordered pair counted once with the factor 2.
  const auto& k = params.kerr;
  e -= 2.0 * k.cross_hz[index(Pair::AB)] * n[0] * n[1];
  e -= 2.0 * k.cross_hz[index(Pair::BC)] * n[1] * n[2];
  e -= 2.0 * k.cross_hz[index(Pair::CA)] * n[2] * n[0];
  return e;
}

double TransitionTable::band(Qubit q, Band b) const {
  const int lower = b == Band::Lower ? 1 : 0;
  switch (q) {
    case Qubit::A: return conditional[0][lower][0];  // partners (B, C)
    case Qubit::B: return conditional[1][0][lower];  // partners (C, A)
    case Qubit::C: break;
  }
  throw InvalidInput("bands are defined for qubits A and B only");
}

TransitionTable transition_bands(const DerivedParams& params) {
  const SpinModel model = SpinModel::from_params(params);
  TransitionTable table;
  for (int i = 0; i < 3; ++i) {
    const int p1 = (i + 1) % 3;
    const int p2 = (i + 2) % 3;
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) {
        std::array<int, 3> states{};
        states[p1] = s;
        states[p2] = t;
        table.conditional[i][s][t] = model.conditional_frequency(qubit_at(i), states);
      }
    }
  }
  return table;
}

CavityParams make_cavity(double omega_bare_hz, double g_hz, double kappa_hz,
                         double omega_a_upper_hz, double alpha_a_hz) {
  require_positive(kappa_hz, "kappa");
  CavityParams cav;
  cav.omega_bare_hz = omega_bare_hz;
  cav.g_hz = g_hz;
  cav.kappa_hz = kappa_hz;
  cav.delta0_hz = omega_a_upper_hz - omega_bare_hz;
  cav.delta1_hz = cav.delta0_hz + alpha_a_hz;
  return cav;
}

CavityParams make_cavity(double omega_bare_hz, double g_hz, double kappa_hz,
                         const DerivedParams& params) {
  const TransitionTable table = transition_bands(params);
  return make_cavity(omega_bare_hz, g_hz, kappa_hz, table.upper(Qubit::A),
                     params.kerr.alpha_hz[0]);
}

DispersiveShifts dispersive_shifts(const CavityParams& cav, double j_ab_hz, double j_ca_hz) {
  const double d0 = cav.delta0_hz;
  const double d1 = cav.delta1_hz;
  const double d_ab = d0 + 2.0 * j_ab_hz;
  const double d_ca = d0 + 2.0 * j_ca_hz;
  if (d0 == 0.0) throw ResonanceError("Delta0 = 0: qubit A upper band resonant with cavity");
  if (d1 == 0.0) throw ResonanceError("Delta1 = 0: qubit A 1-2 transition resonant with cavity");
  if (d_ab == 0.0) throw ResonanceError("Delta0 + 2 J_AB = 0: qubit A lower band resonant with cavity");
  if (d_ca == 0.0) throw ResonanceError("Delta0 + 2 J_CA = 0: qubit A (C excited) resonant with cavity");

  const double g2 = cav.g_hz * cav.g_hz;
  DispersiveShifts chi;
  chi.chi_hz[0] = g2 * (1.0 / d0 - 1.0 / d1);
  chi.chi_hz[1] = 0.5 * g2 * (1.0 / d0 - 1.0 / d_ab);
  chi.chi_hz[2] = 0.5 * g2 * (1.0 / d0 - 1.0 / d_ca);
  return chi;
}

DispersiveShifts dispersive_shifts(const CavityParams& cav, const KerrCouplings& kerr) {
  return dispersive_shifts(cav, kerr.cross_hz[index(Pair::AB)], kerr.cross_hz[index(Pair::CA)]);
}

double coupling_from_chi_a(double chi_a_hz, double delta0_hz, double alpha_a_hz) {
  const double d1 = delta0_hz + alpha_a_hz;
  if (delta0_hz == 0.0 || d1 == 0.0) throw ResonanceError("zero detuning while inverting chi_A");
  const double factor = 1.0 / delta0_hz - 1.0 / d1;
  const double g2 = chi_a_hz / factor;
  if (!(g2 >= 0.0)) throw InvalidInput("chi_A sign inconsistent with detunings");
  return std::sqrt(g2);
}

double SpinModel::bare_term(Qubit q) const {
  const int i = index(q);
  return upper_hz[i] - coupling(q, qubit_at((i + 1) % 3)) - coupling(q, qubit_at((i + 2) % 3));
}

double SpinModel::conditional_frequency(Qubit q, const std::array<int, 3>& states) const {
  const int i = index(q);
  double f = bare_term(q);
  for (int off = 1; off <= 2; ++off) {
    const int j = (i + off) % 3;
    f += (states[j] == 0 ? 1.0 : -1.0) * coupling(q, qubit_at(j));
  }
  return f;
}

double SpinModel::band(Qubit q, Band b) const {
  if (q == Qubit::C) throw InvalidInput("bands are defined for qubits A and B only");
  std::array<int, 3> states{};
  states[index(partner(q))] = b == Band::Lower ? 1 : 0;
  return conditional_frequency(q, states);
}

double SpinModel::mean_band(Qubit q) const {
  return 0.5 * (band(q, Band::Upper) + band(q, Band::Lower));
}

std::array<double, 8> SpinModel::energies() const {
  std::array<double, 8> e{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        const std::array<double, 3> z{a ? -1.0 : 1.0, b ? -1.0 : 1.0, c ? -1.0 : 1.0};
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) sum += bare_term(qubit_at(i)) * z[i];
        sum += coupling_hz[index(Pair::AB)] * z[0] * z[1];
        sum += coupling_hz[index(Pair::BC)] * z[1] * z[2];
        sum += coupling_hz[index(Pair::CA)] * z[2] * z[0];
        e[basis_index(a, b, c)] = -0.5 * sum;
      }
    }
  }
  const double ground = e[0];
  for (double& v : e) v -= ground;
  return e;
}

SpinModel SpinModel::from_params(const DerivedParams& params) {
  SpinModel m;
  m.coupling_hz = params.kerr.cross_hz;
  for (int i = 0; i < 3; ++i) {
    const Qubit q = qubit_at(i);
    const double bare = params.modes.frequency_hz[i] - 2.0 * params.kerr.beta_hz[i];
    m.upper_hz[i] = bare + params.kerr.cross(q, qubit_at((i + 1) % 3)) +
                    params.kerr.cross(q, qubit_at((i + 2) % 3));
  }
  return m;
}

SpinModel SpinModel::measured_reference() {
  SpinModel m;
  m.upper_hz = {5.5585e9, 6.1470e9, 7.0180e9};
  // Table values are J/pi; the linear-frequency coupling is half of that.
  m.coupling_hz = {201.2e6 / 2.0, 253.0e6 / 2.0, 232.0e6 / 2.0};
  return m;
}

Eigen::Matrix<double, 8, 8> spin_hamiltonian(const SpinModel& model) {
  const auto e = model.energies();
  Eigen::Matrix<double, 8, 8> h = Eigen::Matrix<double, 8, 8>::Zero();
  for (int i = 0; i < 8; ++i) h(i, i) = e[i];
  return h;
}

Eigen::Matrix<double, 8, 8> spin_hamiltonian(const DerivedParams& params) {
  return spin_hamiltonian(SpinModel::from_params(params));
}

}  // namespace trimon
