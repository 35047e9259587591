#include "trimon/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "trimon/errors.hpp"

namespace trimon {

using nlohmann::json;

namespace {

constexpr double kDeg = kPi / 180.0;

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  return number(j, key, where);
}

Qubit qubit_field(const json& j, const char* key, const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  try {
    return parse_qubit(v.get<std::string>());
  } catch (const InvalidInput& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Band band_field(const json& j, const std::string& where) {
  const json& v = require(j, "band", where);
  try {
    return parse_band(v.get<std::string>());
  } catch (const std::exception& e) {
    throw ConfigError(where + ".band: " + e.what());
  }
}

DeviceConfig parse_device(const json& j) {
  const std::string where = "device";
  DeviceConfig d;
  d.spec.ej_hz = number(j, "ej_ghz", where) * 1e9;
  d.spec.flux = number_or(j, "flux", 0.0, where);
  if (j.contains("alpha_mhz")) {
    const json& a = j.at("alpha_mhz");
    if (!a.is_array() || a.size() != 3) throw ConfigError("device.alpha_mhz must list three values");
    PerQubit<double> alpha{};
    for (int i = 0; i < 3; ++i) alpha[i] = a.at(i).get<double>() * 1e6;
    d.alpha_hz = alpha;
    try {
      const ChargingEnergies ec = charging_energies_from_anharmonicities(alpha);
      const DeviceSpec caps = capacitances_from_charging_energies(d.spec.ej_hz, ec);
      d.spec.ca_f = caps.ca_f;
      d.spec.cb_f = caps.cb_f;
      d.spec.ccp_f = caps.ccp_f;
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("device.alpha_mhz: ") + e.what());
    }
  } else {
    d.spec.ca_f = number(j, "ca_ff", where) * 1e-15;
    d.spec.cb_f = number(j, "cb_ff", where) * 1e-15;
    d.spec.ccp_f = number(j, "ccp_ff", where) * 1e-15;
  }
  try {
    d.spec.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  return d;
}

CavityConfig parse_cavity(const json& j) {
  const std::string where = "cavity";
  CavityConfig c;
  c.omega_bare_hz = number(j, "omega_bare_ghz", where) * 1e9;
  c.g_hz = number_or(j, "g_mhz", 0.0, where) * 1e6;
  c.kappa_hz = number_or(j, "kappa_mhz", 3.9, where) * 1e6;
  c.g_b_hz = number_or(j, "g_b_mhz", 0.0, where) * 1e6;
  c.g_c_hz = number_or(j, "g_c_mhz", 0.0, where) * 1e6;
  if (!(c.kappa_hz > 0.0)) throw ConfigError("cavity.kappa_mhz must be positive");
  return c;
}

MeasurementModel parse_readout(const json& j) {
  const std::string where = "readout";
  MeasurementModel m = MeasurementModel::default_overlap();
  if (j.contains("mu_v")) {
    const json& mu = j.at("mu_v");
    if (!mu.is_array() || mu.size() != 4) throw ConfigError("readout.mu_v must list four means");
    std::array<double, 4> v{};
    for (int s = 0; s < 4; ++s) v[s] = mu.at(s).get<double>();
    m = MeasurementModel::from_means(v, m.sigma, m.vth_plus, m.vth_minus);
  } else {
    m.beta0 = number_or(j, "beta0_v", m.beta0, where);
    m.beta1 = number_or(j, "beta1_v", m.beta1, where);
    m.beta2 = number_or(j, "beta2_v", m.beta2, where);
    m.beta12 = number_or(j, "beta12_v", m.beta12, where);
  }
  m.sigma = number_or(j, "sigma_v", 0.5, where);
  m.vth_plus = number_or(j, "vth_plus_v", 1.5, where);
  m.vth_minus = number_or(j, "vth_minus_v", -1.5, where);
  if (j.contains("herald")) m.herald = j.at("herald").get<bool>();
  m.p_therm = number_or(j, "p_therm", 0.0, where);
  try {
    m.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("readout: ") + e.what());
  }
  return m;
}

PulseConfig parse_pulses(const json& j) {
  const std::string where = "pulses";
  PulseConfig p;
  if (j.contains("model")) {
    const std::string src = j.at("model").get<std::string>();
    if (src == "measured") {
      p.source = SpinSource::Measured;
    } else if (src == "derived") {
      p.source = SpinSource::Derived;
    } else {
      throw ConfigError("pulses.model must be 'measured' or 'derived'");
    }
  }
  p.dt_s = number_or(j, "dt_ps", 10.0, where) * 1e-12;
  p.rise_sigma_s = number_or(j, "rise_ns", 10.0, where) * 1e-9;
  p.gap_s = number_or(j, "gap_ns", 0.0, where) * 1e-9;
  p.amp_max_hz = number_or(j, "amp_max_mhz", 100.0, where) * 1e6;
  if (!(p.dt_s > 0.0)) throw ConfigError("pulses.dt_ps must be positive");
  return p;
}

TomographyConfig parse_tomography(const json& j) {
  TomographyConfig t;
  if (j.contains("state")) t.state = j.at("state").get<std::string>();
  if (j.contains("shots")) t.shots = j.at("shots").get<std::size_t>();
  if (j.contains("bootstrap")) t.bootstrap = j.at("bootstrap").get<int>();
  if (j.contains("restarts")) t.restarts = j.at("restarts").get<int>();
  if (j.contains("pulse_level")) t.pulse_level = j.at("pulse_level").get<bool>();
  return t;
}

CrossingConfig parse_crossing(const json& j, const std::string& base_dir) {
  const std::string where = "crossing";
  CrossingConfig c;
  if (j.contains("qubit")) c.qubit = qubit_field(j, "qubit", where);
  if (j.contains("points")) {
    for (const json& p : j.at("points")) {
      c.points.push_back({number(p, "flux", where + ".points"), number(p, "freq_ghz", where + ".points") * 1e9,
                          p.contains("branch") ? p.at("branch").get<int>() : 0});
    }
  } else if (j.contains("csv")) {
    std::filesystem::path path = j.at("csv").get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    c.points = read_crossing_csv(path.string());
  } else if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    const std::string sw = where + ".synthetic";
    CrossingModel m;
    m.omega_max_hz = number(s, "omega_max_ghz", sw) * 1e9;
    m.flux_scale = number_or(s, "flux_scale", 1.0, sw);
    m.omega_q_hz = number(s, "omega_q_ghz", sw) * 1e9;
    m.j_hz = 0.5 * number(s, "j_over_pi_mhz", sw) * 1e6;
    c.synthetic = m;
    const double lo = number(s, "flux_min", sw);
    const double hi = number(s, "flux_max", sw);
    const int n = static_cast<int>(number_or(s, "n_flux", 41, sw));
    if (n < 3 || !(hi > lo)) throw ConfigError(sw + ": need n_flux >= 3 and flux_max > flux_min");
    for (int i = 0; i < n; ++i) c.synthetic_flux.push_back(lo + (hi - lo) * i / (n - 1));
    c.noise_hz = number_or(s, "noise_mhz", 0.0, sw) * 1e6;
  } else {
    throw ConfigError("crossing needs one of 'points', 'csv' or 'synthetic'");
  }
  return c;
}

}  // namespace

DerivedParams DeviceConfig::derive() const { return derive_params(spec); }

GateSequence parse_circuit(const json& j) {
  if (!j.is_array()) throw ConfigError("circuit must be a list of operations");
  GateSequence seq;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& op = j.at(i);
    const std::string where = "circuit[" + std::to_string(i) + "]";
    const json& kind_field = require(op, "op", where);
    const std::string kind = kind_field.get<std::string>();
    try {
      if (kind == "crot") {
        seq.then(GateOp::crot(qubit_field(op, "target", where), band_field(op, where),
                              number_or(op, "phi_deg", 0.0, where) * kDeg,
                              number(op, "theta_deg", where) * kDeg));
      } else if (kind == "rot") {
        seq.then(GateOp::rot(qubit_field(op, "target", where), number_or(op, "phi_deg", 0.0, where) * kDeg,
                             number(op, "theta_deg", where) * kDeg));
      } else if (kind == "cnot") {
        const Qubit target = qubit_field(op, "target", where);
        if (op.contains("control") && qubit_field(op, "control", where) != partner(target)) {
          throw ConfigError(where + ": control must be the other qubit of the AB pair");
        }
        seq.then(GateOp::cnot(partner(target), target));
      } else if (kind == "swap") {
        seq.then(swap_sequence());
      } else if (kind == "transfer") {
        seq.then(transfer_sequence());
      } else {
        throw ConfigError(where + ": unknown op '" + kind + "'");
      }
    } catch (const InvalidInput& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return seq;
}

std::vector<ScheduleEntry> parse_schedule(const json& j) {
  if (!j.is_array()) throw ConfigError("schedule must be a list of pulses");
  std::vector<ScheduleEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& p = j.at(i);
    const std::string where = "schedule[" + std::to_string(i) + "]";
    ScheduleEntry e;
    e.qubit = qubit_field(p, "qubit", where);
    const std::string band = require(p, "band", where).get<std::string>();
    if (band != "both") {
      try {
        e.band = parse_band(band);
      } catch (const InvalidInput& err) {
        throw ConfigError(where + ".band: " + err.what());
      }
    }
    e.amp_hz = number(p, "amp_mhz", where) * 1e6;
    e.rise_s = number_or(p, "rise_ns", 0.0, where) * 1e-9;
    e.total_s = number(p, "total_ns", where) * 1e-9;
    e.flat_s = number_or(p, "flat_ns", e.total_s * 1e9, where) * 1e-9;
    e.phase_rad = number_or(p, "phase_deg", 0.0, where) * kDeg;
    e.start_s = number_or(p, "start_ns", 0.0, where) * 1e-9;
    out.push_back(e);
  }
  return out;
}

std::vector<CrossingPoint> read_crossing_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open crossing data '" + path + "'");
  std::vector<CrossingPoint> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.find_first_of("abcdefghijklmnopqrstuvwxyz") != std::string::npos) continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cols;
    while (std::getline(ss, cell, ',')) {
      try {
        cols.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("bad number '" + cell + "' in " + path);
      }
    }
    if (cols.size() < 2) throw ConfigError("crossing rows need flux,freq_hz in " + path);
    out.push_back({cols[0], cols[1], cols.size() > 2 ? static_cast<int>(cols[2]) : 0});
  }
  return out;
}

RunConfig parse_config(const json& j, const std::string& base_dir) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig cfg;
  try {
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("device")) cfg.device = parse_device(j.at("device"));
    if (j.contains("cavity")) cfg.cavity = parse_cavity(j.at("cavity"));
    if (j.contains("readout")) cfg.readout = parse_readout(j.at("readout"));
    if (j.contains("pulses")) cfg.pulses = parse_pulses(j.at("pulses"));
    if (j.contains("circuit")) cfg.circuit = parse_circuit(j.at("circuit"));
    if (j.contains("schedule")) cfg.schedule = parse_schedule(j.at("schedule"));
    if (j.contains("tomography")) cfg.tomography = parse_tomography(j.at("tomography"));
    if (j.contains("crossing")) cfg.crossing = parse_crossing(j.at("crossing"), base_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("cannot parse '" + path + "': " + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path().string());
}

SpinModel spin_model(const RunConfig& cfg) {
  if (cfg.pulses.source == SpinSource::Measured) return SpinModel::measured_reference();
  if (!cfg.device) throw ConfigError("pulses.model = derived needs a device section");
  return SpinModel::from_params(cfg.device->derive());
}

}  // namespace trimon
