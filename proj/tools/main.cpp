// trimon: command-line front end.
//
//   trimon derive       --config dev.json [--format json|csv]
//   trimon spectrum     --config dev.json [--n-max 6] [--potential quartic|full_cosine|harmonic]
//   trimon simulate     [--config run.json] [--circuit bell] [--level gate|pulse] [--dt-ps 10]
//   trimon tomo         --config run.json --seed 7 [--shots 10000] [--state bell]
//   trimon fit-crossing --config run.json | --csv data.csv
//   trimon report       --out results/
//
// Exit codes: 0 success, 1 usage, 2 configuration, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trimon/config.hpp"
#include "trimon/errors.hpp"
#include "trimon/gates.hpp"
#include "trimon/pulse.hpp"
#include "trimon/serialize.hpp"
#include "trimon/spectrum.hpp"
#include "trimon/tomography.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trimon;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> shots;
  std::optional<double> dt_ps;
  std::string format = "json";

  int n_max = 6;
  std::string potential = "quartic";
  std::string circuit;
  std::string level = "pulse";
  std::string state;
  std::optional<int> bootstrap;
  std::optional<int> restarts;
  std::string csv;
  std::string in;
};

RunConfig load(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.seed) cfg.seed = o.seed;
  if (o.dt_ps) {
    if (!(*o.dt_ps > 0.0)) throw ConfigError("--dt-ps must be positive");
    cfg.pulses.dt_s = *o.dt_ps * 1e-12;
  }
  if (o.shots) cfg.tomography.shots = *o.shots;
  if (!o.state.empty()) cfg.tomography.state = o.state;
  if (o.bootstrap) cfg.tomography.bootstrap = *o.bootstrap;
  if (o.restarts) cfg.tomography.restarts = *o.restarts;
  return cfg;
}

const DeviceConfig& require_device(const RunConfig& cfg) {
  if (!cfg.device) throw ConfigError("this command needs a 'device' section (use --config)");
  return *cfg.device;
}

// Writes `name`.json (or .csv when requested and available) to --out, or to stdout.
void emit(const Options& o, const std::string& name, const json& j,
          const std::function<void(std::ostream&)>& csv = nullptr) {
  const bool as_csv = o.format == "csv" && csv;
  if (o.out.empty()) {
    if (as_csv) {
      csv(std::cout);
    } else {
      std::cout << j.dump(2) << '\n';
    }
    return;
  }
  fs::create_directories(o.out);
  const fs::path path = fs::path(o.out) / (name + (as_csv ? ".csv" : ".json"));
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write '" + path.string() + "'");
  if (as_csv) {
    csv(file);
  } else {
    file << j.dump(2) << '\n';
  }
  // Always keep the JSON form so that `report` can find it.
  if (as_csv) {
    std::ofstream(fs::path(o.out) / (name + ".json")) << j.dump(2) << '\n';
  }
  std::cout << path.string() << '\n';
}

int run_derive(const Options& o) {
  const RunConfig cfg = load(o);
  const DeviceConfig& dev = require_device(cfg);
  const DerivedParams params = dev.derive();
  std::optional<CavityParams> cavity;
  std::optional<DispersiveShifts> chi;
  if (cfg.cavity) {
    cavity = make_cavity(cfg.cavity->omega_bare_hz, cfg.cavity->g_hz, cfg.cavity->kappa_hz, params);
    cavity->g_b_hz = cfg.cavity->g_b_hz;
    cavity->g_c_hz = cfg.cavity->g_c_hz;
    chi = dispersive_shifts(*cavity, params.kerr);
  }
  json j = derived_to_json(params, cavity, chi);
  j["device"] = {{"ej_hz", dev.spec.ej_hz},
                 {"ca_f", dev.spec.ca_f},
                 {"cb_f", dev.spec.cb_f},
                 {"ccp_f", dev.spec.ccp_f},
                 {"flux", dev.spec.flux}};
  emit(o, "derive", j, [&](std::ostream& out) { write_derived_csv(out, j); });
  return kOk;
}

int run_spectrum(const Options& o) {
  const RunConfig cfg = load(o);
  const DeviceConfig& dev = require_device(cfg);
  SpectrumOptions opts;
  opts.n_max = o.n_max;
  if (o.potential == "quartic") {
    opts.potential = Potential::Quartic;
  } else if (o.potential == "full_cosine") {
    opts.potential = Potential::FullCosine;
  } else if (o.potential == "harmonic") {
    opts.potential = Potential::Harmonic;
  } else {
    throw ConfigError("--potential must be quartic, full_cosine or harmonic");
  }
  const OracleComparison cmp = compare_to_perturbative(dev.spec, opts);
  if (cmp.truncation_warning) {
    std::cerr << "warning: ground state reaches the truncation edge; increase --n-max\n";
  }
  emit(o, "spectrum", comparison_to_json(cmp, opts), [&](std::ostream& out) { write_comparison_csv(out, cmp); });
  return kOk;
}

GateSequence circuit_from(const Options& o, const RunConfig& cfg) {
  if (o.circuit.empty()) return cfg.circuit.value_or(GateSequence{});
  if (o.circuit == "empty") return {};
  if (o.circuit == "cnot_ba") return GateSequence{}.then(GateOp::cnot(Qubit::B, Qubit::A));
  if (o.circuit == "cnot_ab") return GateSequence{}.then(GateOp::cnot(Qubit::A, Qubit::B));
  if (o.circuit == "swap") return swap_sequence();
  if (o.circuit == "transfer") return transfer_sequence();
  try {
    return named_protocol(o.circuit).sequence;
  } catch (const InvalidInput&) {
    throw ConfigError("unknown --circuit '" + o.circuit + "'");
  }
}

int run_simulate(const Options& o) {
  const RunConfig cfg = load(o);
  json j;
  if (o.circuit.empty() && !cfg.circuit && cfg.schedule) {
    const SpinModel model = spin_model(cfg);
    const auto tones = to_tones(*cfg.schedule, model);
    const PropagatorResult r = propagate(tones, model, {cfg.pulses.dt_s, std::nullopt});
    j = {{"level", "schedule"},
         {"duration_s", r.duration_s},
         {"dt_s", r.dt_s},
         {"unitarity_error", r.unitarity_error},
         {"u_interaction", complex_matrix_to_json(r.U_interaction)},
         {"schedule", schedule_to_json(*cfg.schedule)}};
    emit(o, "simulate", j, [&](std::ostream& out) { write_envelope_csv(out, tones, 1e-9); });
    return kOk;
  }

  const GateSequence seq = circuit_from(o, cfg);
  const Matrix4cd ideal = ideal_unitary(seq);
  if (o.level == "gate") {
    const FramedUnitary f = apply_with_frame(seq);
    const Matrix4cd logical = f.logical();
    j = {{"level", "gate"},
         {"n_ops", seq.ops.size()},
         {"gate_fidelity", average_gate_fidelity(ideal, logical)},
         {"phase_insensitive_overlap", phase_insensitive_overlap(ideal, logical)},
         {"ledger", {{"zeta_a", f.ledger.zeta_a}, {"zeta_b", f.ledger.zeta_b}}},
         {"physical", complex_matrix_to_json(f.physical)},
         {"logical", complex_matrix_to_json(logical)},
         {"final_state", complex_vector_to_json(logical.col(0))}};
    emit(o, "simulate", j);
    return kOk;
  }
  if (o.level != "pulse") throw ConfigError("--level must be gate or pulse");

  CircuitOptions copts;
  copts.dt_s = cfg.pulses.dt_s;
  copts.amp_max_hz = cfg.pulses.amp_max_hz;
  copts.timing.rise_sigma_s = cfg.pulses.rise_sigma_s;
  copts.timing.gap_s = cfg.pulses.gap_s;
  const CircuitSimulation sim = simulate_circuit(seq, spin_model(cfg), copts);
  const Vector4cd out_state = sim.logical.col(0);
  j = {{"level", "pulse"},
       {"n_ops", seq.ops.size()},
       {"gate_fidelity", sim.gate_fidelity},
       {"population_error", sim.population_error},
       {"state_fidelity_from_00", state_overlap(ideal.col(0), out_state.normalized())},
       {"duration_s", sim.propagator.duration_s},
       {"dt_s", sim.propagator.dt_s},
       {"unitarity_error", sim.propagator.unitarity_error},
       {"ledger", {{"zeta_a", sim.lowered.final.zeta_a}, {"zeta_b", sim.lowered.final.zeta_b}}},
       {"logical", complex_matrix_to_json(sim.logical)},
       {"final_state", complex_vector_to_json(out_state)},
       {"schedule", schedule_to_json(sim.entries)}};
  emit(o, "simulate", j, [&](std::ostream& out) { write_envelope_csv(out, sim.schedule, 1e-9); });
  return kOk;
}

int run_tomo(const Options& o) {
  const RunConfig cfg = load(o);
  const TomographyConfig& tc = cfg.tomography;
  if (tc.shots > 0 && !cfg.seed) throw ConfigError("tomo needs a seed (config 'seed' or --seed)");
  const std::uint64_t seed = cfg.seed.value_or(0);

  Protocol protocol;
  try {
    protocol = named_protocol(tc.state);
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("tomography.state: ") + e.what());
  }
  Matrix4cd prep = ideal_unitary(protocol.sequence);
  if (tc.pulse_level) {
    CircuitOptions copts;
    copts.dt_s = cfg.pulses.dt_s;
    copts.amp_max_hz = cfg.pulses.amp_max_hz;
    copts.timing.rise_sigma_s = cfg.pulses.rise_sigma_s;
    copts.timing.gap_s = cfg.pulses.gap_s;
    prep = simulate_circuit(protocol.sequence, spin_model(cfg), copts).logical;
  }
  const MeasurementData data =
      run_tomography(TomographyInput::from_preparation(prep), cfg.readout, {tc.shots, seed});

  MleOptions mle;
  mle.restarts = tc.restarts;
  mle.seed = seed;
  TomographyResult result;
  bool converged = true;
  try {
    result = mle_reconstruct(data.f, mle);
  } catch (const ConvergenceError& e) {
    result = e.best();
    converged = false;
    std::cerr << "warning: " << e.what() << "; reporting the best estimate\n";
  }
  const Matrix4cd target = protocol.target * protocol.target.adjoint();
  result.fidelity = fidelity(target, result.rho);
  if (tc.shots > 0 && tc.bootstrap > 0) {
    MleOptions bs = mle;
    bs.restarts = 1;
    result.fidelity_std = bootstrap_fidelity(data, target, tc.bootstrap, seed + 1, bs).std;
  }

  json j = tomography_to_json(result, data);
  j["state"] = tc.state;
  j["pulse_level"] = tc.pulse_level;
  j["shots_per_setting"] = tc.shots;
  j["seed"] = seed;
  j["converged"] = converged;
  j["target"] = complex_vector_to_json(protocol.target);
  emit(o, "tomo", j, [&](std::ostream& out) { write_shots_csv(out, data.shots); });
  if (!o.out.empty() && !data.analytic) {
    std::vector<ShotRecord> all;
    for (const auto& s : data.shots) all.insert(all.end(), s.begin(), s.end());
    const auto mu = cfg.readout.means();
    const double span = 4.0 * cfg.readout.sigma;
    std::ofstream hist(fs::path(o.out) / "tomo_histogram.csv");
    write_histogram_csv(hist, histogram(all, 200, mu[3] - span, mu[0] + span));
  }
  return kOk;
}

int run_fit_crossing(const Options& o) {
  const RunConfig cfg = load(o);
  CrossingDataset data;
  if (!o.csv.empty()) {
    data.points = read_crossing_csv(o.csv);
  } else if (cfg.crossing) {
    data.qubit = cfg.crossing->qubit;
    if (cfg.crossing->synthetic) {
      if (cfg.crossing->noise_hz > 0.0 && !cfg.seed) {
        throw ConfigError("noisy synthetic crossing data need a seed");
      }
      data = synthetic_crossing(*cfg.crossing->synthetic, cfg.crossing->synthetic_flux,
                                cfg.crossing->noise_hz, cfg.seed.value_or(0));
      data.qubit = cfg.crossing->qubit;
    } else {
      data.points = cfg.crossing->points;
    }
  } else {
    throw ConfigError("fit-crossing needs --csv or a 'crossing' config section");
  }
  const CrossingFit fit = fit_avoided_crossing(data);
  json j = crossing_fit_to_json(fit);
  j["qubit"] = std::string(to_string(data.qubit));
  j["n_points"] = data.points.size();
  emit(o, "fit_crossing", j, [&](std::ostream& out) { write_crossing_csv(out, data, fit); });
  return kOk;
}

int run_report(const Options& o) {
  const std::string dir = o.in.empty() ? o.out : o.in;
  if (dir.empty()) throw ConfigError("report needs --in or --out pointing at earlier outputs");
  std::map<std::string, json> outputs;
  for (const char* name : {"derive", "spectrum", "simulate", "tomo", "fit_crossing"}) {
    const fs::path path = fs::path(dir) / (std::string(name) + ".json");
    if (!fs::exists(path)) continue;
    std::ifstream in(path);
    try {
      outputs[name] = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("cannot parse '" + path.string() + "': " + e.what());
    }
  }
  if (outputs.empty()) throw ConfigError("no command outputs found in '" + dir + "'");
  Options w = o;
  w.out = o.out.empty() ? dir : o.out;
  emit(w, "report", build_report(outputs));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trimon device, gate, readout and tomography toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "JSON configuration file");
  app.add_option("--seed", o.seed, "RNG seed for stochastic commands");
  app.add_option("--out", o.out, "output directory (stdout when omitted)");
  app.add_option("--shots", o.shots, "shots per tomography setting; 0 = infinite-shot limit");
  app.add_option("--dt-ps", o.dt_ps, "propagation time step in ps");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));

  auto* derive = app.add_subcommand("derive", "derived device parameters");
  auto* spectrum = app.add_subcommand("spectrum", "exact vs perturbative spectrum");
  spectrum->add_option("--n-max", o.n_max, "Fock states per mode");
  spectrum->add_option("--potential", o.potential, "quartic | full_cosine | harmonic");
  auto* simulate = app.add_subcommand("simulate", "gate- or pulse-level circuit simulation");
  simulate->add_option("--circuit", o.circuit,
                       "empty | cnot_ba | cnot_ab | swap | transfer | bell | swap_initial | swap_final | "
                       "transfer_initial | transfer_final");
  simulate->add_option("--level", o.level, "gate | pulse");
  auto* tomo = app.add_subcommand("tomo", "synthetic readout and state tomography");
  tomo->add_option("--state", o.state, "prepared protocol state");
  tomo->add_option("--bootstrap", o.bootstrap, "bootstrap resamples (0 disables)");
  tomo->add_option("--restarts", o.restarts, "simplex restarts");
  auto* crossing = app.add_subcommand("fit-crossing", "avoided-crossing fit");
  crossing->add_option("--csv", o.csv, "flux,freq_hz[,branch] data file");
  auto* report = app.add_subcommand("report", "aggregate earlier outputs");
  report->add_option("--in", o.in, "directory with earlier outputs (defaults to --out)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*derive) return run_derive(o);
    if (*spectrum) return run_spectrum(o);
    if (*simulate) return run_simulate(o);
    if (*tomo) return run_tomo(o);
    if (*crossing) return run_fit_crossing(o);
    if (*report) return run_report(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
