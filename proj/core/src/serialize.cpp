#include "trimon/serialize.hpp"

#include <iomanip>

#include "trimon/errors.hpp"

namespace trimon {

using nlohmann::json;

namespace {

json per_qubit(const PerQubit<double>& v) { return {{"a", v[0]}, {"b", v[1]}, {"c", v[2]}}; }
json per_pair(const PerPair<double>& v) { return {{"ab", v[0]}, {"bc", v[1]}, {"ca", v[2]}}; }

template <typename F>
PerPair<double> map_pair(const PerPair<double>& v, F f) {
  return {f(v[0]), f(v[1]), f(v[2])};
}

void flatten(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out << prefix << ',' << j.dump() << '\n';
  }
}

}  // namespace

json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != cols) throw InvalidInput("ragged matrix rows");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& e = row[static_cast<std::size_t>(k)];
      m(i, k) = cdouble(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

json complex_vector_to_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

json derived_to_json(const DerivedParams& p, const std::optional<CavityParams>& cavity,
                     const std::optional<DispersiveShifts>& chi) {
  const TransitionTable bands = transition_bands(p);
  json j;
  j["ej_hz"] = p.ej_hz;
  j["charging_energies_hz"] = per_qubit(p.charging.ec_hz);
  j["mode_frequencies_hz"] = per_qubit(p.modes.frequency_hz);
  j["impedances_ohm"] = per_qubit(p.modes.impedance_ohm);
  j["self_kerr_hz"] = per_qubit(p.kerr.self_hz);
  j["cross_kerr_hz"] = per_pair(p.kerr.cross_hz);
  j["j_over_pi_mhz"] = per_pair(map_pair(p.kerr.cross_hz, [](double x) { return 2.0 * x / 1e6; }));
  j["beta_hz"] = per_qubit(p.kerr.beta_hz);
  j["anharmonicities_hz"] = per_qubit(p.kerr.alpha_hz);
  j["bands_hz"] = {{"a_upper", bands.upper(Qubit::A)}, {"a_lower", bands.lower(Qubit::A)},
                   {"b_upper", bands.upper(Qubit::B)}, {"b_lower", bands.lower(Qubit::B)}};
  json cond = json::object();
  const char* names = "abc";
  for (int q = 0; q < 3; ++q) {
    json rows = json::array();
    for (int s = 0; s < 2; ++s) rows.push_back({bands.conditional[q][s][0], bands.conditional[q][s][1]});
    cond[std::string(1, names[q])] = rows;
  }
  j["conditional_hz"] = cond;
  if (cavity) {
    j["cavity"] = {{"omega_bare_hz", cavity->omega_bare_hz}, {"g_hz", cavity->g_hz},
                   {"kappa_hz", cavity->kappa_hz},         {"delta0_hz", cavity->delta0_hz},
                   {"delta1_hz", cavity->delta1_hz},       {"g_b_hz", cavity->g_b_hz},
                   {"g_c_hz", cavity->g_c_hz}};
  }
  if (chi) {
    j["dispersive_shifts_hz"] = per_qubit(chi->chi_hz);
    j["chi_over_2pi_mhz"] = per_qubit({chi->chi_hz[0] / 1e6, chi->chi_hz[1] / 1e6, chi->chi_hz[2] / 1e6});
  }
  return j;
}

void write_derived_csv(std::ostream& out, const json& derived) {
  out << "quantity,value\n" << std::setprecision(12);
  flatten(derived, "", out);
}

json comparison_to_json(const OracleComparison& cmp, const SpectrumOptions& options) {
  const char* potential = options.potential == Potential::Quartic
                              ? "quartic"
                              : (options.potential == Potential::FullCosine ? "full_cosine" : "harmonic");
  json j = {{"n_max", options.n_max},
          {"potential", potential},
          {"exact_transition_hz", per_qubit(cmp.exact_transition_hz)},
          {"perturbative_transition_hz", per_qubit(cmp.perturbative_transition_hz)},
          {"exact_zz_hz", per_pair(cmp.exact_zz_hz)},
          {"perturbative_zz_hz", per_pair(cmp.perturbative_zz_hz)},
          {"max_transition_relative_error", cmp.max_transition_relative_error()},
          {"max_zz_relative_error", cmp.max_zz_relative_error()},
          {"truncation_warning", cmp.truncation_warning}};
  if (cmp.increment_change) j["increment_relative_change"] = *cmp.increment_change;
  return j;
}

void write_comparison_csv(std::ostream& out, const OracleComparison& cmp) {
  out << "quantity,exact_hz,perturbative_hz,relative_error\n" << std::setprecision(12);
  const char* q[] = {"transition_a", "transition_b", "transition_c"};
  const char* p[] = {"zz_ab", "zz_bc", "zz_ca"};
  for (int i = 0; i < 3; ++i) {
    const double e = cmp.exact_transition_hz[i];
    const double t = cmp.perturbative_transition_hz[i];
    out << q[i] << ',' << e << ',' << t << ',' << (e - t) / t << '\n';
  }
  for (int i = 0; i < 3; ++i) {
    const double e = cmp.exact_zz_hz[i];
    const double t = cmp.perturbative_zz_hz[i];
    out << p[i] << ',' << e << ',' << t << ',' << (e - t) / t << '\n';
  }
}

json schedule_to_json(const std::vector<ScheduleEntry>& schedule) {
  json out = json::array();
  for (const ScheduleEntry& e : schedule) {
    out.push_back({{"qubit", std::string(to_string(e.qubit))},
                   {"band", e.band ? std::string(to_string(*e.band)) : std::string("both")},
                   {"amp_mhz", e.amp_hz / 1e6},
                   {"rise_ns", e.rise_s * 1e9},
                   {"flat_ns", e.flat_s * 1e9},
                   {"total_ns", e.total_s * 1e9},
                   {"phase_deg", e.phase_rad * 180.0 / kPi},
                   {"start_ns", e.start_s * 1e9}});
  }
  return out;
}

void write_envelope_csv(std::ostream& out, const std::vector<DriveTone>& tones, double dt_s) {
  if (!(dt_s > 0.0)) throw InvalidInput("sampling step must be positive");
  double end = 0.0;
  for (const DriveTone& t : tones) end = std::max(end, t.end_s());
  out << "t_ns";
  for (std::size_t i = 0; i < tones.size(); ++i) {
    out << ",tone" << i << '_' << to_string(tones[i].target) << "_hz";
  }
  out << '\n' << std::setprecision(10);
  const auto n = static_cast<long>(std::ceil(end / dt_s));
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * dt_s;
    out << t * 1e9;
    for (const DriveTone& tone : tones) out << ',' << envelope(tone.shape, t - tone.start_s);
    out << '\n';
  }
}

void write_shots_csv(std::ostream& out, const std::vector<std::vector<ShotRecord>>& shots) {
  out << "setting_k,v_p,outcome\n" << std::setprecision(10);
  for (const auto& setting : shots) {
    for (const ShotRecord& r : setting) out << r.setting << ',' << r.voltage << ',' << to_string(r.outcome) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_center_v,count\n" << std::setprecision(10);
  for (std::size_t i = 0; i < h.counts.size(); ++i) out << h.bin_center(i) << ',' << h.counts[i] << '\n';
}

json frequencies_to_json(const Frequencies& f) {
  json out = json::array();
  const auto settings = tomography_settings();
  const char* states[] = {"00", "01", "10", "11"};
  for (int r = 0; r < kPreRotationPairs; ++r) {
    for (int s = 0; s < 4; ++s) {
      out.push_back({{"k", 4 * r + s},
                     {"pre_a", to_string(settings[2 * r].pre_a)},
                     {"pre_b", to_string(settings[2 * r].pre_b)},
                     {"state", states[s]},
                     {"f", f[4 * r + s]}});
    }
  }
  return out;
}

json tomography_to_json(const TomographyResult& r, const MeasurementData& data) {
  json stokes = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int k = 0; k < 4; ++k) row.push_back(r.stokes(i, k));
    stokes.push_back(row);
  }
  json counts = json::array();
  for (const SettingCounts& c : data.counts) {
    counts.push_back({{"records", c.records}, {"n00", c.n00}, {"n11", c.n11}, {"discarded", c.discarded}});
  }
  return {{"rho", complex_matrix_to_json(r.rho)},
          {"stokes", stokes},
          {"fidelity", r.fidelity},
          {"fidelity_std", r.fidelity_std},
          {"log_likelihood", r.log_likelihood},
          {"init_log_likelihood", r.init_log_likelihood},
          {"floor_triggered", r.floor_triggered},
          {"evaluations", r.evaluations},
          {"analytic", data.analytic},
          {"attempted_records", data.attempted},
          {"herald_rejected", data.herald_rejected},
          {"counts", counts},
          {"f_k", frequencies_to_json(r.f)}};
}

json crossing_fit_to_json(const CrossingFit& fit) {
  json j = {{"j_hz", fit.model.j_hz},
            {"j_over_pi_mhz", fit.j_over_pi_mhz()},
            {"omega_q_hz", fit.model.omega_q_hz},
            {"omega_max_hz", fit.model.omega_max_hz},
            {"flux_scale", fit.model.flux_scale},
            {"rms_hz", fit.rms_hz},
            {"evaluations", fit.evaluations}};
  try {
    const double flux = fit.model.degeneracy_flux();
    j["degeneracy_flux"] = flux;
    j["splitting_at_degeneracy_hz"] = fit.model.branch_hz(flux, 1) - fit.model.branch_hz(flux, -1);
  } catch (const InvalidInput&) {
    j["degeneracy_flux"] = nullptr;
  }
  return j;
}

void write_crossing_csv(std::ostream& out, const CrossingDataset& data, const CrossingFit& fit) {
  out << "flux,freq_hz,branch,model_hz,residual_hz\n" << std::setprecision(12);
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const auto& p = data.points[i];
    const int b = fit.branches.empty() ? p.branch : fit.branches[i];
    const double m = fit.model.branch_hz(p.flux, b);
    out << p.flux << ',' << p.freq_hz << ',' << b << ',' << m << ',' << p.freq_hz - m << '\n';
  }
}

json build_report(const std::map<std::string, json>& outputs) {
  json report = json::object();
  const SpinModel measured = SpinModel::measured_reference();
  json device_params = json::object();
  const char* names[] = {"a", "b", "c"};
  for (int q = 0; q < 3; ++q) device_params[names[q]] = {{"omega_upper_ghz_measured", measured.upper_hz[q] / 1e9}};
  device_params["j_over_pi_mhz_measured"] =
      per_pair(map_pair(measured.coupling_hz, [](double x) { return 2.0 * x / 1e6; }));

  if (auto it = outputs.find("derive"); it != outputs.end()) {
    const json& d = it->second;
    json theory = {{"j_over_pi_mhz", d.at("j_over_pi_mhz")}};
    if (d.contains("anharmonicities_hz")) {
      const json& a = d.at("anharmonicities_hz");
      for (int q = 0; q < 3; ++q) {
        device_params[names[q]]["alpha_over_2pi_mhz"] = a.at(names[q]).get<double>() / 1e6;
        device_params[names[q]]["omega_mode_ghz"] = d.at("mode_frequencies_hz").at(names[q]).get<double>() / 1e9;
      }
    }
    if (d.contains("chi_over_2pi_mhz")) theory["chi_over_2pi_mhz"] = d.at("chi_over_2pi_mhz");
    report["coupling_comparison"] = {{"theory", theory},
                          {"measured", {{"j_over_pi_mhz", device_params["j_over_pi_mhz_measured"]}}}};
  }
  report["device_params"] = device_params;
  for (const char* key : {"spectrum", "simulate", "tomo", "fit_crossing"}) {
    if (auto it = outputs.find(key); it != outputs.end()) report[key] = it->second;
  }
  json sources = json::array();
  for (const auto& [k, v] : outputs) sources.push_back(k);
  report["sources"] = sources;
  return report;
}

}  // namespace trimon
