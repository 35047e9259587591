#pragma once

// JSON and CSV output. Frequencies are written in Hz; couplings are also
// written as J/pi in MHz and dispersive shifts as chi/2pi in MHz.

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "trimon/circuit_model.hpp"
#include "trimon/crossing.hpp"
#include "trimon/pulse.hpp"
#include "trimon/readout.hpp"
#include "trimon/spectrum.hpp"
#include "trimon/tomography.hpp"

namespace trimon {

/// Rows of [re, im] pairs.
nlohmann::json complex_matrix_to_json(const Eigen::MatrixXcd& m);
Eigen::MatrixXcd complex_matrix_from_json(const nlohmann::json& j);
nlohmann::json complex_vector_to_json(const Eigen::VectorXcd& v);

nlohmann::json derived_to_json(const DerivedParams& params, const std::optional<CavityParams>& cavity,
                               const std::optional<DispersiveShifts>& chi);

/// Two-column quantity,value table of the same numbers.
void write_derived_csv(std::ostream& out, const nlohmann::json& derived);

nlohmann::json comparison_to_json(const OracleComparison& cmp, const SpectrumOptions& options);
void write_comparison_csv(std::ostream& out, const OracleComparison& cmp);

nlohmann::json schedule_to_json(const std::vector<ScheduleEntry>& schedule);

/// t_ns followed by one envelope column per tone, sampled every dt.
void write_envelope_csv(std::ostream& out, const std::vector<DriveTone>& tones, double dt_s);

void write_shots_csv(std::ostream& out, const std::vector<std::vector<ShotRecord>>& shots);
void write_histogram_csv(std::ostream& out, const Histogram& h);

nlohmann::json frequencies_to_json(const Frequencies& f);
nlohmann::json tomography_to_json(const TomographyResult& r, const MeasurementData& data);

nlohmann::json crossing_fit_to_json(const CrossingFit& fit);
void write_crossing_csv(std::ostream& out, const CrossingDataset& data, const CrossingFit& fit);

/// Summary mirroring the device-parameter tables, built from whichever
/// command outputs are present (keys: derive, spectrum, simulate, tomo, fit_crossing).
nlohmann::json build_report(const std::map<std::string, nlohmann::json>& outputs);

}  // namespace trimon
