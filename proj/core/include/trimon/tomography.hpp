#pragma once

// Two-qubit state tomography with a joint readout that only separates 00 and
// 11: nine pre-rotation pairs, each measured plainly and with a population
// exchange (01 -> 00, 10 -> 11), followed by a maximum-likelihood fit over
// Cholesky-parameterised density matrices.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "trimon/errors.hpp"
#include "trimon/readout.hpp"
#include "trimon/types.hpp"

namespace trimon {

enum class PreRotation { Identity = 0, XHalf = 1, YMinusHalf = 2 };

const char* to_string(PreRotation r);

/// I, Rx(pi/2) or Ry(-pi/2).
Matrix2cd prerotation_matrix(PreRotation r);

struct TomographySetting {
  PreRotation pre_a = PreRotation::Identity;
  PreRotation pre_b = PreRotation::Identity;
  bool cnot_pair = false;

  /// pre_a (x) pre_b.
  Matrix4cd prerotation() const;
};

inline constexpr int kPreRotationPairs = 9;
inline constexpr int kSettings = 18;
inline constexpr int kProjectors = 36;

/// Setting k = 2 r + v: pre-rotation pair r (A index major), v = 1 for the exchange variant.
std::vector<TomographySetting> tomography_settings();

/// Exchanges the 01/00 and 10/11 populations (an X on B).
Matrix4cd cnot_pair_matrix();
std::array<double, 4> apply_cnot_pair(const std::array<double, 4>& populations);

using Frequencies = std::array<double, kProjectors>;

/// Effective projectors |psi_k> = P_r^dagger |s>, k = 4 r + s.
const std::array<Vector4cd, kProjectors>& measurement_projectors();

/// <psi_k| rho |psi_k> for every k.
Frequencies born_probabilities(const Matrix4cd& rho);

struct SettingCounts {
  std::size_t records = 0;  ///< records that reached readout
  std::size_t n00 = 0;
  std::size_t n11 = 0;
  std::size_t discarded = 0;
};

struct MeasurementData {
  Frequencies f{};
  std::array<SettingCounts, kSettings> counts{};
  std::vector<std::vector<ShotRecord>> shots;  ///< per setting; empty in analytic mode
  std::size_t attempted = 0;                   ///< records before heralding
  std::size_t herald_rejected = 0;
  bool analytic = false;
};

/// Plain-variant 00/11 and exchange-variant 01/10 rates, renormalised per pre-rotation pair.
Frequencies frequencies_from_counts(const std::array<SettingCounts, kSettings>& counts);

SettingCounts count_outcomes(const std::vector<ShotRecord>& shots);

/// Prepared two-qubit state. A preparation unitary (acting on |00>) is needed
/// to model unheralded thermal excitation, which flips A or B before it.
struct TomographyInput {
  Matrix4cd rho;
  std::optional<Matrix4cd> preparation;

  static TomographyInput from_density(const Matrix4cd& rho);
  static TomographyInput from_state(const Vector4cd& psi);
  static TomographyInput from_preparation(const Matrix4cd& u);
};

struct TomographyOptions {
  std::size_t shots = 10000;  ///< per setting; 0 selects the infinite-shot limit
  std::uint64_t seed = 0;
};

MeasurementData run_tomography(const TomographyInput& input, const MeasurementModel& model,
                               const TomographyOptions& options);

using CholeskyParams = Eigen::Matrix<double, 16, 1>;

/// Upper-triangular T: diagonal t1..t4, T01 = t5 - i t6, T12 = t7 - i t8,
/// T23 = t9 - i t10, T02 = t11 - i t12, T13 = t13 - i t14, T03 = t15 - i t16.
Matrix4cd cholesky_factor(const CholeskyParams& t);

/// rho = T^dagger T / Tr(T^dagger T).
Matrix4cd cholesky_density(const CholeskyParams& t);

/// Parameters whose density is rho (rho regularised slightly if singular).
CholeskyParams cholesky_params(const Matrix4cd& rho);

inline constexpr double kProbabilityFloor = 1e-12;

/// -sum_k (p_k - f_k)^2 / (2 p_k) with p_k floored at kProbabilityFloor.
double log_likelihood(const CholeskyParams& t, const Frequencies& f, bool* floored = nullptr);

using Stokes = Eigen::Matrix4d;

/// S_ij = Tr(rho sigma_i (x) sigma_j), index order (0, x, y, z).
Stokes stokes(const Matrix4cd& rho);
Matrix4cd density_from_stokes(const Stokes& s);

/// Linear inversion of the Stokes parameters, then Hermitisation, eigenvalue
/// clipping and renormalisation; I/4 when the inversion is singular.
CholeskyParams forced_purity_init(const Frequencies& f);
Matrix4cd forced_purity_density(const Frequencies& f);

struct MleOptions {
  int restarts = 5;
  double tolerance = 1e-10;
  int window = 50;
  int max_evaluations = 60000;  ///< per simplex run
  double restart_scale = 0.05;
  std::uint64_t seed = 0;
};

struct TomographyResult {
  Matrix4cd rho;
  Stokes stokes;
  CholeskyParams t;
  double log_likelihood = 0.0;
  double init_log_likelihood = 0.0;
  double fidelity = 0.0;       ///< filled in when a target is known
  double fidelity_std = 0.0;   ///< filled in by bootstrapping
  Frequencies f{};
  bool floor_triggered = false;
  bool converged = false;
  int evaluations = 0;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, TomographyResult best)
      : Error(what), best_(std::move(best)) {}
  const TomographyResult& best() const { return best_; }

 private:
  TomographyResult best_;
};

TomographyResult mle_reconstruct(const Frequencies& f, const MleOptions& options = {});

/// Tr sqrt(sqrt(rho_th) rho sqrt(rho_th)).
double fidelity(const Matrix4cd& rho_th, const Matrix4cd& rho);
double trace_distance(const Matrix4cd& a, const Matrix4cd& b);

/// Hermitian, unit trace and eigenvalues >= -tol.
bool is_density_matrix(const Matrix4cd& rho, double tol = 1e-10);

struct BootstrapResult {
  double mean = 0.0;
  double std = 0.0;
  std::vector<double> samples;
};

/// Resamples shots within each setting, reconstructs and scores each replicate.
BootstrapResult bootstrap_fidelity(const MeasurementData& data, const Matrix4cd& target,
                                   int n_resamples, std::uint64_t seed,
                                   const MleOptions& mle = {});

/// Bootstrap of an arbitrary statistic over i.i.d. observations.
BootstrapResult bootstrap(const std::vector<double>& data,
                          const std::function<double(const std::vector<double>&)>& statistic,
                          int n_resamples, std::uint64_t seed);

}  // namespace trimon
