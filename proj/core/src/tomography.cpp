#include "trimon/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "trimon/gates.hpp"
#include "trimon/nelder_mead.hpp"
#include "trimon/random.hpp"

namespace trimon {

namespace {

const std::array<Matrix2cd, 4>& paulis() {
  static const std::array<Matrix2cd, 4> p = [] {
    std::array<Matrix2cd, 4> out;
    const cdouble i(0.0, 1.0);
    out[0] << 1, 0, 0, 1;
    out[1] << 0, 1, 1, 0;
    out[2] << 0, -i, i, 0;
    out[3] << 1, 0, 0, -1;
    return out;
  }();
  return p;
}

Matrix4cd kron(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix2cd pauli_x() { return paulis()[1]; }

// Hermitian square root of a PSD matrix; small negative eigenvalues are clipped.
// Eigenvalues below this are round-off from the eigensolver; their square
// roots (~1e-8) would otherwise leak into fidelities of pure states.
constexpr double kEigenFloor = 1e-14;

Eigen::Vector4d clipped_sqrt(const Eigen::Vector4d& vals) {
  return vals.unaryExpr([](double v) { return v > kEigenFloor ? std::sqrt(v) : 0.0; });
}

Matrix4cd psd_sqrt(const Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(m);
  const Eigen::Vector4d vals = clipped_sqrt(solver.eigenvalues());
  return solver.eigenvectors() * vals.cast<cdouble>().asDiagonal() * solver.eigenvectors().adjoint();
}

void require_density(const Matrix4cd& rho, const char* name) {
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(0.5 * (rho + rho.adjoint()));
  if (solver.eigenvalues().minCoeff() < -1e-8) {
    throw InvalidState(std::string(name) + " has a negative eigenvalue " +
                       std::to_string(solver.eigenvalues().minCoeff()));
  }
}

Matrix4cd project_to_density(const Matrix4cd& m) {
  const Matrix4cd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(h);
  Eigen::Vector4d vals = solver.eigenvalues().cwiseMax(0.0);
  const double sum = vals.sum();
  if (!(sum > 0.0)) return Matrix4cd::Identity() / 4.0;
  vals /= sum;
  return solver.eigenvectors() * vals.cast<cdouble>().asDiagonal() * solver.eigenvectors().adjoint();
}

double sample_std(const std::vector<double>& v, double* mean_out) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
  if (mean_out) *mean_out = mean;
  return std::sqrt(var);
}

}  // namespace

const char* to_string(PreRotation r) {
  switch (r) {
    case PreRotation::Identity: return "I";
    case PreRotation::XHalf: return "Rx(pi/2)";
    case PreRotation::YMinusHalf: break;
  }
  return "Ry(-pi/2)";
}

Matrix2cd prerotation_matrix(PreRotation r) {
  switch (r) {
    case PreRotation::Identity: return Matrix2cd::Identity();
    case PreRotation::XHalf: return rotation(-0.5 * kPi, 0.5 * kPi);
    case PreRotation::YMinusHalf: break;
  }
  return rotation(0.0, -0.5 * kPi);
}

Matrix4cd TomographySetting::prerotation() const {
  return kron(prerotation_matrix(pre_a), prerotation_matrix(pre_b));
}

std::vector<TomographySetting> tomography_settings() {
  std::vector<TomographySetting> out;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (bool pair : {false, true}) {
        out.push_back({static_cast<PreRotation>(a), static_cast<PreRotation>(b), pair});
      }
    }
  }
  return out;
}

Matrix4cd cnot_pair_matrix() { return kron(Matrix2cd::Identity(), pauli_x()); }

std::array<double, 4> apply_cnot_pair(const std::array<double, 4>& p) {
  return {p[1], p[0], p[3], p[2]};
}

const std::array<Vector4cd, kProjectors>& measurement_projectors() {
  static const std::array<Vector4cd, kProjectors> proj = [] {
    std::array<Vector4cd, kProjectors> out;
    const auto settings = tomography_settings();
    for (int r = 0; r < kPreRotationPairs; ++r) {
      const Matrix4cd pre = settings[2 * r].prerotation();
      for (int s = 0; s < 4; ++s) out[4 * r + s] = pre.adjoint().col(s);
    }
    return out;
  }();
  return proj;
}

Frequencies born_probabilities(const Matrix4cd& rho) {
  Frequencies p{};
  const auto& proj = measurement_projectors();
  // Clamp round-off so that exact probabilities of valid states stay in [0, 1].
  for (int k = 0; k < kProjectors; ++k) p[k] = std::clamp(proj[k].dot(rho * proj[k]).real(), 0.0, 1.0);
  return p;
}

SettingCounts count_outcomes(const std::vector<ShotRecord>& shots) {
  SettingCounts c;
  c.records = shots.size();
  for (const ShotRecord& r : shots) {
    switch (r.outcome) {
      case Outcome::S00: ++c.n00; break;
      case Outcome::S11: ++c.n11; break;
      case Outcome::Discard: ++c.discarded; break;
    }
  }
  return c;
}

Frequencies frequencies_from_counts(const std::array<SettingCounts, kSettings>& counts) {
  Frequencies f{};
  const auto settings = tomography_settings();
  auto rate = [](std::size_t n, std::size_t total) {
    return total > 0 ? static_cast<double>(n) / static_cast<double>(total) : 0.0;
  };
  for (int r = 0; r < kPreRotationPairs; ++r) {
    const SettingCounts& plain = counts[2 * r];
    const SettingCounts& swapped = counts[2 * r + 1];
    const std::array<double, 4> raw{rate(plain.n00, plain.records), rate(swapped.n00, swapped.records),
                                    rate(swapped.n11, swapped.records), rate(plain.n11, plain.records)};
    const double sum = raw[0] + raw[1] + raw[2] + raw[3];
    if (!(sum > 0.0)) {
      throw InsufficientStatistics(std::string("no kept shots for pre-rotation (") +
                                   to_string(settings[2 * r].pre_a) + ", " +
                                   to_string(settings[2 * r].pre_b) + ")");
    }
    for (int s = 0; s < 4; ++s) f[4 * r + s] = raw[s] / sum;
  }
  return f;
}

TomographyInput TomographyInput::from_density(const Matrix4cd& rho) { return {rho, std::nullopt}; }

TomographyInput TomographyInput::from_state(const Vector4cd& psi) {
  return {psi * psi.adjoint(), std::nullopt};
}

TomographyInput TomographyInput::from_preparation(const Matrix4cd& u) {
  const Vector4cd psi = u.col(0).normalized();
  return {psi * psi.adjoint(), u};
}

MeasurementData run_tomography(const TomographyInput& input, const MeasurementModel& model,
                               const TomographyOptions& options) {
  MeasurementData data;
  require_density(input.rho, "input state");
  const auto settings = tomography_settings();

  if (options.shots == 0) {
    data.analytic = true;
    data.f = born_probabilities(input.rho);
    return data;
  }
  model.validate();
  if (model.p_therm > 0.0 && !model.herald && !input.preparation) {
    throw InvalidInput("unheralded thermal excitation needs a preparation unitary");
  }

  // Prepared states for each thermal flip pattern of (A, B); C does not enter the readout.
  std::array<Matrix4cd, 4> rho_pattern;
  rho_pattern[0] = input.rho;
  if (input.preparation) {
    for (int pat = 1; pat < 4; ++pat) {
      const Matrix2cd fa = (pat & 2) ? pauli_x() : Matrix2cd::Identity();
      const Matrix2cd fb = (pat & 1) ? pauli_x() : Matrix2cd::Identity();
      const Vector4cd psi = ((*input.preparation) * kron(fa, fb).col(0)).normalized();
      rho_pattern[pat] = psi * psi.adjoint();
    }
  }

  data.shots.resize(kSettings);
  std::bernoulli_distribution excited(model.p_therm);
  for (int k = 0; k < kSettings; ++k) {
    auto rng = make_rng(options.seed, static_cast<std::uint64_t>(k));
    Matrix4cd op = settings[k].prerotation();
    if (settings[k].cnot_pair) op = cnot_pair_matrix() * op;

    std::array<std::size_t, 4> per_pattern{};
    for (std::size_t i = 0; i < options.shots; ++i) {
      ++data.attempted;
      bool ea = false, eb = false, ec = false;
      if (model.p_therm > 0.0) {
        ea = excited(rng);
        eb = excited(rng);
        ec = excited(rng);
      }
      if (model.herald && (ea || eb || ec)) {
        ++data.herald_rejected;
        continue;
      }
      ++per_pattern[(ea ? 2 : 0) + (eb ? 1 : 0)];
    }

    for (int pat = 0; pat < 4; ++pat) {
      if (per_pattern[pat] == 0) continue;
      const Matrix4cd out = op * rho_pattern[pat] * op.adjoint();
      std::array<double, 4> probs{};
      double sum = 0.0;
      for (int s = 0; s < 4; ++s) sum += probs[s] = std::max(out(s, s).real(), 0.0);
      for (double& p : probs) p /= sum;
      auto shots = sample_shots(probs, model, per_pattern[pat], rng, k);
      data.shots[k].insert(data.shots[k].end(), shots.begin(), shots.end());
    }
    data.counts[k] = count_outcomes(data.shots[k]);
  }
  data.f = frequencies_from_counts(data.counts);
  return data;
}

Matrix4cd cholesky_factor(const CholeskyParams& t) {
  const cdouble i(0.0, 1.0);
  Matrix4cd m = Matrix4cd::Zero();
  m(0, 0) = t(0);
  m(1, 1) = t(1);
  m(2, 2) = t(2);
  m(3, 3) = t(3);
  m(0, 1) = t(4) - i * t(5);
  m(1, 2) = t(6) - i * t(7);
  m(2, 3) = t(8) - i * t(9);
  m(0, 2) = t(10) - i * t(11);
  m(1, 3) = t(12) - i * t(13);
  m(0, 3) = t(14) - i * t(15);
  return m;
}

Matrix4cd cholesky_density(const CholeskyParams& t) {
  const Matrix4cd m = cholesky_factor(t);
  const Matrix4cd rho = m.adjoint() * m;
  const double tr = rho.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw DegenerateParameters("Cholesky parameters are all zero");
  }
  return rho / tr;
}

CholeskyParams cholesky_params(const Matrix4cd& rho) {
  Matrix4cd reg = project_to_density(rho);
  reg = (1.0 - 1e-10) * reg + 1e-10 * Matrix4cd::Identity() / 4.0;
  Eigen::LLT<Matrix4cd> llt(reg);
  if (llt.info() != Eigen::Success) throw InvalidState("density matrix is not positive definite");
  const Matrix4cd m = Matrix4cd(llt.matrixL()).adjoint();
  CholeskyParams t;
  t << m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real(),  //
      m(0, 1).real(), -m(0, 1).imag(), m(1, 2).real(), -m(1, 2).imag(),   //
      m(2, 3).real(), -m(2, 3).imag(), m(0, 2).real(), -m(0, 2).imag(),   //
      m(1, 3).real(), -m(1, 3).imag(), m(0, 3).real(), -m(0, 3).imag();
  return t;
}

double log_likelihood(const CholeskyParams& t, const Frequencies& f, bool* floored) {
  const Frequencies p = born_probabilities(cholesky_density(t));
  double sum = 0.0;
  bool hit = false;
  for (int k = 0; k < kProjectors; ++k) {
    double pk = p[k];
    if (pk < kProbabilityFloor) {
      pk = kProbabilityFloor;
      if (f[k] != 0.0) hit = true;
    }
    const double d = pk - f[k];
    sum += d * d / (2.0 * pk);
  }
  if (floored) *floored = hit;
  return -sum;
}

Stokes stokes(const Matrix4cd& rho) {
  Stokes s;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s(i, j) = (rho * kron(paulis()[i], paulis()[j])).trace().real();
  return s;
}

Matrix4cd density_from_stokes(const Stokes& s) {
  Matrix4cd rho = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rho += s(i, j) * kron(paulis()[i], paulis()[j]);
  return rho / 4.0;
}

Matrix4cd forced_purity_density(const Frequencies& f) {
  const auto& proj = measurement_projectors();
  Eigen::Matrix<double, kProjectors, 15> a;
  Eigen::Matrix<double, kProjectors, 1> b;
  for (int k = 0; k < kProjectors; ++k) {
    int col = 0;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        if (i == 0 && j == 0) continue;
        a(k, col++) = 0.25 * proj[k].dot(kron(paulis()[i], paulis()[j]) * proj[k]).real();
      }
    }
    b(k) = f[k] - 0.25;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv.minCoeff() > 1e-10 * sv.maxCoeff())) return Matrix4cd::Identity() / 4.0;
  const Eigen::VectorXd x = svd.solve(b);

  Stokes s = Stokes::Zero();
  s(0, 0) = 1.0;
  int col = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == 0 && j == 0) continue;
      s(i, j) = x(col++);
    }
  }
  return project_to_density(density_from_stokes(s));
}

CholeskyParams forced_purity_init(const Frequencies& f) {
  return cholesky_params(forced_purity_density(f));
}

TomographyResult mle_reconstruct(const Frequencies& f, const MleOptions& options) {
  for (double x : f) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidInput("observed frequencies must lie in [0, 1]");
  }
  const CholeskyParams init = forced_purity_init(f);
  const Objective objective = [&](const Eigen::VectorXd& x) {
    const CholeskyParams t = x;
    if (!(t.squaredNorm() > 0.0)) return std::numeric_limits<double>::infinity();
    return -log_likelihood(t, f);
  };

  NelderMeadOptions nm;
  nm.tolerance = options.tolerance;
  nm.window = options.window;
  nm.max_evaluations = options.max_evaluations;
  nm.initial_step = 0.05;

  TomographyResult result;
  result.f = f;
  result.init_log_likelihood = log_likelihood(init, f);

  Eigen::VectorXd best_x = init;
  double best_val = -result.init_log_likelihood;
  bool converged = false;
  auto rng = make_rng(options.seed, 0x6d6c65);
  std::normal_distribution<double> noise(0.0, 1.0);

  for (int run = 0; run <= options.restarts; ++run) {
    Eigen::VectorXd start = best_x / best_x.norm();
    if (run > 0) {
      for (int i = 0; i < start.size(); ++i) start(i) += options.restart_scale * noise(rng);
    }
    const NelderMeadResult r = nelder_mead_minimize(objective, start, nm);
    result.evaluations += r.evaluations;
    converged = converged || r.converged;
    if (r.value < best_val) {
      best_val = r.value;
      best_x = r.x;
    }
  }

  // Normalising can cost a rounding step; keep the raw point if it does.
  const CholeskyParams unit = best_x / best_x.norm();
  result.t = log_likelihood(unit, f) >= -best_val ? unit : CholeskyParams(best_x);
  result.rho = cholesky_density(result.t);
  result.log_likelihood = log_likelihood(result.t, f, &result.floor_triggered);
  result.stokes = stokes(result.rho);
  result.converged = converged;
  if (!converged) {
    throw ConvergenceError("simplex search did not converge within " +
                               std::to_string(options.restarts + 1) + " runs",
                           result);
  }
  return result;
}

double fidelity(const Matrix4cd& rho_th, const Matrix4cd& rho) {
  require_density(rho_th, "target state");
  require_density(rho, "state");
  const Matrix4cd s = psd_sqrt(rho_th);
  const Matrix4cd inner = s * rho * s;
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(0.5 * (inner + inner.adjoint()));
  return clipped_sqrt(solver.eigenvalues()).sum();
}

double trace_distance(const Matrix4cd& a, const Matrix4cd& b) {
  const Matrix4cd d = a - b;
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(0.5 * (d + d.adjoint()));
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

bool is_density_matrix(const Matrix4cd& rho, double tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho.trace() - 1.0) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(rho);
  return solver.eigenvalues().minCoeff() >= -tol;
}

BootstrapResult bootstrap_fidelity(const MeasurementData& data, const Matrix4cd& target,
                                   int n_resamples, std::uint64_t seed, const MleOptions& mle) {
  if (n_resamples < 2) throw InvalidInput("bootstrap needs at least two resamples");
  if (data.analytic || data.shots.size() != static_cast<std::size_t>(kSettings)) {
    throw InvalidInput("bootstrap needs shot records");
  }
  BootstrapResult out;
  out.samples.reserve(static_cast<std::size_t>(n_resamples));
  for (int r = 0; r < n_resamples; ++r) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(r) + 1);
    std::array<SettingCounts, kSettings> counts{};
    for (int k = 0; k < kSettings; ++k) {
      const auto& shots = data.shots[k];
      SettingCounts& c = counts[k];
      c.records = shots.size();
      if (shots.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, shots.size() - 1);
      for (std::size_t i = 0; i < shots.size(); ++i) {
        switch (shots[pick(rng)].outcome) {
          case Outcome::S00: ++c.n00; break;
          case Outcome::S11: ++c.n11; break;
          case Outcome::Discard: ++c.discarded; break;
        }
      }
    }
    MleOptions opts = mle;
    opts.seed = mle.seed + static_cast<std::uint64_t>(r);
    TomographyResult rec;
    try {
      rec = mle_reconstruct(frequencies_from_counts(counts), opts);
    } catch (const ConvergenceError& e) {
      rec = e.best();
    }
    out.samples.push_back(fidelity(target, rec.rho));
  }
  out.std = sample_std(out.samples, &out.mean);
  return out;
}

BootstrapResult bootstrap(const std::vector<double>& data,
                          const std::function<double(const std::vector<double>&)>& statistic,
                          int n_resamples, std::uint64_t seed) {
  if (n_resamples < 2) throw InvalidInput("bootstrap needs at least two resamples");
  if (data.empty()) throw InvalidInput("bootstrap needs data");
  BootstrapResult out;
  std::vector<double> replicate(data.size());
  for (int r = 0; r < n_resamples; ++r) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(r) + 1);
    std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
    for (double& x : replicate) x = data[pick(rng)];
    out.samples.push_back(statistic(replicate));
  }
  out.std = sample_std(out.samples, &out.mean);
  return out;
}

}  // namespace trimon
