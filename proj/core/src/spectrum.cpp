#include "trimon/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trimon/errors.hpp"

namespace trimon {

namespace {

struct ModeScale {
  double ec_hz;      // charging energy
  double stiffness;  // K in K/2 phi^2
  double phi_zpf;    // (2 E_C / K)^(1/4)
};

// Exact matrix elements of (a + a^dagger)^power or -(a^dagger - a)^2 within the
// first `dim` Fock states: build in a padded space and truncate afterwards.
Eigen::MatrixXd ladder_power(int dim, int power, bool momentum) {
  const int big = dim + power + 1;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(big, big);
  for (int n = 1; n < big; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  const Eigen::MatrixXd ad = a.transpose();
  const Eigen::MatrixXd x = momentum ? Eigen::MatrixXd(ad - a) : Eigen::MatrixXd(ad + a);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(big, big);
  for (int i = 0; i < power; ++i) acc = acc * x;
  if (momentum) acc = -acc;  // (i(a^dagger - a))^2 = -(a^dagger - a)^2
  return acc.topLeftCorner(dim, dim);
}

Eigen::MatrixXd kron3(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const Eigen::MatrixXd& z) {
  const int n = static_cast<int>(x.rows());
  const int dim = n * n * n;
  Eigen::MatrixXd out(dim, dim);
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3) {
        const int row = (i1 * n + i2) * n + i3;
        for (int j1 = 0; j1 < n; ++j1) {
          const double a = x(i1, j1);
          for (int j2 = 0; j2 < n; ++j2) {
            const double ab = a * y(i2, j2);
            for (int j3 = 0; j3 < n; ++j3) {
              out(row, (j1 * n + j2) * n + j3) = ab * z(i3, j3);
            }
          }
        }
      }
  return out;
}

// Operator on one mode, identity on the others.
Eigen::MatrixXd on_mode(int mode, const Eigen::MatrixXd& op) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(op.rows(), op.cols());
  switch (mode) {
    case 0: return kron3(op, id, id);
    case 1: return kron3(id, op, id);
    default: return kron3(id, id, op);
  }
}

PerQubit<ModeScale> mode_scales(const DeviceSpec& spec) {
  const ChargingEnergies ec = derive_charging_energies(spec);
  const PerQubit<double> stiffness{spec.ej_hz, spec.ej_hz, 4.0 * spec.ej_hz};
  PerQubit<ModeScale> out{};
  for (int i = 0; i < 3; ++i) {
    out[i].ec_hz = ec.ec_hz[i];
    out[i].stiffness = stiffness[i];
    out[i].phi_zpf = std::pow(2.0 * ec.ec_hz[i] / stiffness[i], 0.25);
  }
  return out;
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

Eigen::MatrixXcd displacement_elements(double lambda, int dim) {
  Eigen::MatrixXcd d(dim, dim);
  const double x = lambda * lambda;
  const double damping = std::exp(-0.5 * x);
  for (int m = 0; m < dim; ++m) {
    for (int n = 0; n < dim; ++n) {
      const int lo = std::min(m, n);
      const int k = std::abs(m - n);
      const double mag = std::exp(0.5 * (log_factorial(lo) - log_factorial(lo + k))) *
                         std::pow(lambda, k) * damping *
                         std::assoc_laguerre(static_cast<unsigned>(lo), static_cast<unsigned>(k), x);
      // (i lambda)^k for both m >= n and m < n because -conj(i lambda) = i lambda.
      cdouble phase = 1.0;
      for (int j = 0; j < k; ++j) phase *= cdouble(0.0, 1.0);
      d(m, n) = phase * mag;
    }
  }
  return d;
}

Eigen::MatrixXd circuit_hamiltonian(const DeviceSpec& spec, const SpectrumOptions& options) {
  spec.validate();
  const int n = options.n_max;
  if (n < 3) throw InvalidInput("n_max must be at least 3, got " + std::to_string(n));
  if (options.potential == Potential::Quartic && spec.flux != 0.0) {
    throw InvalidInput("the quartic expansion is only valid at zero flux");
  }

  const auto scales = mode_scales(spec);
  const int dim = n * n * n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);

  const Eigen::MatrixXd q2 = ladder_power(n, 2, true);
  const Eigen::MatrixXd x2 = ladder_power(n, 2, false);
  const Eigen::MatrixXd x4 = ladder_power(n, 4, false);

  PerQubit<Eigen::MatrixXd> phi2;
  for (int i = 0; i < 3; ++i) {
    const double pz = scales[i].phi_zpf;
    const double qz = 1.0 / pz;
    h += on_mode(i, scales[i].ec_hz * qz * qz * q2);
    phi2[i] = on_mode(i, pz * pz * x2);
    if (options.potential != Potential::FullCosine) {
      h += 0.5 * scales[i].stiffness * phi2[i];
    }
  }

  const double ej = spec.ej_hz;
  if (options.potential == Potential::Quartic) {
    const PerQubit<double> self{ej / 96.0, ej / 96.0, ej / 6.0};
    for (int i = 0; i < 3; ++i) {
      const double p4 = std::pow(scales[i].phi_zpf, 4);
      h -= on_mode(i, self[i] * p4 * x4);
    }
    h -= (ej / 16.0) * (phi2[0] * phi2[1] + 4.0 * phi2[1] * phi2[2] + 4.0 * phi2[2] * phi2[0]);
  } else if (options.potential == Potential::FullCosine) {
    // Mode arguments: phi_A / 2, phi_B / 2, phi_C.
    const PerQubit<double> lambda{0.5 * scales[0].phi_zpf, 0.5 * scales[1].phi_zpf,
                                  scales[2].phi_zpf};
    PerQubit<Eigen::MatrixXd> cosm, sinm;
    for (int i = 0; i < 3; ++i) {
      const Eigen::MatrixXcd plus = displacement_elements(lambda[i], n);
      const Eigen::MatrixXcd minus = displacement_elements(-lambda[i], n);
      cosm[i] = (0.5 * (plus + minus)).real();
      sinm[i] = ((plus - minus) / cdouble(0.0, 2.0)).real();
    }
    const double loop_phase = 0.5 * kPi * spec.flux;  // Phi / (4 phi_0)
    h -= 4.0 * ej * std::cos(loop_phase) * kron3(cosm[0], cosm[1], cosm[2]);
    if (std::sin(loop_phase) != 0.0) {
      h -= 4.0 * ej * std::sin(loop_phase) * kron3(sinm[0], sinm[1], sinm[2]);
    }
  }
  return h;
}

SpectrumResult exact_spectrum(const DeviceSpec& spec, const SpectrumOptions& options) {
  const Eigen::MatrixXd h = circuit_hamiltonian(spec, options);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw Error("eigensolver failed");

  const int n = options.n_max;
  const int dim = static_cast<int>(h.rows());
  const Eigen::VectorXd& ev = solver.eigenvalues();
  const Eigen::MatrixXd& vec = solver.eigenvectors();

  SpectrumResult result;
  result.energies_hz.resize(dim);
  result.labels.resize(dim);
  for (int k = 0; k < dim; ++k) {
    result.energies_hz[k] = ev(k) - ev(0);
    Eigen::Index best = 0;
    vec.col(k).cwiseAbs2().maxCoeff(&best);
    const int idx = static_cast<int>(best);
    result.labels[k] = {idx / (n * n), (idx / n) % n, idx % n};
  }

  double edge = 0.0;
  for (int idx = 0; idx < dim; ++idx) {
    const int na = idx / (n * n);
    const int nb = (idx / n) % n;
    const int nc = idx % n;
    if (na == n - 1 || nb == n - 1 || nc == n - 1) edge += vec(idx, 0) * vec(idx, 0);
  }
  result.edge_population = edge;
  result.truncation_warning = edge > options.edge_tolerance;
  return result;
}

double SpectrumResult::energy_of(const Occupation& n) const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k] == n) return energies_hz[k];
  }
  throw InvalidInput("no eigenstate with dominant label (" + std::to_string(n[0]) + "," +
                     std::to_string(n[1]) + "," + std::to_string(n[2]) + ")");
}

double OracleComparison::max_transition_relative_error() const {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(exact_transition_hz[i] - perturbative_transition_hz[i]) /
                                std::abs(perturbative_transition_hz[i]));
  }
  return worst;
}

double OracleComparison::max_zz_relative_error() const {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(exact_zz_hz[i] - perturbative_zz_hz[i]) /
                                std::abs(perturbative_zz_hz[i]));
  }
  return worst;
}

namespace {

struct ExactLevels {
  PerQubit<double> transition_hz{};
  PerPair<double> zz_hz{};
  bool truncation_warning = false;
};

constexpr PerQubit<Occupation> kSingles{Occupation{1, 0, 0}, Occupation{0, 1, 0}, Occupation{0, 0, 1}};
constexpr PerPair<std::array<int, 2>> kPairs{std::array<int, 2>{0, 1}, std::array<int, 2>{1, 2},
                                             std::array<int, 2>{2, 0}};

Occupation pair_occupation(int p) {
  Occupation both{0, 0, 0};
  both[kPairs[p][0]] = 1;
  both[kPairs[p][1]] = 1;
  return both;
}

ExactLevels exact_levels(const DeviceSpec& spec, const SpectrumOptions& options) {
  const SpectrumResult exact = exact_spectrum(spec, options);
  ExactLevels out;
  out.truncation_warning = exact.truncation_warning;
  for (int i = 0; i < 3; ++i) out.transition_hz[i] = exact.energy_of(kSingles[i]);
  for (int p = 0; p < 3; ++p) {
    out.zz_hz[p] = exact.energy_of(pair_occupation(p)) - out.transition_hz[kPairs[p][0]] -
                   out.transition_hz[kPairs[p][1]];
  }
  return out;
}

}  // namespace

OracleComparison compare_to_perturbative(const DeviceSpec& spec, const SpectrumOptions& options) {
  const DerivedParams params = derive_params(spec);
  const ExactLevels exact = exact_levels(spec, options);

  OracleComparison cmp;
  cmp.truncation_warning = exact.truncation_warning;
  cmp.exact_transition_hz = exact.transition_hz;
  cmp.exact_zz_hz = exact.zz_hz;
  for (int i = 0; i < 3; ++i) cmp.perturbative_transition_hz[i] = perturbative_energy(kSingles[i], params);
  for (int p = 0; p < 3; ++p) {
    cmp.perturbative_zz_hz[p] = perturbative_energy(pair_occupation(p), params) -
                                cmp.perturbative_transition_hz[kPairs[p][0]] -
                                cmp.perturbative_transition_hz[kPairs[p][1]];
  }

  if (options.convergence_check) {
    SpectrumOptions next = options;
    next.n_max += 1;
    const ExactLevels finer = exact_levels(spec, next);
    double change = 0.0;
    for (int i = 0; i < 3; ++i) {
      change = std::max(change, std::abs(finer.transition_hz[i] / exact.transition_hz[i] - 1.0));
      change = std::max(change, std::abs(finer.zz_hz[i] / exact.zz_hz[i] - 1.0));
    }
    cmp.increment_change = change;
  }
  return cmp;
}

}  // namespace trimon
