#include "trimon/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <unsupported/Eigen/LevenbergMarquardt>

#include "trimon/errors.hpp"
#include "trimon/random.hpp"

namespace trimon {

namespace {

// Parameters are fitted in GHz: (omega_max, scale, omega_q, J).
constexpr double kUnit = 1e9;

CrossingModel from_vector(const Eigen::VectorXd& p) {
  return {p(0) * kUnit, p(1), p(2) * kUnit, std::abs(p(3)) * kUnit};
}

struct Residuals : Eigen::DenseFunctor<double> {
  const std::vector<CrossingPoint>* points;
  const std::vector<int>* branches;

  Residuals(const std::vector<CrossingPoint>& pts, const std::vector<int>& br)
      : Eigen::DenseFunctor<double>(4, static_cast<int>(pts.size())), points(&pts), branches(&br) {}

  int operator()(const InputType& p, ValueType& r) const {
    for (std::size_t i = 0; i < points->size(); ++i) {
      const auto& pt = (*points)[i];
      r(static_cast<Eigen::Index>(i)) = branch(p, pt.flux, (*branches)[i]) - pt.freq_hz / kUnit;
    }
    return 0;
  }

  int df(const InputType& p, JacobianType& jac) const {
    for (std::size_t i = 0; i < points->size(); ++i) {
      const double flux = (*points)[i].flux;
      const int b = (*branches)[i];
      const double arg = kPi * p(1) * flux;
      const double c = std::cos(arg);
      const double root = std::sqrt(std::max(std::abs(c), 1e-300));
      const double wt = p(0) * root;
      const double half = 0.5 * (wt - p(2));
      const double r = std::max(std::sqrt(half * half + p(3) * p(3)), 1e-15);
      const double d_wt = 0.5 + b * half / (2.0 * r);
      const double dwt_dmax = root;
      const double dwt_dscale = p(0) * (c >= 0.0 ? 1.0 : -1.0) * (-std::sin(arg)) * kPi * flux / (2.0 * root);
      const auto row = static_cast<Eigen::Index>(i);
      jac(row, 0) = d_wt * dwt_dmax;
      jac(row, 1) = d_wt * dwt_dscale;
      jac(row, 2) = 0.5 - b * half / (2.0 * r);
      jac(row, 3) = b * p(3) / r;
    }
    return 0;
  }

  static double branch(const InputType& p, double flux, int b) {
    const double wt = p(0) * std::sqrt(std::abs(std::cos(kPi * p(1) * flux)));
    const double half = 0.5 * (wt - p(2));
    return 0.5 * (wt + p(2)) + b * std::sqrt(half * half + p(3) * p(3));
  }
};

struct Paired {
  double flux;
  double lo;
  double hi;
};

std::vector<Paired> paired_points(const CrossingDataset& data, double tol) {
  std::vector<CrossingPoint> pts = data.points;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.flux < b.flux; });
  std::vector<Paired> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (std::abs(pts[i + 1].flux - pts[i].flux) <= tol) {
      out.push_back({pts[i].flux, std::min(pts[i].freq_hz, pts[i + 1].freq_hz),
                     std::max(pts[i].freq_hz, pts[i + 1].freq_hz)});
      ++i;
    }
  }
  return out;
}

// omega_max and scale for bare transmon samples, by scanning the scale and
// solving for omega_max^2 in closed form.
void fit_transmon(const std::vector<double>& flux, const std::vector<double>& wt, double& omega_max,
                  double& scale) {
  double max_flux = 0.0;
  for (double f : flux) max_flux = std::max(max_flux, std::abs(f));
  const double s_max = max_flux > 0.0 ? 0.5 / max_flux : 1.0;
  double best = std::numeric_limits<double>::infinity();
  const int steps = 4000;
  for (int k = 1; k <= steps; ++k) {
    const double s = s_max * k / (steps + 1.0);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < flux.size(); ++i) {
      const double c = std::abs(std::cos(kPi * s * flux[i]));
      num += wt[i] * wt[i] * c;
      den += c * c;
    }
    if (!(den > 0.0)) continue;
    const double w2 = num / den;
    double cost = 0.0;
    for (std::size_t i = 0; i < flux.size(); ++i) {
      const double m = std::sqrt(w2 * std::abs(std::cos(kPi * s * flux[i])));
      cost += (m - wt[i]) * (m - wt[i]);
    }
    if (cost < best) {
      best = cost;
      omega_max = std::sqrt(w2);
      scale = s;
    }
  }
}

CrossingModel initial_guess(const CrossingDataset& data, double tol) {
  const auto paired = paired_points(data, tol);
  double fmin = std::numeric_limits<double>::infinity();
  double fmax = -fmin;
  for (const auto& p : data.points) {
    fmin = std::min(fmin, p.freq_hz);
    fmax = std::max(fmax, p.freq_hz);
  }

  CrossingModel guess;
  if (paired.size() >= 3) {
    // Sum of the branches is omega_T + omega_q; the squared splitting minus
    // (omega_T - omega_q)^2 is 4 J^2, which must not depend on flux.
    double best = std::numeric_limits<double>::infinity();
    const int steps = 2000;
    for (int k = 0; k <= steps; ++k) {
      const double wq = fmin + (fmax - fmin) * k / steps;
      double mean = 0.0, sq = 0.0;
      for (const auto& p : paired) {
        const double wt = p.hi + p.lo - wq;
        const double j2 = 0.25 * ((p.hi - p.lo) * (p.hi - p.lo) - (wt - wq) * (wt - wq));
        mean += j2;
        sq += j2 * j2;
      }
      mean /= static_cast<double>(paired.size());
      const double var = sq / static_cast<double>(paired.size()) - mean * mean;
      if (var < best) {
        best = var;
        guess.omega_q_hz = wq;
        guess.j_hz = std::sqrt(std::max(mean, 0.0));
      }
    }
    std::vector<double> flux, wt;
    for (const auto& p : paired) {
      flux.push_back(p.flux);
      wt.push_back(p.hi + p.lo - guess.omega_q_hz);
    }
    fit_transmon(flux, wt, guess.omega_max_hz, guess.flux_scale);
  } else {
    // Without pairs, treat every point as a bare-transmon sample away from the qubit.
    guess.omega_q_hz = 0.5 * (fmin + fmax);
    std::vector<double> flux, wt;
    for (const auto& p : data.points) {
      flux.push_back(p.flux);
      wt.push_back(p.freq_hz);
    }
    fit_transmon(flux, wt, guess.omega_max_hz, guess.flux_scale);
    guess.j_hz = 10e6;
  }
  return guess;
}

}  // namespace

double CrossingModel::transmon_hz(double flux) const {
  return omega_max_hz * std::sqrt(std::abs(std::cos(kPi * flux_scale * flux)));
}

double CrossingModel::branch_hz(double flux, int branch) const {
  const double wt = transmon_hz(flux);
  const double half = 0.5 * (wt - omega_q_hz);
  return 0.5 * (wt + omega_q_hz) + branch * std::sqrt(half * half + j_hz * j_hz);
}

double CrossingModel::degeneracy_flux() const {
  const double ratio = omega_q_hz / omega_max_hz;
  if (!(ratio > 0.0 && ratio <= 1.0) || flux_scale == 0.0) {
    throw InvalidInput("transmon never meets the qubit frequency");
  }
  return std::acos(ratio * ratio) / (kPi * std::abs(flux_scale));
}

std::vector<int> infer_branches(const CrossingDataset& data, double flux_tol) {
  const std::size_t n = data.points.size();
  std::vector<int> labels(n, 0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return data.points[a].flux < data.points[b].flux; });
  for (std::size_t k = 0; k < n;) {
    std::size_t end = k + 1;
    while (end < n && std::abs(data.points[order[end]].flux - data.points[order[k]].flux) <= flux_tol) ++end;
    if (end - k == 2) {
      const std::size_t a = order[k];
      const std::size_t b = order[k + 1];
      const bool a_hi = data.points[a].freq_hz >= data.points[b].freq_hz;
      labels[a] = a_hi ? 1 : -1;
      labels[b] = a_hi ? -1 : 1;
    } else {
      for (std::size_t j = k; j < end; ++j) labels[order[j]] = data.points[order[j]].branch;
    }
    k = end;
  }
  bool unknown = std::any_of(labels.begin(), labels.end(), [](int l) { return l == 0; });
  if (unknown) {
    const CrossingModel guess = initial_guess(data, flux_tol);
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != 0) continue;
      const auto& p = data.points[i];
      labels[i] = std::abs(guess.branch_hz(p.flux, 1) - p.freq_hz) <=
                          std::abs(guess.branch_hz(p.flux, -1) - p.freq_hz)
                      ? 1
                      : -1;
    }
  }
  return labels;
}

CrossingFit fit_avoided_crossing(const CrossingDataset& data) {
  const double tol = 1e-9;
  for (const auto& p : data.points) {
    if (!std::isfinite(p.flux) || !std::isfinite(p.freq_hz)) throw InvalidInput("non-finite crossing data");
  }
  if (data.points.size() < 6) {
    throw UnderdeterminedFit("an avoided-crossing fit needs at least 6 points, got " +
                             std::to_string(data.points.size()));
  }
  const std::vector<int> labels = infer_branches(data, tol);
  const bool has_upper = std::count(labels.begin(), labels.end(), 1) > 0;
  const bool has_lower = std::count(labels.begin(), labels.end(), -1) > 0;
  if (!has_upper || !has_lower) throw UnderdeterminedFit("data cover a single branch");

  const CrossingModel guess = initial_guess(data, tol);
  Residuals functor(data.points, labels);

  CrossingFit best;
  best.rms_hz = std::numeric_limits<double>::infinity();
  int status_ok = 0;
  for (double j0 : {1e6, 10e6, 100e6}) {
    Eigen::VectorXd p(4);
    p << guess.omega_max_hz / kUnit, guess.flux_scale, guess.omega_q_hz / kUnit, j0 / kUnit;
    Eigen::LevenbergMarquardt<Residuals> lm(functor);
    lm.setMaxfev(4000);
    lm.setXtol(1e-14);
    lm.setFtol(1e-16);
    const auto status = lm.minimize(p);
    if (status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
        status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation) {
      ++status_ok;
    }
    Eigen::VectorXd r(static_cast<Eigen::Index>(data.points.size()));
    functor(p, r);
    const double rms = std::sqrt(r.squaredNorm() / static_cast<double>(r.size())) * kUnit;
    if (rms < best.rms_hz) {
      best.model = from_vector(p);
      best.rms_hz = rms;
    }
    best.evaluations += static_cast<int>(lm.nfev());
  }
  best.branches = labels;
  if (status_ok == 0 || !std::isfinite(best.rms_hz)) {
    throw FitError("avoided-crossing fit did not converge; residual RMS " +
                   std::to_string(best.rms_hz) + " Hz");
  }
  return best;
}

CrossingDataset synthetic_crossing(const CrossingModel& model, const std::vector<double>& fluxes,
                                   double noise_hz, std::uint64_t seed) {
  CrossingDataset data;
  auto rng = make_rng(seed, 0);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double f : fluxes) {
    for (int b : {1, -1}) {
      const double v = model.branch_hz(f, b) + (noise_hz > 0.0 ? noise_hz * noise(rng) : 0.0);
      data.points.push_back({f, v, b});
    }
  }
  return data;
}

}  // namespace trimon
