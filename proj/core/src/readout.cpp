#include "trimon/readout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "trimon/errors.hpp"

namespace trimon {

double MeasurementModel::mean(int s) const {
  if (s < 0 || s > 3) throw InvalidInput("basis state index out of range: " + std::to_string(s));
  const double za = (s >> 1) ? -1.0 : 1.0;
  const double zb = (s & 1) ? -1.0 : 1.0;
  return beta0 + beta1 * za + beta2 * zb + beta12 * za * zb;
}

std::array<double, 4> MeasurementModel::means() const {
  return {mean(0), mean(1), mean(2), mean(3)};
}

void MeasurementModel::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("readout sigma must be positive");
  if (!(p_therm >= 0.0 && p_therm < 1.0)) throw InvalidInput("p_therm must lie in [0, 1)");
  const auto mu = means();
  const double mid_hi = std::max(mu[1], mu[2]);
  const double mid_lo = std::min(mu[1], mu[2]);
  if (!(mu[0] > vth_plus && vth_plus > mid_hi && mid_lo > vth_minus && vth_minus > mu[3])) {
    throw InvalidInput("readout means and thresholds must satisfy mu00 > vth+ > mu01, mu10 > vth- > mu11");
  }
}

MeasurementModel MeasurementModel::from_means(const std::array<double, 4>& mu, double sigma,
                                              double vth_plus, double vth_minus) {
  MeasurementModel m;
  m.beta0 = 0.25 * (mu[0] + mu[1] + mu[2] + mu[3]);
  m.beta1 = 0.25 * (mu[0] + mu[1] - mu[2] - mu[3]);
  m.beta2 = 0.25 * (mu[0] - mu[1] + mu[2] - mu[3]);
  m.beta12 = 0.25 * (mu[0] - mu[1] - mu[2] + mu[3]);
  m.sigma = sigma;
  m.vth_plus = vth_plus;
  m.vth_minus = vth_minus;
  return m;
}

MeasurementModel MeasurementModel::default_overlap() {
  return from_means({3.0, 0.4, -0.4, -3.0}, 0.5, 1.5, -1.5);
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::S00: return "00";
    case Outcome::S11: return "11";
    case Outcome::Discard: break;
  }
  return "discard";
}

Outcome classify(double v, const MeasurementModel& model) {
  if (v > model.vth_plus) return Outcome::S00;
  if (v < model.vth_minus) return Outcome::S11;
  return Outcome::Discard;
}

std::vector<ShotRecord> sample_shots(const std::array<double, 4>& probs, const MeasurementModel& model,
                                     std::size_t n, std::mt19937_64& rng, int setting) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= -1e-12) || !std::isfinite(p)) throw InvalidInput("invalid basis-state probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("basis-state probabilities sum to " + std::to_string(total));
  }
  if (!(model.sigma >= 0.0)) throw InvalidInput("readout sigma must be non-negative");

  std::array<double, 4> weights{};
  for (int s = 0; s < 4; ++s) weights[s] = std::max(probs[s], 0.0);
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto mu = model.means();

  std::vector<ShotRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int s = pick(rng);
    const double v = mu[s] + model.sigma * noise(rng);
    out.push_back({setting, v, classify(v, model)});
  }
  return out;
}

std::array<double, 3> outcome_probabilities(int s, const MeasurementModel& model) {
  const double mu = model.mean(s);
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (model.sigma * std::sqrt(2.0))); };
  const double p00 = 1.0 - cdf(model.vth_plus);
  const double p11 = cdf(model.vth_minus);
  return {p00, p11, 1.0 - p00 - p11};
}

Histogram histogram(const std::vector<ShotRecord>& shots, std::size_t bins, double lo, double hi) {
  if (bins == 0 || !(hi > lo)) throw InvalidInput("histogram needs at least one bin and hi > lo");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  for (const ShotRecord& r : shots) {
    if (r.voltage < lo || r.voltage >= hi) continue;
    auto i = static_cast<std::size_t>((r.voltage - lo) / (hi - lo) * static_cast<double>(bins));
    h.counts[std::min(i, bins - 1)] += 1;
  }
  return h;
}

}  // namespace trimon
