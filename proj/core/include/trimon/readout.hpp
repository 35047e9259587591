#pragma once

// Gaussian pointer model of the joint dispersive readout and threshold
// classification into {00, 11, discard}.

#include <array>
#include <cstddef>
#include <random>
#include <vector>

namespace trimon {

/// Joint readout O = b0 + b1 zA + b2 zB + b12 zA zB with z = +1 for |0>;
/// each shot is the mean for the collapsed basis state plus Gaussian noise.
struct MeasurementModel {
  double beta0 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta12 = 0.0;
  double sigma = 1.0;       ///< shot noise, V
  double vth_plus = 0.0;    ///< above: classified 00
  double vth_minus = 0.0;   ///< below: classified 11
  bool herald = false;      ///< post-select records whose initial check found |000>
  double p_therm = 0.0;     ///< residual excited population of each of A, B, C

  /// Mean voltage of basis state s = 2 a + b.
  double mean(int s) const;
  std::array<double, 4> means() const;

  /// Checks mu_00 > vth_plus > mu_01, mu_10 > vth_minus > mu_11, sigma > 0, p_therm in [0, 1).
  void validate() const;

  static MeasurementModel from_means(const std::array<double, 4>& mu, double sigma,
                                     double vth_plus, double vth_minus);

  /// Synthetic model with separable 00/11 and overlapping 01/10 distributions:
  /// mu = (3, 0.4, -0.4, -3) V, sigma = 0.5 V, thresholds at +-1.5 V.
  static MeasurementModel default_overlap();
};

enum class Outcome { S00, S11, Discard };

const char* to_string(Outcome o);

/// Thresholds are exclusive: a value equal to either threshold is discarded.
Outcome classify(double v, const MeasurementModel& model);

struct ShotRecord {
  int setting = 0;
  double voltage = 0.0;
  Outcome outcome = Outcome::Discard;
};

/// Draws n shots from the basis-state distribution `probs` (order 00, 01, 10, 11).
std::vector<ShotRecord> sample_shots(const std::array<double, 4>& probs, const MeasurementModel& model,
                                     std::size_t n, std::mt19937_64& rng, int setting = 0);

/// Analytic probabilities of classifying basis state s as 00, 11 or discard.
std::array<double, 3> outcome_probabilities(int s, const MeasurementModel& model);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double bin_center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * bin_width(); }
};

/// Voltages outside [lo, hi) are ignored.
Histogram histogram(const std::vector<ShotRecord>& shots, std::size_t bins, double lo, double hi);

}  // namespace trimon
