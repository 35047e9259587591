#include <cmath>

#include <gtest/gtest.h>

#include "trimon/errors.hpp"
#include "trimon/random.hpp"
#include "trimon/readout.hpp"

using namespace trimon;

namespace {

std::size_t count(const std::vector<ShotRecord>& shots, Outcome o) {
  std::size_t n = 0;
  for (const auto& s : shots) n += s.outcome == o;
  return n;
}

}  // namespace

TEST(MeasurementModel, MeansFollowJointOperator) {
  MeasurementModel m;
  m.beta0 = 0.1;
  m.beta1 = 0.7;
  m.beta2 = 0.9;
  m.beta12 = 1.4;
  EXPECT_DOUBLE_EQ(m.mean(0), 0.1 + 0.7 + 0.9 + 1.4);
  EXPECT_DOUBLE_EQ(m.mean(1), 0.1 + 0.7 - 0.9 - 1.4);
  EXPECT_DOUBLE_EQ(m.mean(2), 0.1 - 0.7 + 0.9 - 1.4);
  EXPECT_DOUBLE_EQ(m.mean(3), 0.1 - 0.7 - 0.9 + 1.4);
}

TEST(MeasurementModel, FromMeansRoundTrip) {
  const MeasurementModel m = MeasurementModel::default_overlap();
  const auto mu = m.means();
  EXPECT_NEAR(mu[0], 3.0, 1e-12);
  EXPECT_NEAR(mu[1], 0.4, 1e-12);
  EXPECT_NEAR(mu[2], -0.4, 1e-12);
  EXPECT_NEAR(mu[3], -3.0, 1e-12);
  EXPECT_NO_THROW(m.validate());
}

TEST(MeasurementModel, ValidateEnforcesOrdering) {
  EXPECT_THROW(MeasurementModel::from_means({3, 2, -0.4, -3}, 0.5, 1.5, -1.5).validate(), InvalidInput);
  EXPECT_THROW(MeasurementModel::from_means({3, 0.4, -0.4, -3}, 0.0, 1.5, -1.5).validate(), InvalidInput);
  MeasurementModel m = MeasurementModel::default_overlap();
  m.p_therm = 1.0;
  EXPECT_THROW(m.validate(), InvalidInput);
}

TEST(Classify, ThresholdRegions) {
  const MeasurementModel m = MeasurementModel::default_overlap();
  EXPECT_EQ(classify(2.0, m), Outcome::S00);
  EXPECT_EQ(classify(0.0, m), Outcome::Discard);
  EXPECT_EQ(classify(-2.0, m), Outcome::S11);
  EXPECT_EQ(classify(m.vth_plus, m), Outcome::Discard);
  EXPECT_EQ(classify(m.vth_minus, m), Outcome::Discard);
  EXPECT_EQ(classify(std::nextafter(m.vth_plus, 10.0), m), Outcome::S00);
}

TEST(SampleShots, NoiselessGroundState) {
  MeasurementModel m = MeasurementModel::default_overlap();
  m.sigma = 0.0;
  auto rng = make_rng(1);
  const auto shots = sample_shots({1, 0, 0, 0}, m, 500, rng, 3);
  for (const auto& s : shots) {
    EXPECT_EQ(s.voltage, m.mean(0));
    EXPECT_EQ(s.outcome, Outcome::S00);
    EXPECT_EQ(s.setting, 3);
  }
}

TEST(SampleShots, BellPopulationsBinomial) {
  MeasurementModel m = MeasurementModel::from_means({3, 0.4, -0.4, -3}, 0.2, 1.5, -1.5);
  auto rng = make_rng(2);
  const std::size_t n = 10000;
  const auto shots = sample_shots({0.5, 0, 0, 0.5}, m, n, rng);
  const double sigma = std::sqrt(0.25 / n);
  EXPECT_NEAR(count(shots, Outcome::S00) / double(n), 0.5, 3 * sigma);
  EXPECT_NEAR(count(shots, Outcome::S11) / double(n), 0.5, 3 * sigma);
}

TEST(SampleShots, OverlappingStatesMostlyDiscarded) {
  const MeasurementModel m = MeasurementModel::default_overlap();
  auto rng = make_rng(3);
  const auto shots = sample_shots({0, 0.5, 0.5, 0}, m, 10000, rng);
  EXPECT_GE(count(shots, Outcome::Discard) / 10000.0, 0.95);
}

TEST(SampleShots, RejectsInvalidProbabilities) {
  const MeasurementModel m = MeasurementModel::default_overlap();
  auto rng = make_rng(4);
  EXPECT_THROW(sample_shots({0.5, 0.5, 0.5, 0}, m, 10, rng), InvalidInput);
  EXPECT_THROW(sample_shots({1.2, -0.2, 0, 0}, m, 10, rng), InvalidInput);
}

TEST(SampleShots, ReproducibleForSeed) {
  const MeasurementModel m = MeasurementModel::default_overlap();
  auto r1 = make_rng(9, 4);
  auto r2 = make_rng(9, 4);
  auto r3 = make_rng(9, 5);
  const auto a = sample_shots({0.1, 0.2, 0.3, 0.4}, m, 100, r1);
  const auto b = sample_shots({0.1, 0.2, 0.3, 0.4}, m, 100, r2);
  const auto c = sample_shots({0.1, 0.2, 0.3, 0.4}, m, 100, r3);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].voltage, b[i].voltage);
  EXPECT_NE(a[0].voltage, c[0].voltage);
}

TEST(OutcomeProbabilities, GaussianTailsAndMonteCarlo) {
  const MeasurementModel m = MeasurementModel::default_overlap();
  for (int s = 0; s < 4; ++s) {
    const auto p = outcome_probabilities(s, m);
    EXPECT_NEAR(p[0] + p[1] + p[2], 1.0, 1e-12);
    const double above = 0.5 * std::erfc((m.vth_plus - m.mean(s)) / (m.sigma * std::sqrt(2.0)));
    EXPECT_NEAR(p[0], above, 1e-12);
    std::array<double, 4> probs{};
    probs[s] = 1.0;
    auto rng = make_rng(10, s);
    const std::size_t n = 20000;
    const auto shots = sample_shots(probs, m, n, rng);
    const double f00 = count(shots, Outcome::S00) / double(n);
    EXPECT_NEAR(f00, p[0], 4 * std::sqrt(p[0] * (1 - p[0]) / n) + 1e-9);
  }
}

TEST(Histogram, CountsInRange) {
  std::vector<ShotRecord> shots{{0, -0.5, Outcome::Discard}, {0, 0.25, Outcome::Discard},
                                {0, 0.75, Outcome::Discard}, {0, 5.0, Outcome::S00}};
  const Histogram h = histogram(shots, 4, -1.0, 1.0);
  ASSERT_EQ(h.counts.size(), 4u);
  EXPECT_EQ(h.counts[1], 1u);
  EXPECT_EQ(h.counts[2], 1u);
  EXPECT_EQ(h.counts[3], 1u);
  EXPECT_DOUBLE_EQ(h.bin_center(0), -0.75);
  EXPECT_THROW(histogram(shots, 0, 0.0, 1.0), InvalidInput);
}
