#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "trimon/errors.hpp"
#include "trimon/gates.hpp"
#include "trimon/random.hpp"
#include "trimon/tomography.hpp"

using namespace trimon;

namespace {

Matrix4cd random_density(std::mt19937_64& rng, int rank = 4) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Matrix<cdouble, 4, Eigen::Dynamic> g(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = cdouble(n(rng), n(rng));
  Matrix4cd rho = g * g.adjoint();
  return rho / rho.trace();
}

Matrix4cd bell_density() {
  const Vector4cd b(1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0));
  return b * b.adjoint();
}

Matrix4cd pure(const Vector4cd& v) { return v * v.adjoint(); }

MleOptions quick_mle(std::uint64_t seed = 0) {
  MleOptions o;
  o.restarts = 1;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Settings, EighteenWithExchangeVariants) {
  const auto s = tomography_settings();
  ASSERT_EQ(s.size(), 18u);
  EXPECT_EQ(s[0].pre_a, PreRotation::Identity);
  EXPECT_EQ(s[0].pre_b, PreRotation::Identity);
  EXPECT_FALSE(s[0].cnot_pair);
  int exchange = 0;
  for (int k = 0; k < 18; ++k) {
    exchange += s[k].cnot_pair;
    EXPECT_EQ(s[k].cnot_pair, k % 2 == 1);
    for (int j = 0; j < k; ++j) {
      EXPECT_FALSE(s[j].pre_a == s[k].pre_a && s[j].pre_b == s[k].pre_b && s[j].cnot_pair == s[k].cnot_pair);
    }
  }
  EXPECT_EQ(exchange, 9);
}

TEST(Settings, CnotPairExchangesPopulations) {
  const auto out = apply_cnot_pair({0.0, 1.0, 0.0, 0.0});
  EXPECT_EQ(out, (std::array<double, 4>{1.0, 0.0, 0.0, 0.0}));
  const auto out2 = apply_cnot_pair({0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(out2, (std::array<double, 4>{0.2, 0.1, 0.4, 0.3}));
}

TEST(Settings, PrerotationMatrices) {
  const Matrix2cd x = prerotation_matrix(PreRotation::XHalf);
  const Matrix2cd y = prerotation_matrix(PreRotation::YMinusHalf);
  // Rx(pi/2) |0> = (|0> - i|1>)/sqrt 2 and Ry(-pi/2) |0> = (|0> - |1>)/sqrt 2.
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LT(std::abs(x(0, 0) - r) + std::abs(x(1, 0) - cdouble(0, -r)), 1e-12);
  EXPECT_LT(std::abs(y(0, 0) - r) + std::abs(y(1, 0) + r), 1e-12);
}

TEST(Projectors, BornProbabilitiesSumPerPrerotation) {
  std::mt19937_64 rng(1);
  const Matrix4cd rho = random_density(rng);
  const Frequencies p = born_probabilities(rho);
  for (int r = 0; r < kPreRotationPairs; ++r) {
    EXPECT_NEAR(p[4 * r] + p[4 * r + 1] + p[4 * r + 2] + p[4 * r + 3], 1.0, 1e-12);
  }
  for (int s = 0; s < 4; ++s) EXPECT_NEAR(p[s], rho(s, s).real(), 1e-12);
}

TEST(RunTomography, AnalyticModeIsBornRule) {
  const MeasurementData d =
      run_tomography(TomographyInput::from_density(bell_density()), MeasurementModel::default_overlap(), {0, 0});
  EXPECT_TRUE(d.analytic);
  const Frequencies p = born_probabilities(bell_density());
  for (int k = 0; k < kProjectors; ++k) EXPECT_EQ(d.f[k], p[k]);
}

TEST(RunTomography, MaximallyMixedSplitsEvenly) {
  const MeasurementData d = run_tomography(TomographyInput::from_density(Matrix4cd::Identity() / 4.0),
                                           MeasurementModel::default_overlap(), {10000, 17});
  for (int k = 0; k < kSettings; ++k) {
    const double kept = double(d.counts[k].n00 + d.counts[k].n11);
    ASSERT_GT(kept, 0.0);
    EXPECT_NEAR(d.counts[k].n00 / kept, 0.5, 3.0 * std::sqrt(0.25 / kept)) << "setting " << k;
  }
}

TEST(RunTomography, HeraldingRejectsThermalRecords) {
  MeasurementModel m = MeasurementModel::default_overlap();
  m.herald = true;
  m.p_therm = 0.05;
  const MeasurementData d =
      run_tomography(TomographyInput::from_density(bell_density()), m, {20000, 3});
  const double expected = 1.0 - std::pow(0.95, 3);
  const double n = double(d.attempted);
  EXPECT_EQ(d.attempted, 18u * 20000u);
  EXPECT_NEAR(d.herald_rejected / n, expected, 4.0 * std::sqrt(expected * (1 - expected) / n));
  EXPECT_NEAR(d.herald_rejected / n, 0.15, 0.01);
}

TEST(RunTomography, UnheraldedThermalNeedsPreparation) {
  MeasurementModel m = MeasurementModel::default_overlap();
  m.p_therm = 0.02;
  EXPECT_THROW(run_tomography(TomographyInput::from_density(bell_density()), m, {100, 1}), InvalidInput);
  const Matrix4cd u = apply_with_frame(bell_sequence()).logical();
  EXPECT_NO_THROW(run_tomography(TomographyInput::from_preparation(u), m, {100, 1}));
}

TEST(RunTomography, ReproducibleForSeed) {
  const auto in = TomographyInput::from_density(bell_density());
  const MeasurementModel m = MeasurementModel::default_overlap();
  const MeasurementData a = run_tomography(in, m, {500, 8});
  const MeasurementData b = run_tomography(in, m, {500, 8});
  const MeasurementData c = run_tomography(in, m, {500, 9});
  EXPECT_EQ(a.f, b.f);
  EXPECT_NE(a.f, c.f);
}

TEST(FrequenciesFromCounts, AllDiscardedIsInsufficient) {
  std::array<SettingCounts, kSettings> counts{};
  for (auto& c : counts) {
    c.records = 10;
    c.n00 = 5;
    c.n11 = 5;
  }
  EXPECT_NO_THROW(frequencies_from_counts(counts));
  counts[4] = {10, 0, 0, 10};
  counts[5] = {10, 0, 0, 10};
  EXPECT_THROW(frequencies_from_counts(counts), InsufficientStatistics);
}

TEST(Cholesky, SpecialParameters) {
  CholeskyParams t = CholeskyParams::Zero();
  t.head<4>().setConstant(0.5);
  EXPECT_LT((cholesky_density(t) - Matrix4cd::Identity() / 4.0).cwiseAbs().maxCoeff(), 1e-15);
  t.setZero();
  t(0) = 1.0;
  Matrix4cd ground = Matrix4cd::Zero();
  ground(0, 0) = 1.0;
  EXPECT_LT((cholesky_density(t) - ground).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(cholesky_density(CholeskyParams::Zero()), DegenerateParameters);
}

TEST(Cholesky, FactorLayout) {
  CholeskyParams t;
  for (int i = 0; i < 16; ++i) t(i) = i + 1.0;
  const Matrix4cd m = cholesky_factor(t);
  EXPECT_EQ(m(0, 1), cdouble(5, -6));
  EXPECT_EQ(m(1, 2), cdouble(7, -8));
  EXPECT_EQ(m(2, 3), cdouble(9, -10));
  EXPECT_EQ(m(0, 2), cdouble(11, -12));
  EXPECT_EQ(m(1, 3), cdouble(13, -14));
  EXPECT_EQ(m(0, 3), cdouble(15, -16));
  EXPECT_EQ(m(1, 0), cdouble(0));
}

TEST(Cholesky, RandomParametersGivePhysicalStates) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    CholeskyParams t;
    for (int j = 0; j < 16; ++j) t(j) = n(rng);
    const Matrix4cd rho = cholesky_density(t);
    EXPECT_LT((rho - rho.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(is_density_matrix(rho, 1e-12));
  }
}

TEST(Cholesky, ParamsRoundTrip) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Matrix4cd rho = random_density(rng);
    EXPECT_LT((cholesky_density(cholesky_params(rho)) - rho).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(LogLikelihood, MaximumAtExactData) {
  std::mt19937_64 rng(4);
  const Matrix4cd rho = random_density(rng);
  const CholeskyParams t = cholesky_params(rho);
  const Frequencies f = born_probabilities(cholesky_density(t));
  EXPECT_NEAR(log_likelihood(t, f), 0.0, 1e-20);
}

TEST(LogLikelihood, QuadraticInPerturbation) {
  std::mt19937_64 rng(5);
  const CholeskyParams t = cholesky_params(random_density(rng));
  const Frequencies p = born_probabilities(cholesky_density(t));
  for (int k : {0, 7, 22, 35}) {
    for (double eps : {1e-3, 1e-4}) {
      Frequencies f = p;
      f[k] += eps;
      EXPECT_NEAR(log_likelihood(t, f) / (-eps * eps / (2.0 * p[k])), 1.0, 1e-6);
    }
  }
}

TEST(LogLikelihood, ScaleInvariant) {
  std::mt19937_64 rng(6);
  const CholeskyParams t = cholesky_params(random_density(rng));
  const Frequencies f = born_probabilities(random_density(rng));
  EXPECT_NEAR(log_likelihood(t, f), log_likelihood(3.7 * t, f), 1e-12);
}

TEST(LogLikelihood, FloorIsFlagged) {
  CholeskyParams t = CholeskyParams::Zero();
  t(0) = 1.0;
  Frequencies f{};
  f.fill(1.0 / 4.0);
  bool floored = false;
  const double ll = log_likelihood(t, f, &floored);
  EXPECT_TRUE(floored);
  EXPECT_TRUE(std::isfinite(ll));
}

TEST(Stokes, RoundTripAndNormalisation) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const Matrix4cd rho = random_density(rng);
    const Stokes s = stokes(rho);
    EXPECT_NEAR(s(0, 0), 1.0, 1e-12);
    EXPECT_LT((density_from_stokes(s) - rho).cwiseAbs().maxCoeff(), 1e-12);
  }
  const Stokes bell = stokes(bell_density());
  EXPECT_NEAR(bell(1, 1), 1.0, 1e-12);
  EXPECT_NEAR(bell(2, 2), -1.0, 1e-12);
  EXPECT_NEAR(bell(3, 3), 1.0, 1e-12);
}

TEST(ForcedPurity, BellInitialiser) {
  const Frequencies f = born_probabilities(bell_density());
  const Matrix4cd init = forced_purity_density(f);
  EXPECT_GE(fidelity(bell_density(), init), 0.99);
}

TEST(ForcedPurity, UniformDataGivesMaximallyMixed) {
  Frequencies f{};
  f.fill(0.25);
  EXPECT_LT((forced_purity_density(f) - Matrix4cd::Identity() / 4.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForcedPurity, AlwaysPhysical) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    Frequencies f{};
    for (double& x : f) x = u(rng);
    EXPECT_TRUE(is_density_matrix(forced_purity_density(f), 1e-10));
    EXPECT_TRUE(is_density_matrix(cholesky_density(forced_purity_init(f)), 1e-10));
  }
}

TEST(Mle, ExactBellData) {
  const TomographyResult r = mle_reconstruct(born_probabilities(bell_density()));
  EXPECT_LT(trace_distance(r.rho, bell_density()), 1e-3);
  EXPECT_GE(fidelity(bell_density(), r.rho), 0.999);
  EXPECT_TRUE(is_density_matrix(r.rho));
  EXPECT_GE(r.log_likelihood, r.init_log_likelihood);
  EXPECT_NEAR(r.stokes(0, 0), 1.0, 1e-12);
}

TEST(Mle, RandomStatesInfiniteShots) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    const Matrix4cd rho = random_density(rng, 1 + i % 4);
    const TomographyResult r = mle_reconstruct(born_probabilities(rho), quick_mle(i));
    EXPECT_LT(trace_distance(r.rho, rho), 1e-3);
    EXPECT_GE(r.log_likelihood, r.init_log_likelihood);
  }
}

TEST(Mle, MaximallyMixedFromShots) {
  const MeasurementData d = run_tomography(TomographyInput::from_density(Matrix4cd::Identity() / 4.0),
                                           MeasurementModel::default_overlap(), {10000, 21});
  const TomographyResult r = mle_reconstruct(d.f);
  EXPECT_LT(trace_distance(r.rho, Matrix4cd::Identity() / 4.0), 0.02);
  EXPECT_TRUE(is_density_matrix(r.rho));
}

TEST(Mle, BellPipelineWithOverlap) {
  const Matrix4cd u = apply_with_frame(bell_sequence()).logical();
  const MeasurementData d =
      run_tomography(TomographyInput::from_preparation(u), MeasurementModel::default_overlap(), {10000, 42});
  const TomographyResult r = mle_reconstruct(d.f);
  const double f = fidelity(bell_density(), r.rho);
  EXPECT_GE(f, 0.95);
  EXPECT_LE(f, 1.0 + 1e-12);
}

TEST(Mle, BudgetExhaustionReportsBestEstimate) {
  MleOptions o = quick_mle();
  o.max_evaluations = 20;
  std::mt19937_64 rng(10);
  const Frequencies f = born_probabilities(random_density(rng));
  try {
    mle_reconstruct(f, o);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_TRUE(is_density_matrix(e.best().rho));
    EXPECT_GE(e.best().log_likelihood, e.best().init_log_likelihood);
  }
}

TEST(Fidelity, ClosedFormCases) {
  std::mt19937_64 rng(11);
  const Matrix4cd rho = random_density(rng);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
  Matrix4cd ground = Matrix4cd::Zero();
  ground(0, 0) = 1.0;
  EXPECT_NEAR(fidelity(ground, Matrix4cd::Identity() / 4.0), 0.5, 1e-12);
  Vector4cd psi = Vector4cd::Random().normalized();
  EXPECT_NEAR(fidelity(pure(psi), rho), std::sqrt((psi.adjoint() * rho * psi)(0, 0).real()), 1e-10);
}

TEST(Fidelity, RejectsNonPhysicalInput) {
  Matrix4cd bad = Matrix4cd::Identity() / 4.0;
  bad(0, 0) = -0.1;
  bad(1, 1) = 0.6;
  EXPECT_THROW(fidelity(bell_density(), bad), InvalidState);
}

TEST(TraceDistance, OrthogonalStates) {
  Matrix4cd a = Matrix4cd::Zero();
  Matrix4cd b = Matrix4cd::Zero();
  a(0, 0) = 1.0;
  b(3, 3) = 1.0;
  EXPECT_NEAR(trace_distance(a, b), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(a, a), 0.0, 1e-15);
}

TEST(Bootstrap, BinomialStandardError) {
  auto rng = make_rng(12);
  std::bernoulli_distribution coin(0.3);
  std::vector<double> data(1000);
  for (double& x : data) x = coin(rng);
  const auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  const double p = mean(data);
  const BootstrapResult b = bootstrap(data, mean, 2000, 13);
  EXPECT_NEAR(b.std / std::sqrt(p * (1 - p) / data.size()), 1.0, 0.1);
  EXPECT_EQ(b.samples.size(), 2000u);
}

TEST(Bootstrap, NoiselessReadoutGivesTinySpread) {
  const MeasurementModel sharp = MeasurementModel::from_means({3, 0.4, -0.4, -3}, 1e-3, 1.5, -1.5);
  Matrix4cd ground = Matrix4cd::Zero();
  ground(0, 0) = 1.0;
  const MeasurementData d = run_tomography(TomographyInput::from_density(ground), sharp, {10000, 14});
  const BootstrapResult b = bootstrap_fidelity(d, ground, 100, 15, quick_mle());
  EXPECT_LT(b.std, 1e-3);
}

TEST(Bootstrap, StableAcrossResampleCounts) {
  const MeasurementData d = run_tomography(TomographyInput::from_density(bell_density()),
                                           MeasurementModel::default_overlap(), {2000, 16});
  const BootstrapResult a = bootstrap_fidelity(d, bell_density(), 100, 17, quick_mle());
  const BootstrapResult b = bootstrap_fidelity(d, bell_density(), 400, 18, quick_mle());
  EXPECT_GT(a.std, 0.0);
  EXPECT_NEAR(a.std / b.std, 1.0, 0.3);
}

TEST(Bootstrap, NeedsShotRecords) {
  const MeasurementData d = run_tomography(TomographyInput::from_density(bell_density()),
                                           MeasurementModel::default_overlap(), {0, 0});
  EXPECT_THROW(bootstrap_fidelity(d, bell_density(), 100, 1), InvalidInput);
}
