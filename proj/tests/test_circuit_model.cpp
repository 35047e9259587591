#include <cmath>

#include <gtest/gtest.h>

#include "trimon/circuit_model.hpp"
#include "trimon/errors.hpp"

using namespace trimon;

namespace {

constexpr double kE = 1.602176634e-19;
constexpr double kH = 6.62607015e-34;

DeviceSpec spec_from_capacitances(double ca, double cb, double ccp) {
  DeviceSpec s;
  s.ej_hz = 8.7e9;
  s.ca_f = ca;
  s.cb_f = cb;
  s.ccp_f = ccp;
  return s;
}

DerivedParams canonical() {
  return derive_params(8.7e9, charging_energies_from_anharmonicities({-111e6, -116e6, -138.6e6}));
}

}  // namespace

TEST(ChargingEnergies, SymmetricShuntsGiveEqualEnergies) {
  const auto ec = derive_charging_energies(spec_from_capacitances(20e-15, 20e-15, 7e-15));
  EXPECT_EQ(ec.ec_hz[0], ec.ec_hz[1]);
}

TEST(ChargingEnergies, HandArithmetic) {
  const auto ec = derive_charging_energies(spec_from_capacitances(60e-15, 60e-15, 10e-15));
  EXPECT_NEAR(ec[Qubit::A], kE * kE / (2.0 * 70e-15) / kH, 1.0);
  EXPECT_NEAR(ec[Qubit::A], 277e6, 0.5e6);
  EXPECT_NEAR(ec[Qubit::C], kE * kE / (8.0 * 10e-15) / kH, 1.0);
  EXPECT_NEAR(ec[Qubit::C], 484e6, 0.5e6);
}

TEST(ChargingEnergies, RejectsNonPositiveCapacitance) {
  EXPECT_THROW(derive_charging_energies(spec_from_capacitances(0.0, 6e-15, 30e-15)), InvalidInput);
  EXPECT_THROW(derive_charging_energies(spec_from_capacitances(8e-15, -1e-15, 30e-15)), InvalidInput);
  DeviceSpec bad = spec_from_capacitances(8e-15, 6e-15, 30e-15);
  bad.ej_hz = 0.0;
  EXPECT_THROW(derive_params(bad), InvalidInput);
}

TEST(ChargingEnergies, CapacitanceRoundTrip) {
  const DeviceSpec spec = spec_from_capacitances(8.688e-15, 6.807e-15, 34.94e-15);
  const auto ec = derive_charging_energies(spec);
  const DeviceSpec back = capacitances_from_charging_energies(spec.ej_hz, ec);
  const auto again = derive_charging_energies(back);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(again.ec_hz[i] / ec.ec_hz[i], 1.0, 1e-12);
  EXPECT_NEAR(back.ca_f / spec.ca_f, 1.0, 1e-12);
  EXPECT_NEAR(back.cb_f / spec.cb_f, 1.0, 1e-12);
  EXPECT_NEAR(back.ccp_f / spec.ccp_f, 1.0, 1e-12);
}

TEST(ModeParams, ClosedForm) {
  ChargingEnergies ec;
  ec.ec_hz = {444e6, 464e6, 138.6e6};
  const ModeParams m = derive_mode_params(8.7e9, ec);
  EXPECT_NEAR(m.frequency_hz[0], std::sqrt(8.0 * 8.7e9 * 444e6), 1.0);
  EXPECT_NEAR(m.frequency_hz[0], 5.559e9, 0.5e6);
  EXPECT_NEAR(m.frequency_hz[2], 6.21e9, 5e6);
}

TEST(ModeParams, ScalingWithJosephsonEnergy) {
  ChargingEnergies ec;
  ec.ec_hz = {444e6, 464e6, 138.6e6};
  const ModeParams m1 = derive_mode_params(8.7e9, ec);
  const ModeParams m2 = derive_mode_params(17.4e9, ec);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(m2.frequency_hz[i] / m1.frequency_hz[i], std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(m2.impedance_ohm[i] / m1.impedance_ohm[i], 1.0 / std::sqrt(2.0), 1e-12);
    EXPECT_GT(m1.impedance_ohm[i], 0.0);
  }
}

TEST(KerrCouplings, TableS1Values) {
  const KerrCouplings k = canonical().kerr;
  EXPECT_NEAR(2.0 * k.cross_hz[0] / 1e6, 227.0, 0.1);
  EXPECT_NEAR(2.0 * k.cross_hz[1] / 1e6, 253.6, 0.1);
  EXPECT_NEAR(2.0 * k.cross_hz[2] / 1e6, 248.0, 0.1);
}

TEST(KerrCouplings, AnharmonicityAndBetaIdentities) {
  ChargingEnergies ec;
  ec.ec_hz = {444e6, 464e6, 138.6e6};
  const KerrCouplings k = derive_kerr_couplings(ec);
  EXPECT_NEAR(k.alpha_hz[0], -111e6, 1e-6);
  EXPECT_DOUBLE_EQ(k.alpha_hz[0], -ec.ec_hz[0] / 4.0);
  EXPECT_DOUBLE_EQ(k.alpha_hz[1], -ec.ec_hz[1] / 4.0);
  EXPECT_DOUBLE_EQ(k.alpha_hz[2], -ec.ec_hz[2]);
  EXPECT_DOUBLE_EQ(k.beta_hz[0], k.self_hz[0] + k.cross_hz[0] + k.cross_hz[2]);
  EXPECT_DOUBLE_EQ(k.beta_hz[1], k.self_hz[1] + k.cross_hz[0] + k.cross_hz[1]);
  EXPECT_DOUBLE_EQ(k.beta_hz[2], k.self_hz[2] + k.cross_hz[1] + k.cross_hz[2]);
  for (double j : k.self_hz) EXPECT_GT(j, 0.0);
  for (double j : k.cross_hz) EXPECT_GT(j, 0.0);
}

TEST(KerrCouplings, EqualChargingEnergiesGiveTwiceSelfKerr) {
  ChargingEnergies ec;
  ec.ec_hz = {400e6, 400e6, 150e6};
  const KerrCouplings k = derive_kerr_couplings(ec);
  EXPECT_DOUBLE_EQ(k.cross_hz[0], 2.0 * k.self_hz[0]);
}

TEST(PerturbativeEnergy, Substitutions) {
  const DerivedParams p = canonical();
  EXPECT_EQ(perturbative_energy({0, 0, 0}, p), 0.0);
  EXPECT_NEAR(perturbative_energy({1, 0, 0}, p),
              p.modes.frequency_hz[0] - p.kerr.beta_hz[0] - p.kerr.self_hz[0], 1e-6);
  const double zz = perturbative_energy({1, 1, 0}, p) - perturbative_energy({0, 1, 0}, p) -
                    perturbative_energy({1, 0, 0}, p);
  EXPECT_NEAR(zz, -2.0 * p.kerr.cross_hz[0], 1e-4);
  EXPECT_THROW(perturbative_energy({-1, 0, 0}, p), InvalidInput);
}

TEST(TransitionBands, MeasuredLowerBands) {
  const SpinModel m = SpinModel::measured_reference();
  EXPECT_NEAR(m.band(Qubit::A, Band::Lower), 5.3573e9, 1e3);
  EXPECT_NEAR(m.band(Qubit::B, Band::Lower), 5.9458e9, 1e3);
}

TEST(TransitionBands, MatchPerturbativeDifferences) {
  const DerivedParams p = canonical();
  const TransitionTable t = transition_bands(p);
  for (int q = 0; q < 3; ++q) {
    for (int s = 0; s < 2; ++s) {
      for (int u = 0; u < 2; ++u) {
        Occupation lo{0, 0, 0};
        lo[(q + 1) % 3] = s;
        lo[(q + 2) % 3] = u;
        Occupation hi = lo;
        hi[q] = 1;
        EXPECT_NEAR(t.conditional[q][s][u], perturbative_energy(hi, p) - perturbative_energy(lo, p), 1e-3);
      }
    }
  }
  EXPECT_NEAR(t.upper(Qubit::A) - t.lower(Qubit::A), 2.0 * p.kerr.cross_hz[0], 1e-3);
  EXPECT_NEAR(t.upper(Qubit::B) - t.lower(Qubit::B), 2.0 * p.kerr.cross_hz[0], 1e-3);
}

TEST(SpinHamiltonian, DiagonalAndConsistent) {
  const DerivedParams p = canonical();
  const auto h = spin_hamiltonian(p);
  const TransitionTable t = transition_bands(p);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      if (i != j) EXPECT_EQ(h(i, j), 0.0);
    }
  }
  EXPECT_EQ(h(0, 0), 0.0);
  EXPECT_NEAR(h(basis_index(1, 0, 0), basis_index(1, 0, 0)), t.upper(Qubit::A), 1e-3);
  const double zz = h(basis_index(1, 1, 0), basis_index(1, 1, 0)) - h(basis_index(0, 1, 0), basis_index(0, 1, 0)) -
                    h(basis_index(1, 0, 0), basis_index(1, 0, 0));
  EXPECT_NEAR(zz, -2.0 * p.kerr.cross_hz[0], 1e-3);
}

TEST(SpinHamiltonian, MeasuredModelSplitting) {
  const SpinModel m = SpinModel::measured_reference();
  const auto e = m.energies();
  EXPECT_NEAR(e[basis_index(1, 0, 0)], 5.5585e9, 1.0);
  EXPECT_NEAR(e[basis_index(1, 1, 0)] - e[basis_index(0, 1, 0)] - e[basis_index(1, 0, 0)], -201.2e6, 1.0);
  EXPECT_NEAR(m.upper_hz[1] - m.band(Qubit::B, Band::Lower), 201.2e6, 1.0);
}

TEST(ClosedForm, RequiresZeroFlux) {
  DeviceSpec s = spec_from_capacitances(8.688e-15, 6.807e-15, 34.94e-15);
  s.flux = 0.1;
  EXPECT_THROW(derive_params(s), InvalidInput);
}

TEST(DispersiveShifts, VanishWithoutCoupling) {
  const DerivedParams p = canonical();
  const CavityParams cav = make_cavity(7.23e9, 0.0, 3.9e6, p);
  const DispersiveShifts chi = dispersive_shifts(cav, p.kerr);
  for (double c : chi.chi_hz) EXPECT_EQ(c, 0.0);
}

TEST(DispersiveShifts, HarmonicLimit) {
  const DerivedParams p = canonical();
  const CavityParams cav = make_cavity(7.23e9, 94e6, 3.9e6, 5.5585e9, 0.0);
  EXPECT_EQ(cav.delta1_hz, cav.delta0_hz);
  EXPECT_EQ(dispersive_shifts(cav, p.kerr).chi_hz[0], 0.0);
}

TEST(DispersiveShifts, InvertThenForward) {
  const double delta0 = -1.6715e9;
  const double alpha = -111e6;
  const double g = coupling_from_chi_a(-0.332e6, delta0, alpha);
  EXPECT_NEAR(g, 94e6, 1e6);
  const CavityParams cav = make_cavity(7.23e9, g, 3.9e6, 7.23e9 + delta0, alpha);
  EXPECT_NEAR(cav.delta1_hz, cav.delta0_hz + alpha, 1e-3);
  const DispersiveShifts chi = dispersive_shifts(cav, 100.6e6, 116e6);
  EXPECT_NEAR(chi.chi_hz[0] / 1e6, -0.332, 5e-5);
}

TEST(DispersiveShifts, ChiASignFollowsAnharmonicity) {
  const CavityParams neg = make_cavity(7.23e9, 94e6, 3.9e6, 5.5585e9, -111e6);
  const CavityParams pos = make_cavity(7.23e9, 94e6, 3.9e6, 5.5585e9, +111e6);
  const double a = dispersive_shifts(neg, 100e6, 100e6).chi_hz[0];
  const double b = dispersive_shifts(pos, 100e6, 100e6).chi_hz[0];
  EXPECT_LT(a * b, 0.0);
}

TEST(DispersiveShifts, ResonanceIsReported) {
  const CavityParams cav = make_cavity(5.5585e9, 94e6, 3.9e6, 5.5585e9, -111e6);
  EXPECT_THROW(dispersive_shifts(cav, 100e6, 100e6), ResonanceError);
  const CavityParams lower = make_cavity(5.5585e9 + 200e6, 94e6, 3.9e6, 5.5585e9, -111e6);
  EXPECT_THROW(dispersive_shifts(lower, 100e6, 50e6), ResonanceError);
}
