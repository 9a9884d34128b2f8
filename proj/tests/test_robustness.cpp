#include <gtest/gtest.h>

#include <cmath>

#include "incompat/compat.hpp"
#include "incompat/robustness.hpp"
#include "incompat/sampling.hpp"
#include "incompat/suites.hpp"

using namespace incompat;

namespace {

Povm z_povm() { return suites::computational_povm(2); }
Povm x_povm() { return suites::fourier_povm(2); }

ComplexMatrix mix(const ComplexMatrix& a, const ComplexMatrix& b, double s) { return (a + s * b) / (1.0 + s); }

}  // namespace

TEST(RobustnessChannels, IdentityPairClosedForm) {
  for (int d = 2; d <= 3; ++d) {
    const auto r = robustness_channels({identity_channel(d), identity_channel(d)});
    EXPECT_NEAR(r.primal_value, (d - 1.0) / (d + 1.0), 1e-6);
    EXPECT_NEAR(r.dual_value, (d - 1.0) / (d + 1.0), 1e-6);
    EXPECT_NEAR(identity_pair_closed_form(d), (d - 1.0) / (d + 1.0), 1e-15);
  }
}

TEST(RobustnessChannels, DepolarizedIdentityPairVanishesAtClonerVisibility) {
  double prev = 1.0;
  for (double c : {1.0, 0.9, 0.8, 0.7}) {
    const ChoiMatrix ch = depolarizing_channel(2, c);
    const double r = robustness_channels_primal({ch, ch}).primal_value;
    EXPECT_LT(r, prev);
    prev = r;
  }
  const ChoiMatrix cl = depolarizing_channel(2, cloning_visibility(2));
  EXPECT_NEAR(robustness_channels_primal({cl, cl}).primal_value, 0.0, 1e-7);
}

TEST(RobustnessChannels, NoiseMakesMixtureCompatible) {
  auto rng = sampling::trial_rng(50, 0);
  const auto chs = suites::random_incompatible_channels(2, rng, 1e-3, {});
  const auto r = robustness_channels(chs);
  ASSERT_EQ(r.noise_channels.size(), 2u);
  ASSERT_TRUE(r.mixture_joint.has_value());
  std::vector<ChoiMatrix> mixed;
  for (int x = 0; x < 2; ++x) {
    const ComplexMatrix m = mix(chs[x].matrix(), r.noise_channels[x].matrix(), r.primal_value);
    EXPECT_LT(max_abs_diff(marginal(*r.mixture_joint, x).matrix(), m), 1e-6);
    mixed.emplace_back(2, 2, m, 1e-7);
  }
  EXPECT_TRUE(check_channels(mixed).compatible);
  // Witness: value 1 + R on the target, at most one on the compatible mixture.
  EXPECT_NEAR(witness_functional(*r.witness, chs), 1.0 + r.primal_value, 1e-6);
  EXPECT_LE(witness_functional(*r.witness, mixed), 1.0 + 1e-6);
}

TEST(RobustnessChannels, CompatibleInputHasZeroRobustness) {
  const ChoiMatrix deph = dephasing_channel(2);
  const auto r = robustness_channels({deph, deph});
  EXPECT_NEAR(r.primal_value, 0.0, 1e-7);
  EXPECT_TRUE(r.noise_channels.empty());
}

TEST(RobustnessMeasurements, UnbiasedQubitPair) {
  const auto r = robustness_measurements(PovmCollection({z_povm(), x_povm()}));
  // Two independent routes: primal cone program and witness program.
  EXPECT_NEAR(r.primal_value, r.dual_value, 1e-6);
  // (sqrt2 - 1)^2; an external conic solver (SCS) agrees to 3e-10.
  EXPECT_NEAR(r.primal_value, 3.0 - 2.0 * std::sqrt(2.0), 1e-6);
  ASSERT_EQ(r.noise_povms.size(), 2u);
  std::vector<Povm> mixed;
  const PovmCollection target({z_povm(), x_povm()});
  for (int x = 0; x < 2; ++x) {
    std::vector<ComplexMatrix> e;
    for (int i = 0; i < 2; ++i) e.push_back(mix(target[x][i], r.noise_povms[x][i], r.primal_value));
    mixed.emplace_back(2, e, 1e-7);
  }
  EXPECT_TRUE(check_measurements(PovmCollection(mixed)).compatible);
  EXPECT_NEAR(witness_functional(*r.witness, target), 1.0 + r.primal_value, 1e-6);
}

TEST(RobustnessMeasurements, Prop1OnUnbiasedPair) {
  const auto c = verify_prop1(PovmCollection({z_povm(), x_povm()}));
  EXPECT_LT(c.delta, 1e-6);
  EXPECT_NEAR(c.lhs, c.rc, 1e-6);
}

TEST(RobustnessPair, ComputationalBasisWithIdentity) {
  const auto r = robustness_pair(z_povm(), identity_channel(2));
  EXPECT_NEAR(r.primal_value, r.dual_value, 1e-6);
  EXPECT_GT(r.primal_value, 0.0);
  ASSERT_TRUE(r.noise_pair_channel.has_value());
  ASSERT_EQ(r.noise_povms.size(), 1u);
  std::vector<ComplexMatrix> e;
  for (int i = 0; i < 2; ++i) e.push_back(mix(z_povm()[i], r.noise_povms[0][i], r.primal_value));
  const Povm m(2, e, 1e-7);
  const ChoiMatrix ch(2, 2, mix(identity_channel(2).matrix(), r.noise_pair_channel->matrix(), r.primal_value),
                      1e-7);
  EXPECT_TRUE(check_pair(m, ch).compatible);
  const auto c = verify_prop2(z_povm(), identity_channel(2));
  EXPECT_LT(c.delta, 1e-6);
}

TEST(RobustnessPair, CompatiblePairHasZeroRobustness) {
  const auto r = robustness_pair(z_povm(), dephasing_channel(2));
  EXPECT_NEAR(r.primal_value, 0.0, 1e-7);
  EXPECT_FALSE(r.noise_pair_channel.has_value());
}

TEST(RobustnessPair, OutputsLargerThanOutcomes) {
  auto rng = sampling::trial_rng(51, 0);
  const Povm m = sampling::random_povm(2, 2, rng);
  const ChoiMatrix ch = sampling::random_channel(2, 3, rng);
  const auto c = verify_prop2(m, ch);
  EXPECT_LT(c.delta, 1e-6);
}

TEST(Witness, KindNames) {
  EXPECT_EQ(kind_name(RobustnessKind::kChannels), "channels");
  EXPECT_EQ(kind_name(RobustnessKind::kMeasurements), "measurements");
  EXPECT_EQ(kind_name(RobustnessKind::kPair), "pair");
}
