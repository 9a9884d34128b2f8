#include <gtest/gtest.h>

#include <vector>

#include "incompat/errors.hpp"
#include "incompat/qobjects.hpp"
#include "incompat/sampling.hpp"

using namespace incompat;

namespace {

std::vector<ComplexMatrix> random_kraus(int din, int dout, int rank, std::uint64_t seed) {
  auto rng = sampling::trial_rng(seed, 0);
  // Kraus operators K_r = G_r S^{-1/2} with S = sum G_r^dag G_r.
  std::vector<ComplexMatrix> g;
  ComplexMatrix s = ComplexMatrix::Zero(din, din);
  for (int r = 0; r < rank; ++r) {
    g.push_back(sampling::ginibre(dout, din, rng));
    s += g.back().adjoint() * g.back();
  }
  const ComplexMatrix w = inverse_sqrt_psd(s);
  for (auto& k : g) k = k * w;
  return g;
}

// (1/d) sum_ij Lambda(|i><j|) (x) |i><j|, output first.
ComplexMatrix choi_oracle(const std::vector<ComplexMatrix>& kraus, int din) {
  const int dout = static_cast<int>(kraus.front().rows());
  ComplexMatrix j = ComplexMatrix::Zero(dout * din, dout * din);
  for (int a = 0; a < din; ++a) {
    for (int b = 0; b < din; ++b) {
      ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
      for (const auto& k : kraus) out += k.col(a) * k.col(b).adjoint();
      j += kron(out, matrix_unit(din, a, b)) / static_cast<double>(din);
    }
  }
  return j;
}

const std::vector<int> kKeepOut{0};
const std::vector<int> kKeepIn{1};

}  // namespace

TEST(Choi, FromKrausMatchesIndexOracle) {
  for (int din = 2; din <= 3; ++din) {
    const auto kraus = random_kraus(din, 3, 2, 100 + din);
    const ChoiMatrix c = choi_from_kraus(kraus);
    EXPECT_LT(max_abs_diff(c.matrix(), choi_oracle(kraus, din)), 1e-13);
    EXPECT_NEAR(c.matrix().trace().real(), 1.0, 1e-13);
  }
}

TEST(Choi, ApplyChannelMatchesKraus) {
  auto rng = sampling::trial_rng(7, 0);
  const auto kraus = random_kraus(3, 2, 4, 7);
  const ChoiMatrix c = choi_from_kraus(kraus);
  for (int t = 0; t < 5; ++t) {
    const ComplexMatrix rho = sampling::random_state(3, rng);
    EXPECT_LT(max_abs_diff(apply_channel(c, rho), kraus_apply(kraus, rho)), 1e-13);
  }
}

TEST(Choi, ExtendedApplicationMatchesKrausOnFirstFactor) {
  auto rng = sampling::trial_rng(8, 0);
  const auto kraus = random_kraus(2, 3, 2, 8);
  std::vector<ComplexMatrix> ext;
  for (const auto& k : kraus) ext.push_back(kron(k, identity(2)));
  const ComplexMatrix rho = sampling::random_state(4, rng);
  EXPECT_LT(max_abs_diff(apply_channel_extended(choi_from_kraus(kraus), rho), kraus_apply(ext, rho)), 1e-13);
}

TEST(Choi, ChoiOfMapRoundTrips) {
  const auto kraus = random_kraus(2, 2, 3, 9);
  const ComplexMatrix j = choi_of_map(2, [&](const ComplexMatrix& x) { return kraus_apply(kraus, x); });
  EXPECT_LT(max_abs_diff(j, choi_oracle(kraus, 2)), 1e-13);
}

TEST(Choi, ValidationRejectsBadInput) {
  ComplexMatrix j = max_entangled_state(2);
  EXPECT_THROW(ChoiMatrix(2, 3, j), DimensionError);
  ComplexMatrix not_tp = j * 2.0;
  EXPECT_THROW(ChoiMatrix(2, 2, not_tp), ContractError);
  // Trace preserving with eigenvalue -1/2 on |Psi+>.
  ComplexMatrix not_psd = identity(4) / 2.0 - j;
  EXPECT_THROW(ChoiMatrix(2, 2, not_psd), ContractError);
  EXPECT_THROW(max_entangled_state(1), DomainError);
}

TEST(StandardChannels, IdentityIsMaximallyEntangled) {
  for (int d = 2; d <= 4; ++d) {
    EXPECT_LT(max_abs_diff(identity_channel(d).matrix(), max_entangled_state(d)), 1e-15);
  }
}

TEST(StandardChannels, ActionsMatchDefinitions) {
  auto rng = sampling::trial_rng(10, 0);
  const ComplexMatrix rho = sampling::random_state(3, rng);
  const double c = 0.3;
  const ComplexMatrix dep = apply_channel(depolarizing_channel(3, c), rho);
  EXPECT_LT(max_abs_diff(dep, c * rho + (1.0 - c) * identity(3) / 3.0), 1e-13);

  const ComplexMatrix deph = apply_channel(dephasing_channel(3), rho);
  ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) diag(i, i) = rho(i, i);
  EXPECT_LT(max_abs_diff(deph, diag), 1e-13);

  const ComplexMatrix sigma = sampling::random_state(2, rng);
  EXPECT_LT(max_abs_diff(apply_channel(constant_channel(3, sigma), rho), sigma), 1e-13);

  const Povm m = sampling::random_povm(3, 2, rng);
  const ComplexMatrix qc = apply_channel(qc_channel(m), rho);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(qc(i, i).real(), trace_product(m[i], rho), 1e-13);
  EXPECT_NEAR(std::abs(qc(0, 1)), 0.0, 1e-13);

  const ComplexMatrix padded = apply_channel(qc_channel(m, 4), rho);
  EXPECT_EQ(padded.rows(), 4);
  EXPECT_NEAR(padded(0, 0).real(), trace_product(m[0], rho), 1e-13);
  EXPECT_NEAR(std::abs(padded(3, 3)), 0.0, 1e-13);
}

TEST(Povm, ValidationRejectsBadInput) {
  EXPECT_THROW(Povm(2, {identity(2) * 0.5, identity(2) * 0.4}), ContractError);
  ComplexMatrix neg = identity(2);
  neg(1, 1) = -0.1;
  EXPECT_THROW(Povm(2, {neg, identity(2) - neg}), ContractError);
  EXPECT_THROW(Povm(2, {identity(3)}), DimensionError);
}

TEST(Cloner, ValidChannelOnSymmetricSubspace) {
  for (int d = 2; d <= 3; ++d) {
    const JointChannel cl = cloning_channel(d);
    auto rng = sampling::trial_rng(20 + d, 0);
    const ComplexMatrix rho = sampling::random_state(d, rng);
    // Lambda(rho) = (2/(d+1)) S (rho (x) I) S by direct evaluation.
    const ComplexMatrix s = symmetric_projector(d);
    const ComplexMatrix expected = 2.0 / (d + 1.0) * s * kron(rho, identity(d)) * s;
    const ComplexMatrix got = apply_choi_extended(cl.choi(), d, d * d, rho);
    EXPECT_LT(max_abs_diff(got, expected), 1e-13);
    EXPECT_NEAR(got.trace().real(), 1.0, 1e-13);
    EXPECT_NEAR(cloning_visibility(d), (d + 2.0) / (2.0 * (d + 1.0)), 1e-15);
  }
}

TEST(Marginals, MarginalOperatorMatchesPartialTrace) {
  auto rng = sampling::trial_rng(30, 0);
  const JointChannel joint = sampling::random_joint_channel(2, 2, 2, rng);
  const TensorShape shape({2, 2, 2});
  const std::vector<int> keep0{0, 2};
  const std::vector<int> keep1{1, 2};
  EXPECT_LT(max_abs_diff(marginal(joint, 0).matrix(), partial_trace(joint.choi(), shape, keep0)), 1e-14);
  EXPECT_LT(max_abs_diff(marginal(joint, 1).matrix(), partial_trace(joint.choi(), shape, keep1)), 1e-14);
}

TEST(Marginals, TrashAndPrepare) {
  auto rng = sampling::trial_rng(31, 0);
  const ChoiMatrix ch = sampling::random_channel(2, 2, rng);
  const ComplexMatrix sigma = sampling::random_state(2, rng);
  const JointChannel j = trash_and_prepare(ch, sigma);
  EXPECT_LT(max_abs_diff(marginal(j, 0).matrix(), ch.matrix()), 1e-13);
  EXPECT_LT(max_abs_diff(marginal(j, 1).matrix(), constant_channel(2, sigma).matrix()), 1e-13);
}

TEST(Instruments, LudersInstrument) {
  const Povm z(2, {matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)});
  const Instrument l = luders_instrument(z);
  const Povm m = instrument_povm(l);
  for (int i = 0; i < 2; ++i) EXPECT_LT(max_abs_diff(m[i], z[i]), 1e-14);
  EXPECT_LT(max_abs_diff(instrument_total(l).matrix(), dephasing_channel(2).matrix()), 1e-14);
}

TEST(Instruments, RandomInstrumentIsConsistent) {
  auto rng = sampling::trial_rng(32, 0);
  const Instrument in = sampling::random_instrument(2, 3, 3, rng);
  const Povm m = instrument_povm(in);
  const ComplexMatrix rho = sampling::random_state(2, rng);
  // Tr I_i(rho) = Tr[M_i rho].
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix out = apply_choi_extended(in.elements()[i], 2, 3, rho);
    EXPECT_NEAR(out.trace().real(), trace_product(m[i], rho), 1e-13);
  }
}

TEST(Normalization, ChoiInstrumentPovm) {
  auto rng = sampling::trial_rng(33, 0);
  const ComplexMatrix g = sampling::ginibre(6, 6, rng);
  const ComplexMatrix j = normalize_choi(g * g.adjoint(), 2, 3);
  const ComplexMatrix red = partial_trace(j, TensorShape({3, 2}), kKeepIn);
  EXPECT_LT(max_abs_diff(red, identity(2) / 2.0), 1e-13);

  std::vector<ComplexMatrix> w;
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix h = sampling::ginibre(2, 2, rng);
    w.push_back(h * h.adjoint());
  }
  const auto e = normalize_povm(w);
  EXPECT_LT(max_abs_diff(e[0] + e[1] + e[2], identity(2)), 1e-13);
}

TEST(Sampling, KrausRankGuard) {
  auto rng = sampling::trial_rng(34, 0);
  EXPECT_THROW(sampling::random_channel(3, 2, rng, 1), DomainError);
  EXPECT_NO_THROW(sampling::random_channel(3, 2, rng, 2));
  EXPECT_THROW(sampling::random_channel(2, 2, rng, 5), DomainError);
}

TEST(Sampling, HaarUnitaryIsUnitary) {
  auto rng = sampling::trial_rng(35, 0);
  const ComplexMatrix u = sampling::haar_unitary(4, rng);
  EXPECT_LT(max_abs_diff(u * u.adjoint(), identity(4)), 1e-13);
  const ComplexMatrix r = sampling::random_state(3, rng);
  EXPECT_NEAR(r.trace().real(), 1.0, 1e-13);
  EXPECT_TRUE(is_psd(r));
}
