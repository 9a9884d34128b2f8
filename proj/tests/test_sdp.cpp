#include <gtest/gtest.h>

#include "incompat/sdp.hpp"

#include "incompat/sampling.hpp"

namespace incompat::sdp {
namespace {

TEST(Sdp, TraceAboveProjector) {
  // min Tr X  s.t.  X >= |0><0|, written with a slack block.
  SdpProblem p;
  const int x = p.add_block(2);
  const int s = p.add_block(2);
  p.set_objective(x, identity(2));
  ComplexMatrix target = ComplexMatrix::Zero(2, 2);
  target(0, 0) = 1.0;
  add_hermitian_equality(p, 2,
                         {{x, [](const ComplexMatrix& e) { return e; }},
                          {s, [](const ComplexMatrix& e) { return ComplexMatrix(-e); }}},
                         target);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.primal_value, 1.0, 1e-7);
  EXPECT_NEAR(sol.dual_value, 1.0, 1e-7);
}

TEST(Sdp, LmiLargestEigenvalue) {
  // max -t  s.t.  t I - sigma_y >= 0  gives -1.
  LmiProgram lmi;
  const int t = lmi.add_variable(-1.0);
  ComplexMatrix sy(2, 2);
  sy << 0.0, Complex(0, -1), Complex(0, 1), 0.0;
  const int b = lmi.add_block(2, -sy);
  lmi.add_term(b, t, identity(2));
  const auto sol = solve(lmi);
  ASSERT_TRUE(sol.raw.optimal());
  EXPECT_NEAR(sol.value, -1.0, 1e-7);
  EXPECT_NEAR(sol.y(t), 1.0, 1e-7);
}

TEST(Sdp, ComplexBlockMinimumEigenvalue) {
  // min Tr[C X]  s.t.  Tr X = 1  is the smallest eigenvalue of C.
  auto rng = sampling::trial_rng(3, 0);
  const ComplexMatrix c = sampling::random_hermitian(4, rng);
  SdpProblem p;
  const int x = p.add_block(4);
  p.set_objective(x, c);
  p.add_constraint({{x, identity(4)}}, 1.0);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  const double oracle = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(c).eigenvalues().minCoeff();
  EXPECT_NEAR(sol.primal_value, oracle, 1e-7);
  EXPECT_NEAR(sol.dual_value, oracle, 1e-7);
  EXPECT_LT(sol.primal_residual, 1e-8);
  // Complementary slackness.
  EXPECT_NEAR(trace_product(sol.block_values[x], sol.dual_slacks[x]), 0.0, 1e-7);
}

TEST(Sdp, LinearProgramOnScalars) {
  // min x1 + 2 x2  s.t.  x1 + x2 = 1, x >= 0.
  SdpProblem p;
  const int a = p.add_scalar(1.0);
  const int b = p.add_scalar(2.0);
  p.add_constraint({{a, identity(1)}, {b, identity(1)}}, 1.0);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_NEAR(sol.primal_value, 1.0, 1e-7);
  EXPECT_NEAR(sol.block_values[a](0, 0).real(), 1.0, 1e-6);
}

TEST(Sdp, RedundantConstraintIsDropped) {
  SdpProblem p;
  const int x = p.add_block(2);
  p.set_objective(x, identity(2));
  p.add_constraint({{x, matrix_unit(2, 0, 0)}}, 0.5);
  p.add_constraint({{x, matrix_unit(2, 0, 0) * 2.0}}, 1.0);
  EXPECT_EQ(independent_constraints(p).size(), 1u);
  const auto sol = solve(p);
  ASSERT_TRUE(sol.optimal());
  EXPECT_EQ(sol.removed_constraints, 1);
  EXPECT_NEAR(sol.primal_value, 0.5, 1e-7);
}

TEST(Sdp, InconsistentRedundantConstraintIsInfeasible) {
  SdpProblem p;
  const int x = p.add_block(2);
  p.set_objective(x, identity(2));
  p.add_constraint({{x, matrix_unit(2, 0, 0)}}, 0.5);
  p.add_constraint({{x, matrix_unit(2, 0, 0) * 2.0}}, 3.0);
  EXPECT_EQ(solve(p).status, Status::kInfeasible);
}

TEST(Sdp, NegativeTraceIsInfeasible) {
  SdpProblem p;
  const int x = p.add_block(2);
  p.set_objective(x, identity(2));
  p.add_constraint({{x, identity(2)}}, -1.0);
  const auto sol = solve(p);
  EXPECT_FALSE(sol.optimal());
}

TEST(Sdp, IterationCapReportsMaxIter) {
  auto rng = sampling::trial_rng(4, 0);
  SdpProblem p;
  const int x = p.add_block(3);
  p.set_objective(x, sampling::random_hermitian(3, rng));
  p.add_constraint({{x, identity(3)}}, 1.0);
  SolverOptions opts;
  opts.max_iter = 1;
  EXPECT_EQ(solve(p, opts).status, Status::kMaxIter);
}

TEST(Sdp, RealEmbeddingPreservesValues) {
  auto rng = sampling::trial_rng(5, 0);
  SdpProblem p;
  const int x = p.add_block(2);
  const ComplexMatrix c = sampling::random_hermitian(2, rng);
  const ComplexMatrix a = sampling::random_hermitian(2, rng);
  p.set_objective(x, c);
  p.add_constraint({{x, a}}, 0.0);
  const SdpProblem r = real_embed(p);
  ASSERT_EQ(r.block(0).dim, 4);
  EXPECT_EQ(r.block(0).kind, BlockKind::kReal);
  const ComplexMatrix xv = sampling::random_state(2, rng);
  ComplexMatrix emb = ComplexMatrix::Zero(4, 4);
  emb.topLeftCorner(2, 2) = xv.real().cast<Complex>();
  emb.bottomRightCorner(2, 2) = xv.real().cast<Complex>();
  emb.bottomLeftCorner(2, 2) = xv.imag().cast<Complex>();
  emb.topRightCorner(2, 2) = (-xv.imag()).cast<Complex>();
  EXPECT_NEAR(r.objective_value({emb}), p.objective_value({xv}), 1e-13);
  EXPECT_NEAR(r.constraint_values({emb})(0), p.constraint_values({xv})(0), 1e-13);
}

TEST(Sdp, StatusNames) {
  EXPECT_EQ(status_name(Status::kOptimal), "optimal");
  EXPECT_EQ(status_name(Status::kMaxIter), "max_iter");
}

}  // namespace
}  // namespace incompat::sdp
