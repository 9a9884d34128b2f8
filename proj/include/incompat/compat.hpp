#pragma once

// Compatibility of measurement collections, channel collections and
// measurement-channel pairs, decided by max-margin semidefinite programs.
//
// Each check maximizes t subject to the joint object G satisfying the
// marginal equalities and G >= t I. The collection is compatible iff the
// optimal margin t is at least -kCompatMarginTol.

#include <optional>
#include <vector>

#include "incompat/qobjects.hpp"
#include "incompat/sdp.hpp"

namespace incompat {

inline constexpr double kCompatMarginTol = 1e-7;
// Parent POVMs have o^n elements; larger collections are rejected.
inline constexpr int kMaxCollectionSize = 4;
inline constexpr int kMaxOutcomes = 4;

struct CompatibilityVerdict {
  bool compatible = false;
  double margin = 0.0;
  sdp::Status status = sdp::Status::kMaxIter;
  // Exactly one of these is set when compatible, matching the check.
  std::optional<std::vector<ComplexMatrix>> parent;  // G_lambda, lambda in [0, o^n)
  std::optional<JointChannel> joint;
  std::optional<Instrument> instrument;
};

CompatibilityVerdict check_measurements(const PovmCollection& ms, const sdp::SolverOptions& opts = {});
CompatibilityVerdict check_channels(const std::vector<ChoiMatrix>& chs,
                                    const sdp::SolverOptions& opts = {});
CompatibilityVerdict check_pair(const Povm& m, const ChoiMatrix& ch,
                                const sdp::SolverOptions& opts = {});

// Deterministic assignments lambda: {0..n-1} -> {0..o-1}, encoded in base o
// with x = 0 as the most significant digit.
int assignment_count(int n, int o);
int assignment_outcome(int lambda, int x, int n, int o);

// Adjoints of the linear maps that define the compatible cones. Each takes
// a test operator on the codomain and returns the operator on the domain.
namespace cone {

TensorShape joint_shape(int n, int dim_out, int dim_in);
// G -> Tr_{all outputs but x} G, G on K^(x)n (x) H.
ComplexMatrix marginal_adjoint(const ComplexMatrix& e, int n, int dim_out, int dim_in, int x);
// G -> Tr_{K^(x)n} G.
ComplexMatrix input_adjoint(const ComplexMatrix& e, int n, int dim_out, int dim_in);
// J -> d (Tr_K J)^T, J on K (x) H.
ComplexMatrix povm_adjoint(const ComplexMatrix& e, int dim_out, int dim_in);

}  // namespace cone

// Parent POVM -> the x-th marginal POVM.
std::vector<ComplexMatrix> parent_marginal(const std::vector<ComplexMatrix>& parent, int n, int o,
                                           int x);

}  // namespace incompat
