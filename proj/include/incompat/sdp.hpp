#pragma once

// Standard-form semidefinite programs over Hermitian PSD blocks.
//
//   primal:  minimize    sum_b Tr[C_b X_b] + offset
//            subject to  sum_b Tr[A_kb X_b] = r_k,   X_b >= 0
//   dual:    maximize    sum_k r_k y_k + offset
//            subject to  Z_b = C_b - sum_k y_k A_kb >= 0
//
// Complex blocks are solved through their real symmetric embedding
// H = X + iY  ->  [[X, -Y], [Y, X]]. The solver is a primal-dual
// interior-point method (HKM direction, Mehrotra predictor-corrector) on
// dense blocks with sparse constraint coefficients.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "incompat/matrix.hpp"

namespace incompat::sdp {

enum class BlockKind { kReal, kComplex };

struct BlockSpec {
  int dim;
  BlockKind kind;
};

// One nonzero of a Hermitian coefficient matrix. Both (row, col) and
// (col, row) are listed for off-diagonal entries.
struct Entry {
  int block;
  int row;
  int col;
  Complex value;
};

struct Constraint {
  std::vector<Entry> entries;
  double rhs = 0.0;
};

struct Term {
  int block;
  ComplexMatrix coeff;
};

class SdpProblem {
 public:
  int add_block(int dim, BlockKind kind = BlockKind::kComplex);
  // A nonnegative scalar variable with the given cost (a 1x1 real block).
  int add_scalar(double cost = 0.0);

  void set_objective(int block, const ComplexMatrix& cost);
  // sum_b Tr[coeff_b X_b] = rhs; returns the constraint index.
  int add_constraint(const std::vector<Term>& terms, double rhs);
  int add_constraint(Constraint c);

  // A strictly feasible primal point used to start the solver.
  void set_initial_point(std::vector<ComplexMatrix> x0) { initial_ = std::move(x0); }
  const std::optional<std::vector<ComplexMatrix>>& initial_point() const { return initial_; }

  double objective_offset = 0.0;

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }
  const BlockSpec& block(int b) const { return blocks_[b]; }
  const std::vector<ComplexMatrix>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }

  double objective_value(const std::vector<ComplexMatrix>& x) const;
  RealVector constraint_values(const std::vector<ComplexMatrix>& x) const;
  // sum_k y_k A_kb for every block b.
  std::vector<ComplexMatrix> adjoint(const RealVector& y) const;

 private:
  std::vector<BlockSpec> blocks_;
  std::vector<ComplexMatrix> objective_;
  std::vector<Constraint> constraints_;
  std::optional<std::vector<ComplexMatrix>> initial_;
};

// Adjoint of one linear map entering a Hermitian-valued equality.
struct AdjointTerm {
  int block;
  std::function<ComplexMatrix(const ComplexMatrix&)> adjoint;
};

// Adds the constraints  sum_t L_t(X_{b_t}) = rhs  where rhs is a dim x dim
// Hermitian matrix, by testing against every element of `basis` (default:
// the orthonormal Hermitian basis). Each AdjointTerm supplies L_t^*.
void add_hermitian_equality(SdpProblem& problem, int dim, const std::vector<AdjointTerm>& terms,
                            const ComplexMatrix& rhs,
                            const std::vector<ComplexMatrix>* basis = nullptr);

enum class Status { kOptimal, kInfeasible, kUnbounded, kMaxIter };
std::string_view status_name(Status s);

struct SolverOptions {
  double feas_tol = 1e-8;
  double gap_tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

struct SdpSolution {
  Status status = Status::kMaxIter;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;               // |primal - dual|
  double primal_residual = 0.0;   // ||r - A(X)||_inf
  double dual_residual = 0.0;     // ||C - A^T y - Z||_max
  std::vector<ComplexMatrix> block_values;  // X_b
  std::vector<ComplexMatrix> dual_slacks;   // Z_b
  RealVector multipliers;                   // y_k, one per constraint
  int iterations = 0;
  int removed_constraints = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

// Rewrites every complex block as a real block of twice the dimension.
// Coefficients are halved so that objective and constraint values of
// embedded points equal those of the original points.
SdpProblem real_embed(const SdpProblem& problem);

// Indices of a maximal linearly independent subset of the constraints
// (rank threshold 1e-10), in increasing order.
std::vector<int> independent_constraints(const SdpProblem& problem, double threshold = 1e-10);

SdpSolution solve(const SdpProblem& problem, const SolverOptions& opts = {});

// A program in linear-matrix-inequality form over free real variables:
//
//   maximize    sum_k c_k y_k + offset
//   subject to  F_b(y) = F_b0 + sum_k y_k F_bk >= 0   for every block b.
//
// It is solved as the dual side of the standard form above.
class LmiProgram {
 public:
  // Handle to a Hermitian matrix variable expanded in the orthonormal basis.
  struct HermitianVar {
    int first;
    int dim;
  };

  int add_variable(double cost = 0.0);
  // Objective contribution Re Tr[cost V].
  HermitianVar add_hermitian_variable(int dim, const ComplexMatrix& cost);
  HermitianVar add_hermitian_variable(int dim);

  int add_block(int dim, const ComplexMatrix& constant, BlockKind kind = BlockKind::kComplex);
  // Adds y_var * coeff to block b.
  void add_term(int block, int var, const ComplexMatrix& coeff);
  // Adds map(V) to block b, map linear.
  void add_term(int block, const HermitianVar& v,
                const std::function<ComplexMatrix(const ComplexMatrix&)>& map);

  double offset = 0.0;

  int num_variables() const { return static_cast<int>(cost_.size()); }
  SdpProblem to_problem() const;

  ComplexMatrix value(const HermitianVar& v, const RealVector& y) const;

 private:
  std::vector<double> cost_;
  std::vector<BlockSpec> blocks_;
  std::vector<ComplexMatrix> constants_;
  // terms_[var] = list of (block, coeff)
  std::vector<std::vector<Term>> terms_;
};

struct LmiSolution {
  SdpSolution raw;
  double value = 0.0;                  // optimal LMI objective
  RealVector y;
  std::vector<ComplexMatrix> blocks;   // F_b(y), PSD
};

LmiSolution solve(const LmiProgram& program, const SolverOptions& opts = {});

}  // namespace incompat::sdp
