#pragma once

// Dense complex linear algebra for operators on tensor-product spaces.
//
// Composite indices are row-major over tensor factors: for factors with
// dimensions (n0, n1, ..., nk) the basis vector |i0 i1 ... ik> sits at
// ((i0 * n1 + i1) * n2 + ...) * nk + ik, which is the ordering produced by
// kron(a, b). Channel Choi matrices put the output factor(s) first.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace incompat {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;

// Ordered subsystem dimensions annotating a square operator.
class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<int> factor_dims);

  const std::vector<int>& dims() const { return dims_; }
  std::size_t factors() const { return dims_.size(); }
  int operator[](std::size_t i) const { return dims_[i]; }
  // Product of all factor dimensions.
  int total() const;

 private:
  std::vector<int> dims_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::span<const ComplexMatrix> factors);

// Traces out every factor not listed in `keep`. The kept factors stay in
// their original relative order. Throws DimensionError when `shape` does not
// describe `a` or `keep` is empty, unsorted or out of range.
ComplexMatrix partial_trace(const ComplexMatrix& a, const TensorShape& shape,
                            std::span<const int> keep);

// Adjoint of partial_trace: places `a` on the factors in `keep` and the
// identity on every other factor.
ComplexMatrix lift(const ComplexMatrix& a, const TensorShape& shape,
                   std::span<const int> keep);

// Transpose of the factor listed in `factor` only.
ComplexMatrix partial_transpose(const ComplexMatrix& a, const TensorShape& shape,
                                int factor);

struct EigenSystem {
  RealVector values;     // descending
  ComplexMatrix vectors; // columns, matching `values`
};

// Throws ContractError on non-Hermitian input. The input is symmetrized
// before the eigensolve.
EigenSystem eig_hermitian(const ComplexMatrix& a);
RealVector eigenvalues_hermitian(const ComplexMatrix& a);
double min_eigenvalue(const ComplexMatrix& a);

// Largest eigenvalue of a PSD matrix. Throws ContractError otherwise.
double op_norm(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);
bool is_psd(const ComplexMatrix& a, double tol = kPsdTol);

ComplexMatrix hermitian_part(const ComplexMatrix& a);
// Clips negative eigenvalues to zero.
ComplexMatrix psd_part(const ComplexMatrix& a);
ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& a, double floor = 1e-14);

// Re Tr[a b] for Hermitian a and b.
double trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix identity(int n);
ComplexMatrix projector(const ComplexVector& v);
ComplexMatrix matrix_unit(int n, int row, int col);

// Frobenius-orthonormal basis of the real vector space of n x n Hermitian
// matrices: diagonal units, then (E_ab + E_ba)/sqrt2 and i(E_ab - E_ba)/sqrt2
// for a < b.
std::vector<ComplexMatrix> hermitian_basis(int n);

// A basis of the traceless n x n Hermitian matrices (not orthonormal).
std::vector<ComplexMatrix> traceless_hermitian_basis(int n);

}  // namespace incompat
