#include "incompat/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "incompat/errors.hpp"
#include "incompat/kernels.hpp"

namespace incompat {

TensorShape::TensorShape(std::vector<int> factor_dims) : dims_(std::move(factor_dims)) {
  for (int d : dims_) {
    if (d < 1) throw DimensionError("TensorShape: factor dimensions must be positive");
  }
}

int TensorShape::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron(std::span<const ComplexMatrix> factors) {
  if (factors.empty()) return ComplexMatrix::Identity(1, 1);
  ComplexMatrix out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

namespace {

// Splits every composite index into (kept index, traced index).
struct FactorSplit {
  int kept_dim = 1;
  int traced_dim = 1;
  std::vector<int> kept;
  std::vector<int> traced;
};

FactorSplit split_factors(const TensorShape& shape, std::span<const int> keep) {
  const int nf = static_cast<int>(shape.factors());
  if (keep.empty()) throw DimensionError("partial_trace: keep set is empty");
  std::vector<bool> is_kept(nf, false);
  int prev = -1;
  for (int k : keep) {
    if (k < 0 || k >= nf) throw DimensionError("partial_trace: factor index out of range");
    if (k <= prev) throw DimensionError("partial_trace: keep set must be strictly increasing");
    is_kept[k] = true;
    prev = k;
  }
  FactorSplit s;
  for (int f = 0; f < nf; ++f) (is_kept[f] ? s.kept_dim : s.traced_dim) *= shape[f];
  const int total = shape.total();
  s.kept.resize(total);
  s.traced.resize(total);
  std::vector<int> digits(nf, 0);
  for (int idx = 0; idx < total; ++idx) {
    int k = 0, t = 0;
    for (int f = 0; f < nf; ++f) {
      if (is_kept[f]) {
        k = k * shape[f] + digits[f];
      } else {
        t = t * shape[f] + digits[f];
      }
    }
    s.kept[idx] = k;
    s.traced[idx] = t;
    for (int f = nf - 1; f >= 0; --f) {
      if (++digits[f] < shape[f]) break;
      digits[f] = 0;
    }
  }
  return s;
}

// groups[t] lists the composite indices whose traced part equals t.
std::vector<std::vector<int>> group_by_traced(const FactorSplit& s) {
  std::vector<std::vector<int>> groups(s.traced_dim);
  for (int idx = 0; idx < static_cast<int>(s.traced.size()); ++idx) {
    groups[s.traced[idx]].push_back(idx);
  }
  return groups;
}

void check_square(const ComplexMatrix& a, const TensorShape& shape, const char* what) {
  if (a.rows() != a.cols() || a.rows() != shape.total()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " but shape has total dimension " +
                         std::to_string(shape.total()));
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& a, const TensorShape& shape,
                            std::span<const int> keep) {
  check_square(a, shape, "partial_trace");
  const FactorSplit s = split_factors(shape, keep);
  ComplexMatrix out = ComplexMatrix::Zero(s.kept_dim, s.kept_dim);
  for (const auto& group : group_by_traced(s)) {
    for (int r : group) {
      for (int c : group) out(s.kept[r], s.kept[c]) += a(r, c);
    }
  }
  return out;
}

ComplexMatrix lift(const ComplexMatrix& a, const TensorShape& shape, std::span<const int> keep) {
  const FactorSplit s = split_factors(shape, keep);
  if (a.rows() != s.kept_dim || a.cols() != s.kept_dim) {
    throw DimensionError("lift: operator does not match the kept factors");
  }
  ComplexMatrix out = ComplexMatrix::Zero(shape.total(), shape.total());
  for (const auto& group : group_by_traced(s)) {
    for (int r : group) {
      for (int c : group) out(r, c) = a(s.kept[r], s.kept[c]);
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& a, const TensorShape& shape, int factor) {
  check_square(a, shape, "partial_transpose");
  if (factor < 0 || factor >= static_cast<int>(shape.factors())) {
    throw DimensionError("partial_transpose: factor index out of range");
  }
  int inner = 1;
  for (std::size_t f = factor + 1; f < shape.factors(); ++f) inner *= shape[f];
  const int df = shape[factor];
  const int n = shape.total();
  ComplexMatrix out(n, n);
  for (int r = 0; r < n; ++r) {
    const int rd = (r / inner) % df;
    for (int c = 0; c < n; ++c) {
      const int cd = (c / inner) % df;
      const int r2 = r + (cd - rd) * inner;
      const int c2 = c + (rd - cd) * inner;
      out(r2, c2) = a(r, c);
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

EigenSystem eig_hermitian(const ComplexMatrix& a) {
  if (!is_hermitian(a)) throw ContractError("eig_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  const Eigen::Index n = a.rows();
  EigenSystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = es.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RealVector eigenvalues_hermitian(const ComplexMatrix& a) {
  if (!is_hermitian(a)) throw ContractError("eigenvalues_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

double min_eigenvalue(const ComplexMatrix& a) {
  return eigenvalues_hermitian(a).minCoeff();
}

double op_norm(const ComplexMatrix& a) {
  const RealVector ev = eigenvalues_hermitian(a);
  if (ev.minCoeff() < -kPsdTol * std::max(1.0, ev.maxCoeff())) {
    throw ContractError("op_norm: matrix is not positive semidefinite");
  }
  return std::max(0.0, ev(0));
}

bool is_psd(const ComplexMatrix& a, double tol) {
  return min_eigenvalue(a) >= -tol;
}

ComplexMatrix psd_part(const ComplexMatrix& a) {
  EigenSystem es = eig_hermitian(a);
  RealVector clipped = es.values.cwiseMax(0.0);
  return es.vectors * clipped.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix inverse_sqrt_psd(const ComplexMatrix& a, double floor) {
  EigenSystem es = eig_hermitian(a);
  RealVector inv(es.values.size());
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv(i) = es.values(i) > floor ? 1.0 / std::sqrt(es.values(i)) : 0.0;
  }
  return es.vectors * inv.cast<Complex>().asDiagonal() * es.vectors.adjoint();
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.cols() || a.cols() != b.rows()) {
    throw DimensionError("trace_product: shape mismatch");
  }
  // For Hermitian b, Tr[a b] = sum_ij a_ij conj(b_ij); its real part is the
  // dot product of the interleaved (re, im) storage.
  const auto n = static_cast<std::size_t>(a.size()) * 2;
  const auto* pa = reinterpret_cast<const double*>(a.data());
  const auto* pb = reinterpret_cast<const double*>(b.data());
  return kernels::dot({pa, n}, {pb, n});
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix matrix_unit(int n, int row, int col) {
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(row, col) = 1.0;
  return e;
}

std::vector<ComplexMatrix> hermitian_basis(int n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n) * n);
  const double r = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < n; ++a) basis.push_back(matrix_unit(n, a, a));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(a, b) = r;
      s(b, a) = r;
      basis.push_back(std::move(s));
      ComplexMatrix t = ComplexMatrix::Zero(n, n);
      t(a, b) = Complex(0.0, r);
      t(b, a) = Complex(0.0, -r);
      basis.push_back(std::move(t));
    }
  }
  return basis;
}

std::vector<ComplexMatrix> traceless_hermitian_basis(int n) {
  std::vector<ComplexMatrix> basis;
  for (int a = 0; a + 1 < n; ++a) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(a, a) = 1.0;
    e(a + 1, a + 1) = -1.0;
    basis.push_back(std::move(e));
  }
  std::vector<ComplexMatrix> all = hermitian_basis(n);
  for (std::size_t i = n; i < all.size(); ++i) basis.push_back(std::move(all[i]));
  return basis;
}

}  // namespace incompat
