#include "incompat/sampling.hpp"

#include <array>
#include <string>

#include "incompat/errors.hpp"

namespace incompat::sampling {

Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return Rng(seq);
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Column-major fill with real part drawn first keeps streams reproducible.
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  return g;
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, d, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

ComplexVector haar_pure_state(int d, Rng& rng) {
  ComplexVector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

ComplexMatrix random_state(int d, Rng& rng) {
  const ComplexVector psi = haar_pure_state(d * d, rng);
  const std::array<int, 1> keep{0};
  return hermitian_part(partial_trace(projector(psi), TensorShape({d, d}), keep));
}

ComplexMatrix random_hermitian(int d, Rng& rng) { return hermitian_part(ginibre(d, d, rng)); }

Povm random_projective_povm(int d, Rng& rng) {
  const EigenSystem es = eig_hermitian(random_hermitian(d, rng));
  std::vector<ComplexMatrix> elems;
  for (int i = 0; i < d; ++i) elems.push_back(projector(es.vectors.col(i)));
  return Povm(d, std::move(elems));
}

Povm random_povm(int d, int outcomes, Rng& rng) {
  if (outcomes < 1) throw DomainError("random_povm: needs at least one outcome");
  std::vector<ComplexMatrix> w;
  for (int i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = ginibre(d, d, rng);
    w.push_back(g * g.adjoint());
  }
  return Povm(d, normalize_povm(w));
}

namespace {

// r Kraus operators of shape dout x din can only sum to the identity when
// r * dout >= din.
void check_kraus_rank(int dim_in, int dim_out, int rank) {
  if (rank < 1 || rank > dim_in * dim_out || rank * dim_out < dim_in) {
    throw DomainError("random channel: Kraus rank " + std::to_string(rank) + " impossible for " +
                      std::to_string(dim_in) + " -> " + std::to_string(dim_out));
  }
}

}  // namespace

ChoiMatrix random_channel(int dim_in, int dim_out, Rng& rng, int kraus_rank) {
  const int n = dim_in * dim_out;
  const int rank = kraus_rank > 0 ? kraus_rank : n;
  check_kraus_rank(dim_in, dim_out, rank);
  const ComplexMatrix g = ginibre(n, rank, rng);
  return ChoiMatrix(dim_in, dim_out, normalize_choi(g * g.adjoint(), dim_in, dim_out));
}

JointChannel random_joint_channel(int dim_in, int n, int dim_out_each, Rng& rng, int kraus_rank) {
  int outs = 1;
  for (int x = 0; x < n; ++x) outs *= dim_out_each;
  const int rank = kraus_rank > 0 ? kraus_rank : outs * dim_in;
  check_kraus_rank(dim_in, outs, rank);
  const ComplexMatrix g = ginibre(outs * dim_in, rank, rng);
  return JointChannel(dim_in, n, dim_out_each, normalize_choi(g * g.adjoint(), dim_in, outs));
}

Instrument random_instrument(int dim_in, int dim_out, int outcomes, Rng& rng) {
  const int n = dim_in * dim_out;
  std::vector<ComplexMatrix> w;
  for (int i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = ginibre(n, n, rng);
    w.push_back(g * g.adjoint());
  }
  return Instrument(dim_in, dim_out, normalize_instrument(w, dim_in, dim_out));
}

}  // namespace incompat::sampling
