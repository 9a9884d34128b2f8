#pragma once

// Quantum objects in the representation used throughout the library.
//
// A channel from an input space H (dim d) to an output space K (dim d') is
// stored as its normalized Choi state J = (Lambda (x) id)(|Psi+><Psi+|) on
// K (x) H, so that Tr J = 1 and Tr_K J = I/d. All transposes are taken in
// the computational basis.

#include <functional>
#include <vector>

#include "incompat/matrix.hpp"

namespace incompat {

inline constexpr double kValidityTol = 1e-9;

class ChoiMatrix {
 public:
  // Validates complete positivity and trace preservation to `tol`.
  ChoiMatrix(int dim_in, int dim_out, ComplexMatrix matrix, double tol = kValidityTol);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  TensorShape shape() const { return TensorShape({dim_out_, dim_in_}); }

 private:
  int dim_in_;
  int dim_out_;
  ComplexMatrix matrix_;
};

class Povm {
 public:
  Povm(int dim, std::vector<ComplexMatrix> elements, double tol = kValidityTol);

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const ComplexMatrix& operator[](int i) const { return elements_[i]; }

 private:
  int dim_;
  std::vector<ComplexMatrix> elements_;
};

class PovmCollection {
 public:
  explicit PovmCollection(std::vector<Povm> povms);

  int size() const { return static_cast<int>(povms_.size()); }
  int dim() const { return povms_.front().dim(); }
  int outcomes() const { return povms_.front().outcomes(); }
  const Povm& operator[](int x) const { return povms_[x]; }
  const std::vector<Povm>& povms() const { return povms_; }

 private:
  std::vector<Povm> povms_;
};

// One PSD Choi-like operator per outcome on K (x) H whose sum is a channel.
class Instrument {
 public:
  Instrument(int dim_in, int dim_out, std::vector<ComplexMatrix> element_chois,
             double tol = kValidityTol);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return dim_out_; }
  int outcomes() const { return static_cast<int>(elements_.size()); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  int dim_in_;
  int dim_out_;
  std::vector<ComplexMatrix> elements_;
};

// Choi state of a channel H -> K^(x)n, factor order K_1 (x) ... (x) K_n (x) H.
class JointChannel {
 public:
  JointChannel(int dim_in, int n, int dim_out_each, ComplexMatrix choi,
               double tol = kValidityTol);

  int dim_in() const { return dim_in_; }
  int n() const { return n_; }
  int dim_out_each() const { return dim_out_; }
  const ComplexMatrix& choi() const { return choi_; }
  TensorShape shape() const;

 private:
  int dim_in_;
  int n_;
  int dim_out_;
  ComplexMatrix choi_;
};

// |Psi+><Psi+| with |Psi+> = d^{-1/2} sum_i |ii>. Throws DomainError for d < 2.
ComplexMatrix max_entangled_state(int d);

ChoiMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus);

// Choi state of an arbitrary linear map given by its action on operators.
ComplexMatrix choi_of_map(int dim_in, const std::function<ComplexMatrix(const ComplexMatrix&)>& map);

// Lambda(rho) = d Tr_H[J (I_K (x) rho^T)].
ComplexMatrix apply_channel(const ChoiMatrix& choi, const ComplexMatrix& rho);
// (Lambda (x) id)(rho) for rho on H (x) E, any ancilla dimension E.
ComplexMatrix apply_channel_extended(const ChoiMatrix& choi, const ComplexMatrix& rho);
// Same contraction without validating `choi` (any operator on K (x) H).
ComplexMatrix apply_choi_extended(const ComplexMatrix& choi, int dim_in, int dim_out,
                                  const ComplexMatrix& rho);

ComplexMatrix kraus_apply(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho);

// Quantum-to-classical channel rho -> sum_i Tr[rho M_i] |i><i|, with Choi
// (1/d) sum_i |i><i| (x) M_i^T. `dim_out` defaults to the outcome count and
// may be larger (the classical register then occupies the first o levels).
ChoiMatrix qc_channel(const Povm& povm, int dim_out = 0);

ChoiMatrix identity_channel(int d);
// rho -> c rho + (1 - c) Tr[rho] I/d.
ChoiMatrix depolarizing_channel(int d, double visibility);
// rho -> sum_i <i|rho|i> |i><i|.
ChoiMatrix dephasing_channel(int d);
// rho -> Tr[rho] sigma.
ChoiMatrix constant_channel(int dim_in, const ComplexMatrix& sigma);

// Isometric embedding of the output into a larger space of dimension `dim_out`.
ChoiMatrix pad_output(const ChoiMatrix& choi, int dim_out);

// (I + SWAP)/2 on H (x) H.
ComplexMatrix symmetric_projector(int d);
// The 1 -> 2 optimal cloner (2/(d+1)) S (rho (x) I) S.
JointChannel cloning_channel(int d);
// Visibility (d+2)/(2(d+1)) of the cloner's marginals.
double cloning_visibility(int d);

// Choi matrix of the x-th output marginal (0-based).
ChoiMatrix marginal(const JointChannel& joint, int x);
// Marginal of an unvalidated operator on K^(x)n (x) H.
ComplexMatrix marginal_operator(const ComplexMatrix& op, int n, int dim_out, int dim_in, int x);

// M_i = d (Tr_K J_i)^T.
Povm instrument_povm(const Instrument& instr);
ChoiMatrix instrument_total(const Instrument& instr);
// The instrument rho -> P_i rho P_i for a projective measurement {P_i}.
Instrument luders_instrument(const Povm& projective);

// Congruence by (I_K (x) T^{-1/2}) with T = d Tr_K of the total, so that the
// result is exactly trace preserving. Used to clean up solver output and to
// turn random PSD operators into channels. Operators act on K (x) H with
// dim(H) = dim_in; T must be invertible.
ComplexMatrix normalize_choi(const ComplexMatrix& s, int dim_in, int dim_out);
std::vector<ComplexMatrix> normalize_instrument(const std::vector<ComplexMatrix>& elements,
                                                int dim_in, int dim_out);
// S^{-1/2} E_i S^{-1/2} with S the sum of the elements.
std::vector<ComplexMatrix> normalize_povm(const std::vector<ComplexMatrix>& elements);

// Joint channel rho -> Lambda(rho) (x) sigma. Its marginals are Lambda and
// the constant channel preparing sigma.
JointChannel trash_and_prepare(const ChoiMatrix& channel, const ComplexMatrix& sigma);

}  // namespace incompat
