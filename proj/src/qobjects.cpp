#include "incompat/qobjects.hpp"

#include <array>
#include <cmath>
#include <string>

#include "incompat/errors.hpp"

namespace incompat {
namespace {

void require_channel_choi(const ComplexMatrix& m, int dim_in, int dim_out, double tol,
                          const char* what) {
  if (m.rows() != dim_in * dim_out || m.cols() != dim_in * dim_out) {
    throw DimensionError(std::string(what) + ": Choi matrix has wrong shape");
  }
  if (!is_hermitian(m, 1e-10)) throw ContractError(std::string(what) + ": not Hermitian");
  if (!is_psd(m, tol)) throw ContractError(std::string(what) + ": not completely positive");
  const std::array<int, 1> keep_in{1};
  const ComplexMatrix marg = partial_trace(m, TensorShape({dim_out, dim_in}), keep_in);
  if (max_abs_diff(marg, identity(dim_in) / static_cast<double>(dim_in)) > tol) {
    throw ContractError(std::string(what) + ": not trace preserving (Tr_K J != I/d)");
  }
}

}  // namespace

ChoiMatrix::ChoiMatrix(int dim_in, int dim_out, ComplexMatrix matrix, double tol)
    : dim_in_(dim_in), dim_out_(dim_out) {
  if (dim_in < 1 || dim_out < 1) throw DimensionError("ChoiMatrix: dimensions must be positive");
  require_channel_choi(matrix, dim_in, dim_out, tol, "ChoiMatrix");
  matrix_ = hermitian_part(matrix);
}

Povm::Povm(int dim, std::vector<ComplexMatrix> elements, double tol) : dim_(dim) {
  if (dim < 1) throw DimensionError("Povm: dimension must be positive");
  if (elements.empty()) throw ContractError("Povm: needs at least one element");
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (auto& e : elements) {
    if (e.rows() != dim || e.cols() != dim) throw DimensionError("Povm: element has wrong shape");
    if (!is_hermitian(e, 1e-10)) throw ContractError("Povm: element is not Hermitian");
    e = hermitian_part(e);
    if (!is_psd(e, tol)) throw ContractError("Povm: element is not positive semidefinite");
    sum += e;
  }
  if (max_abs_diff(sum, identity(dim)) > tol) {
    throw ContractError("Povm: elements do not sum to the identity");
  }
  elements_ = std::move(elements);
}

PovmCollection::PovmCollection(std::vector<Povm> povms) : povms_(std::move(povms)) {
  if (povms_.empty()) throw ContractError("PovmCollection: empty collection");
  for (const auto& p : povms_) {
    if (p.dim() != povms_.front().dim() || p.outcomes() != povms_.front().outcomes()) {
      throw DimensionError("PovmCollection: members must share dimension and outcome count");
    }
  }
}

Instrument::Instrument(int dim_in, int dim_out, std::vector<ComplexMatrix> element_chois,
                       double tol)
    : dim_in_(dim_in), dim_out_(dim_out) {
  if (element_chois.empty()) throw ContractError("Instrument: needs at least one element");
  ComplexMatrix total = ComplexMatrix::Zero(dim_in * dim_out, dim_in * dim_out);
  for (auto& e : element_chois) {
    if (e.rows() != dim_in * dim_out || e.cols() != dim_in * dim_out) {
      throw DimensionError("Instrument: element has wrong shape");
    }
    if (!is_hermitian(e, 1e-10)) throw ContractError("Instrument: element is not Hermitian");
    e = hermitian_part(e);
    if (!is_psd(e, tol)) throw ContractError("Instrument: element is not completely positive");
    total += e;
  }
  require_channel_choi(total, dim_in, dim_out, tol, "Instrument");
  elements_ = std::move(element_chois);
}

JointChannel::JointChannel(int dim_in, int n, int dim_out_each, ComplexMatrix choi, double tol)
    : dim_in_(dim_in), n_(n), dim_out_(dim_out_each) {
  if (n < 1) throw DimensionError("JointChannel: needs at least one output");
  const int dout = static_cast<int>(std::lround(std::pow(dim_out_each, n)));
  require_channel_choi(choi, dim_in, dout, tol, "JointChannel");
  choi_ = hermitian_part(choi);
}

TensorShape JointChannel::shape() const {
  std::vector<int> dims(n_, dim_out_);
  dims.push_back(dim_in_);
  return TensorShape(std::move(dims));
}

ComplexMatrix max_entangled_state(int d) {
  if (d < 2) throw DomainError("max_entangled_state: d must be at least 2");
  ComplexVector psi = ComplexVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) psi(i * d + i) = amp;
  return projector(psi);
}

ComplexMatrix choi_of_map(int dim_in,
                          const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  ComplexMatrix out;
  for (int a = 0; a < dim_in; ++a) {
    for (int b = 0; b < dim_in; ++b) {
      const ComplexMatrix unit = matrix_unit(dim_in, a, b);
      ComplexMatrix term = kron(map(unit), unit);
      if (out.size() == 0) {
        out = std::move(term);
      } else {
        out += term;
      }
    }
  }
  return out / static_cast<double>(dim_in);
}

ComplexMatrix kraus_apply(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho) {
  if (kraus.empty()) throw ContractError("kraus_apply: empty Kraus set");
  ComplexMatrix out = ComplexMatrix::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& k : kraus) {
    if (k.cols() != rho.rows()) throw DimensionError("kraus_apply: dimension mismatch");
    out += k * rho * k.adjoint();
  }
  return out;
}

ChoiMatrix choi_from_kraus(const std::vector<ComplexMatrix>& kraus) {
  if (kraus.empty()) throw ContractError("choi_from_kraus: empty Kraus set");
  const int dout = static_cast<int>(kraus.front().rows());
  const int din = static_cast<int>(kraus.front().cols());
  ComplexMatrix sum = ComplexMatrix::Zero(din, din);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din) {
      throw DimensionError("choi_from_kraus: Kraus operators differ in shape");
    }
    sum += k.adjoint() * k;
  }
  if (max_abs_diff(sum, identity(din)) > kValidityTol) {
    throw ContractError("choi_from_kraus: Kraus set is not trace preserving");
  }
  return ChoiMatrix(din, dout,
                    choi_of_map(din, [&](const ComplexMatrix& x) { return kraus_apply(kraus, x); }));
}

ComplexMatrix apply_choi_extended(const ComplexMatrix& choi, int dim_in, int dim_out,
                                  const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() % dim_in != 0) {
    throw DimensionError("apply_channel: input state does not match the channel input");
  }
  const int e = static_cast<int>(rho.rows()) / dim_in;
  ComplexMatrix out = ComplexMatrix::Zero(dim_out * e, dim_out * e);
  for (int k = 0; k < dim_out; ++k) {
    for (int kp = 0; kp < dim_out; ++kp) {
      for (int h = 0; h < dim_in; ++h) {
        for (int hp = 0; hp < dim_in; ++hp) {
          const Complex j = choi(k * dim_in + h, kp * dim_in + hp);
          if (j == Complex(0.0)) continue;
          for (int a = 0; a < e; ++a) {
            for (int ap = 0; ap < e; ++ap) {
              out(k * e + a, kp * e + ap) += j * rho(h * e + a, hp * e + ap);
            }
          }
        }
      }
    }
  }
  return out * static_cast<double>(dim_in);
}

ComplexMatrix apply_channel_extended(const ChoiMatrix& choi, const ComplexMatrix& rho) {
  return apply_choi_extended(choi.matrix(), choi.dim_in(), choi.dim_out(), rho);
}

ComplexMatrix apply_channel(const ChoiMatrix& choi, const ComplexMatrix& rho) {
  if (rho.rows() != choi.dim_in() || rho.cols() != choi.dim_in()) {
    throw DimensionError("apply_channel: state dimension does not match the channel input");
  }
  return apply_channel_extended(choi, rho);
}

ChoiMatrix qc_channel(const Povm& povm, int dim_out) {
  const int o = povm.outcomes();
  const int d = povm.dim();
  if (dim_out == 0) dim_out = o;
  if (dim_out < o) throw DimensionError("qc_channel: output smaller than the outcome count");
  ComplexMatrix j = ComplexMatrix::Zero(dim_out * d, dim_out * d);
  for (int i = 0; i < o; ++i) {
    j += kron(matrix_unit(dim_out, i, i), povm[i].transpose());
  }
  return ChoiMatrix(d, dim_out, j / static_cast<double>(d));
}

ChoiMatrix identity_channel(int d) { return ChoiMatrix(d, d, max_entangled_state(d)); }

ChoiMatrix depolarizing_channel(int d, double visibility) {
  return ChoiMatrix(d, d,
                    visibility * max_entangled_state(d) +
                        (1.0 - visibility) * identity(d * d) / static_cast<double>(d * d));
}

ChoiMatrix dephasing_channel(int d) {
  ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) j(i * d + i, i * d + i) = 1.0 / d;
  return ChoiMatrix(d, d, j);
}

ChoiMatrix constant_channel(int dim_in, const ComplexMatrix& sigma) {
  return ChoiMatrix(dim_in, static_cast<int>(sigma.rows()),
                    kron(sigma, identity(dim_in) / static_cast<double>(dim_in)));
}

ChoiMatrix pad_output(const ChoiMatrix& choi, int dim_out) {
  if (dim_out < choi.dim_out()) throw DimensionError("pad_output: target is smaller");
  if (dim_out == choi.dim_out()) return choi;
  const ComplexMatrix v = ComplexMatrix::Identity(dim_out, choi.dim_out());
  const ComplexMatrix w = kron(v, identity(choi.dim_in()));
  return ChoiMatrix(choi.dim_in(), dim_out, w * choi.matrix() * w.adjoint());
}

ComplexMatrix symmetric_projector(int d) {
  if (d < 2) throw DomainError("symmetric_projector: d must be at least 2");
  ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) swap(a * d + b, b * d + a) = 1.0;
  }
  return 0.5 * (identity(d * d) + swap);
}

JointChannel cloning_channel(int d) {
  const ComplexMatrix s = symmetric_projector(d);
  const double norm = 2.0 / (d + 1);
  ComplexMatrix j = choi_of_map(d, [&](const ComplexMatrix& rho) {
    return (norm * s * kron(rho, identity(d)) * s).eval();
  });
  return JointChannel(d, 2, d, std::move(j));
}

double cloning_visibility(int d) { return (d + 2.0) / (2.0 * (d + 1.0)); }

ComplexMatrix marginal_operator(const ComplexMatrix& op, int n, int dim_out, int dim_in, int x) {
  if (x < 0 || x >= n) throw DomainError("marginal: output index out of range");
  std::vector<int> dims(n, dim_out);
  dims.push_back(dim_in);
  const std::array<int, 2> keep{x, n};
  return partial_trace(op, TensorShape(std::move(dims)), keep);
}

ChoiMatrix marginal(const JointChannel& joint, int x) {
  return ChoiMatrix(joint.dim_in(), joint.dim_out_each(),
                    marginal_operator(joint.choi(), joint.n(), joint.dim_out_each(),
                                      joint.dim_in(), x));
}

Povm instrument_povm(const Instrument& instr) {
  const std::array<int, 1> keep_in{1};
  const TensorShape shape({instr.dim_out(), instr.dim_in()});
  std::vector<ComplexMatrix> elems;
  elems.reserve(instr.outcomes());
  for (const auto& j : instr.elements()) {
    elems.push_back(static_cast<double>(instr.dim_in()) *
                    partial_trace(j, shape, keep_in).transpose());
  }
  return Povm(instr.dim_in(), std::move(elems));
}

ChoiMatrix instrument_total(const Instrument& instr) {
  ComplexMatrix total = ComplexMatrix::Zero(instr.elements().front().rows(),
                                            instr.elements().front().cols());
  for (const auto& j : instr.elements()) total += j;
  return ChoiMatrix(instr.dim_in(), instr.dim_out(), total);
}

Instrument luders_instrument(const Povm& projective) {
  const int d = projective.dim();
  std::vector<ComplexMatrix> elems;
  for (const auto& p : projective.elements()) {
    if (max_abs_diff(p * p, p) > 1e-9) {
      throw ContractError("luders_instrument: POVM is not projective");
    }
    elems.push_back(choi_of_map(d, [&](const ComplexMatrix& rho) { return (p * rho * p).eval(); }));
  }
  return Instrument(d, d, std::move(elems));
}

JointChannel trash_and_prepare(const ChoiMatrix& channel, const ComplexMatrix& sigma) {
  if (sigma.rows() != channel.dim_out()) {
    throw DimensionError("trash_and_prepare: sigma must live on the channel output space");
  }
  ComplexMatrix j = choi_of_map(channel.dim_in(), [&](const ComplexMatrix& rho) {
    return kron(apply_choi_extended(channel.matrix(), channel.dim_in(), channel.dim_out(), rho),
                sigma);
  });
  return JointChannel(channel.dim_in(), 2, channel.dim_out(), std::move(j));
}

ComplexMatrix normalize_choi(const ComplexMatrix& s, int dim_in, int dim_out) {
  return normalize_instrument({s}, dim_in, dim_out).front();
}

std::vector<ComplexMatrix> normalize_instrument(const std::vector<ComplexMatrix>& elements,
                                                int dim_in, int dim_out) {
  if (elements.empty()) throw ContractError("normalize_instrument: no elements");
  ComplexMatrix total = ComplexMatrix::Zero(dim_out * dim_in, dim_out * dim_in);
  for (const auto& e : elements) {
    if (e.rows() != total.rows() || e.cols() != total.cols()) {
      throw DimensionError("normalize_instrument: element has wrong shape");
    }
    total += e;
  }
  const std::array<int, 1> keep_in{1};
  const ComplexMatrix t = static_cast<double>(dim_in) *
                          partial_trace(hermitian_part(total), TensorShape({dim_out, dim_in}), keep_in);
  const ComplexMatrix w = kron(identity(dim_out), inverse_sqrt_psd(t));
  std::vector<ComplexMatrix> out;
  out.reserve(elements.size());
  for (const auto& e : elements) {
    out.push_back(hermitian_part(w * e * w));
  }
  return out;
}

std::vector<ComplexMatrix> normalize_povm(const std::vector<ComplexMatrix>& elements) {
  if (elements.empty()) throw ContractError("normalize_povm: no elements");
  ComplexMatrix total = ComplexMatrix::Zero(elements.front().rows(), elements.front().cols());
  for (const auto& e : elements) total += e;
  const ComplexMatrix w = inverse_sqrt_psd(hermitian_part(total));
  std::vector<ComplexMatrix> out;
  out.reserve(elements.size());
  for (const auto& e : elements) out.push_back(hermitian_part(w * e * w));
  return out;
}

}  // namespace incompat
