#include "incompat/compat.hpp"

#include <numeric>

#include "incompat/errors.hpp"

namespace incompat {

int assignment_count(int n, int o) {
  int c = 1;
  for (int x = 0; x < n; ++x) c *= o;
  return c;
}

int assignment_outcome(int lambda, int x, int n, int o) {
  for (int k = n - 1; k > x; --k) lambda /= o;
  return lambda % o;
}

namespace cone {

TensorShape joint_shape(int n, int dim_out, int dim_in) {
  std::vector<int> dims(n, dim_out);
  dims.push_back(dim_in);
  return TensorShape(std::move(dims));
}

ComplexMatrix marginal_adjoint(const ComplexMatrix& e, int n, int dim_out, int dim_in, int x) {
  const int keep[] = {x, n};
  return lift(e, joint_shape(n, dim_out, dim_in), keep);
}

ComplexMatrix input_adjoint(const ComplexMatrix& e, int n, int dim_out, int dim_in) {
  const int keep[] = {n};
  return lift(e, joint_shape(n, dim_out, dim_in), keep);
}

ComplexMatrix povm_adjoint(const ComplexMatrix& e, int dim_out, int dim_in) {
  return static_cast<double>(dim_in) * kron(identity(dim_out), e.transpose());
}

}  // namespace cone

std::vector<ComplexMatrix> parent_marginal(const std::vector<ComplexMatrix>& parent, int n, int o,
                                           int x) {
  const Eigen::Index d = parent.front().rows();
  std::vector<ComplexMatrix> out(o, ComplexMatrix::Zero(d, d));
  for (int l = 0; l < static_cast<int>(parent.size()); ++l) {
    out[assignment_outcome(l, x, n, o)] += parent[l];
  }
  return out;
}

namespace {

sdp::AdjointTerm identity_term(int block) {
  return {block, [](const ComplexMatrix& e) { return e; }};
}

// Replaces every block G_b of a feasibility problem by X_b + (u - 1) I with
// X_b >= 0 and a new scalar u >= 0 that is maximized. Returns u's block.
int add_margin(sdp::SdpProblem& p) {
  const int feasibility_blocks = p.num_blocks();
  sdp::SdpProblem out;
  for (int b = 0; b < feasibility_blocks; ++b) out.add_block(p.block(b).dim, p.block(b).kind);
  const int u = out.add_scalar(-1.0);
  for (auto c : p.constraints()) {
    double shift = 0.0;
    for (const auto& e : c.entries) {
      if (e.row == e.col) shift += e.value.real();
    }
    if (shift != 0.0) c.entries.push_back({u, 0, 0, shift});
    c.rhs += shift;
    out.add_constraint(std::move(c));
  }
  p = std::move(out);
  return u;
}

struct MarginResult {
  sdp::SdpSolution sol;
  double margin = -1.0;
  std::vector<ComplexMatrix> g;  // X_b + (u-1) I for the original blocks
};

MarginResult solve_margin(sdp::SdpProblem p, const sdp::SolverOptions& opts) {
  const int nb = p.num_blocks();
  const int u = add_margin(p);
  MarginResult r;
  r.sol = sdp::solve(p, opts);
  if (r.sol.status == sdp::Status::kInfeasible) return r;
  r.margin = r.sol.block_values[u](0, 0).real() - 1.0;
  for (int b = 0; b < nb; ++b) {
    const auto& x = r.sol.block_values[b];
    r.g.push_back(x + r.margin * identity(static_cast<int>(x.rows())));
  }
  return r;
}

bool accept(const MarginResult& r) {
  return r.sol.optimal() && r.margin >= -kCompatMarginTol;
}

// Tiny negative eigenvalues allowed by the margin tolerance are clipped
// before the joint object is renormalized exactly.
ComplexMatrix clip(const ComplexMatrix& g) { return psd_part(hermitian_part(g)); }

}  // namespace

CompatibilityVerdict check_measurements(const PovmCollection& ms, const sdp::SolverOptions& opts) {
  const int n = ms.size();
  const int o = ms.outcomes();
  const int d = ms.dim();
  if (n > kMaxCollectionSize || o > kMaxOutcomes) {
    throw DomainError("check_measurements: at most 4 POVMs with at most 4 outcomes");
  }
  const int lambdas = assignment_count(n, o);
  sdp::SdpProblem p;
  for (int l = 0; l < lambdas; ++l) p.add_block(d);
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < o; ++i) {
      std::vector<sdp::AdjointTerm> terms;
      for (int l = 0; l < lambdas; ++l) {
        if (assignment_outcome(l, x, n, o) == i) terms.push_back(identity_term(l));
      }
      sdp::add_hermitian_equality(p, d, terms, ms[x][i]);
    }
  }
  const MarginResult r = solve_margin(std::move(p), opts);
  CompatibilityVerdict v;
  v.status = r.sol.status;
  v.margin = r.margin;
  v.compatible = accept(r);
  if (v.compatible) {
    std::vector<ComplexMatrix> parent;
    for (const auto& g : r.g) parent.push_back(clip(g));
    v.parent = normalize_povm(parent);
  }
  return v;
}

CompatibilityVerdict check_channels(const std::vector<ChoiMatrix>& chs,
                                    const sdp::SolverOptions& opts) {
  if (chs.empty()) throw ContractError("check_channels: empty collection");
  const int n = static_cast<int>(chs.size());
  const int d = chs.front().dim_in();
  const int k = chs.front().dim_out();
  for (const auto& c : chs) {
    if (c.dim_in() != d || c.dim_out() != k) {
      throw DimensionError("check_channels: channels must share input and output dimensions");
    }
  }
  if (n > kMaxCollectionSize) throw DomainError("check_channels: at most 4 channels");
  const int total = cone::joint_shape(n, k, d).total();
  sdp::SdpProblem p;
  const int g = p.add_block(total);
  for (int x = 0; x < n; ++x) {
    sdp::add_hermitian_equality(
        p, k * d,
        {{g, [=](const ComplexMatrix& e) { return cone::marginal_adjoint(e, n, k, d, x); }}},
        chs[x].matrix());
  }
  sdp::add_hermitian_equality(
      p, d, {{g, [=](const ComplexMatrix& e) { return cone::input_adjoint(e, n, k, d); }}},
      identity(d) / static_cast<double>(d));
  const MarginResult r = solve_margin(std::move(p), opts);
  CompatibilityVerdict v;
  v.status = r.sol.status;
  v.margin = r.margin;
  v.compatible = accept(r);
  if (v.compatible) {
    const int outs = total / d;
    v.joint = JointChannel(d, n, k, normalize_choi(clip(r.g[0]), d, outs));
  }
  return v;
}

CompatibilityVerdict check_pair(const Povm& m, const ChoiMatrix& ch, const sdp::SolverOptions& opts) {
  const int d = ch.dim_in();
  const int k = ch.dim_out();
  const int o = m.outcomes();
  if (m.dim() != d) throw DimensionError("check_pair: POVM and channel input dimensions differ");
  sdp::SdpProblem p;
  for (int i = 0; i < o; ++i) p.add_block(k * d);
  for (int i = 0; i < o; ++i) {
    sdp::add_hermitian_equality(
        p, d, {{i, [=](const ComplexMatrix& e) { return cone::povm_adjoint(e, k, d); }}}, m[i]);
  }
  std::vector<sdp::AdjointTerm> all;
  for (int i = 0; i < o; ++i) all.push_back(identity_term(i));
  sdp::add_hermitian_equality(p, k * d, all, ch.matrix());
  const MarginResult r = solve_margin(std::move(p), opts);
  CompatibilityVerdict v;
  v.status = r.sol.status;
  v.margin = r.margin;
  v.compatible = accept(r);
  if (v.compatible) {
    std::vector<ComplexMatrix> elems;
    for (const auto& g : r.g) elems.push_back(clip(g));
    v.instrument = Instrument(d, k, normalize_instrument(elems, d, k));
  }
  return v;
}

}  // namespace incompat
