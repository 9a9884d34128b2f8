#include "incompat/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>

#include "incompat/errors.hpp"
#include "incompat/kernels.hpp"

namespace incompat::sdp {

// ---------------------------------------------------------------------------
// Problem model

namespace {

std::vector<Entry> sparse_entries(int block, const ComplexMatrix& m) {
  std::vector<Entry> out;
  const double scale = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return out;
  const double cut = 1e-15 * scale;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (std::abs(m(r, c)) > cut) {
        out.push_back({block, static_cast<int>(r), static_cast<int>(c), m(r, c)});
      }
    }
  }
  return out;
}

}  // namespace

int SdpProblem::add_block(int dim, BlockKind kind) {
  if (dim < 1) throw DimensionError("SdpProblem::add_block: dimension must be positive");
  blocks_.push_back({dim, kind});
  objective_.push_back(ComplexMatrix::Zero(dim, dim));
  return num_blocks() - 1;
}

int SdpProblem::add_scalar(double cost) {
  const int b = add_block(1, BlockKind::kReal);
  objective_[b](0, 0) = cost;
  return b;
}

void SdpProblem::set_objective(int block, const ComplexMatrix& cost) {
  if (cost.rows() != blocks_.at(block).dim || cost.cols() != blocks_[block].dim) {
    throw DimensionError("SdpProblem::set_objective: cost does not match block");
  }
  if (!is_hermitian(cost, 1e-10)) throw ContractError("SdpProblem: cost is not Hermitian");
  objective_[block] = hermitian_part(cost);
}

int SdpProblem::add_constraint(const std::vector<Term>& terms, double rhs) {
  Constraint c;
  c.rhs = rhs;
  for (const auto& t : terms) {
    if (t.coeff.rows() != blocks_.at(t.block).dim || t.coeff.cols() != blocks_[t.block].dim) {
      throw DimensionError("SdpProblem::add_constraint: coefficient does not match block");
    }
    if (!is_hermitian(t.coeff, 1e-10)) {
      throw ContractError("SdpProblem::add_constraint: coefficient is not Hermitian");
    }
    auto e = sparse_entries(t.block, hermitian_part(t.coeff));
    c.entries.insert(c.entries.end(), e.begin(), e.end());
  }
  return add_constraint(std::move(c));
}

int SdpProblem::add_constraint(Constraint c) {
  for (const auto& e : c.entries) {
    if (e.block < 0 || e.block >= num_blocks() || e.row < 0 || e.col < 0 ||
        e.row >= blocks_[e.block].dim || e.col >= blocks_[e.block].dim) {
      throw DimensionError("SdpProblem::add_constraint: entry out of range");
    }
  }
  constraints_.push_back(std::move(c));
  return num_constraints() - 1;
}

double SdpProblem::objective_value(const std::vector<ComplexMatrix>& x) const {
  double v = objective_offset;
  for (int b = 0; b < num_blocks(); ++b) v += trace_product(objective_[b], x.at(b));
  return v;
}

RealVector SdpProblem::constraint_values(const std::vector<ComplexMatrix>& x) const {
  RealVector out(num_constraints());
  for (int k = 0; k < num_constraints(); ++k) {
    Complex s = 0.0;
    for (const auto& e : constraints_[k].entries) s += e.value * x.at(e.block)(e.col, e.row);
    out(k) = s.real();
  }
  return out;
}

std::vector<ComplexMatrix> SdpProblem::adjoint(const RealVector& y) const {
  std::vector<ComplexMatrix> out;
  for (const auto& b : blocks_) out.push_back(ComplexMatrix::Zero(b.dim, b.dim));
  for (int k = 0; k < num_constraints(); ++k) {
    for (const auto& e : constraints_[k].entries) out[e.block](e.row, e.col) += y(k) * e.value;
  }
  return out;
}

void add_hermitian_equality(SdpProblem& problem, int dim, const std::vector<AdjointTerm>& terms,
                            const ComplexMatrix& rhs, const std::vector<ComplexMatrix>* basis) {
  if (rhs.rows() != dim || rhs.cols() != dim) {
    throw DimensionError("add_hermitian_equality: rhs has wrong shape");
  }
  const std::vector<ComplexMatrix> own = basis ? std::vector<ComplexMatrix>{} : hermitian_basis(dim);
  const std::vector<ComplexMatrix>& es = basis ? *basis : own;
  for (const auto& e : es) {
    std::vector<Term> ts;
    ts.reserve(terms.size());
    for (const auto& t : terms) ts.push_back({t.block, t.adjoint(e)});
    problem.add_constraint(ts, trace_product(e, rhs));
  }
}

std::string_view status_name(Status s) {
  switch (s) {
    case Status::kOptimal:
      return "optimal";
    case Status::kInfeasible:
      return "infeasible";
    case Status::kUnbounded:
      return "unbounded";
    case Status::kMaxIter:
      return "max_iter";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Real embedding

namespace {

ComplexMatrix embed_matrix(const ComplexMatrix& h) {
  const Eigen::Index n = h.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * n, 2 * n);
  const RealMatrix re = h.real();
  const RealMatrix im = h.imag();
  out.topLeftCorner(n, n) = re.cast<Complex>();
  out.bottomRightCorner(n, n) = re.cast<Complex>();
  out.bottomLeftCorner(n, n) = im.cast<Complex>();
  out.topRightCorner(n, n) = (-im).cast<Complex>();
  return out;
}

// Inverse of embed_matrix on the structured part of a real symmetric block.
ComplexMatrix unembed_matrix(const RealMatrix& y) {
  const Eigen::Index n = y.rows() / 2;
  const RealMatrix re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const RealMatrix im = 0.5 * (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n));
  ComplexMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

}  // namespace

SdpProblem real_embed(const SdpProblem& problem) {
  SdpProblem out;
  out.objective_offset = problem.objective_offset;
  std::vector<int> n(problem.num_blocks());
  for (int b = 0; b < problem.num_blocks(); ++b) {
    const auto& spec = problem.block(b);
    n[b] = spec.dim;
    if (spec.kind == BlockKind::kReal) {
      out.add_block(spec.dim, BlockKind::kReal);
      ComplexMatrix c = problem.objective()[b].real().cast<Complex>();
      out.set_objective(b, c);
    } else {
      out.add_block(2 * spec.dim, BlockKind::kReal);
      out.set_objective(b, 0.5 * embed_matrix(problem.objective()[b]));
    }
  }
  for (const auto& c : problem.constraints()) {
    Constraint e;
    e.rhs = c.rhs;
    for (const auto& t : c.entries) {
      const double re = t.value.real();
      const double im = t.value.imag();
      if (problem.block(t.block).kind == BlockKind::kReal) {
        if (re != 0.0) e.entries.push_back({t.block, t.row, t.col, re});
        continue;
      }
      const int nb = n[t.block];
      if (re != 0.0) {
        e.entries.push_back({t.block, t.row, t.col, 0.5 * re});
        e.entries.push_back({t.block, t.row + nb, t.col + nb, 0.5 * re});
      }
      if (im != 0.0) {
        e.entries.push_back({t.block, t.row + nb, t.col, 0.5 * im});
        e.entries.push_back({t.block, t.row, t.col + nb, -0.5 * im});
      }
    }
    out.add_constraint(std::move(e));
  }
  if (problem.initial_point()) {
    std::vector<ComplexMatrix> x0;
    for (int b = 0; b < problem.num_blocks(); ++b) {
      const ComplexMatrix& x = problem.initial_point()->at(b);
      x0.push_back(problem.block(b).kind == BlockKind::kReal ? x.real().cast<Complex>().eval()
                                                             : embed_matrix(x));
    }
    out.set_initial_point(std::move(x0));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Redundant constraint removal

namespace {

// Coordinates with <v(A), v(X)> = Re Tr[A X] for Hermitian A, X.
int coordinate_count(const BlockSpec& b) {
  return b.kind == BlockKind::kReal ? b.dim * (b.dim + 1) / 2 : b.dim * b.dim;
}

RealMatrix constraint_coordinates(const SdpProblem& p) {
  std::vector<int> offset(p.num_blocks() + 1, 0);
  for (int b = 0; b < p.num_blocks(); ++b) offset[b + 1] = offset[b] + coordinate_count(p.block(b));
  RealMatrix v = RealMatrix::Zero(offset.back(), p.num_constraints());
  const double r2 = std::sqrt(2.0);
  for (int k = 0; k < p.num_constraints(); ++k) {
    for (const auto& e : p.constraints()[k].entries) {
      if (e.row > e.col) continue;
      const auto& spec = p.block(e.block);
      const int n = spec.dim;
      const int base = offset[e.block];
      if (e.row == e.col) {
        v(base + e.row, k) += e.value.real();
        continue;
      }
      // Row-major upper-triangle pair index.
      const int pair = e.row * n - e.row * (e.row + 1) / 2 + (e.col - e.row - 1);
      v(base + n + pair, k) += r2 * e.value.real();
      if (spec.kind == BlockKind::kComplex) {
        const int npairs = n * (n - 1) / 2;
        v(base + n + npairs + pair, k) += r2 * e.value.imag();
      }
    }
  }
  return v;
}

}  // namespace

std::vector<int> independent_constraints(const SdpProblem& problem, double threshold) {
  if (problem.num_constraints() == 0) return {};
  const RealMatrix v = constraint_coordinates(problem);
  Eigen::ColPivHouseholderQR<RealMatrix> qr(v);
  qr.setThreshold(threshold);
  const auto rank = qr.rank();
  std::vector<int> kept;
  kept.reserve(rank);
  for (Eigen::Index i = 0; i < rank; ++i) kept.push_back(qr.colsPermutation().indices()(i));
  std::sort(kept.begin(), kept.end());
  return kept;
}

// ---------------------------------------------------------------------------
// Interior-point core on real blocks

namespace {

using Blocks = std::vector<RealMatrix>;

struct SparseTerm {
  int block;
  std::vector<int> row;
  std::vector<int> col;
  std::vector<double> val;
  int nnz() const { return static_cast<int>(val.size()); }
};

struct RealProblem {
  std::vector<int> dims;
  Blocks c;
  std::vector<std::vector<SparseTerm>> a;
  RealVector b;
  double offset = 0.0;
  std::optional<Blocks> x0;
};

RealProblem make_real_problem(const SdpProblem& embedded, const std::vector<int>& kept) {
  RealProblem rp;
  rp.offset = embedded.objective_offset;
  for (int b = 0; b < embedded.num_blocks(); ++b) {
    rp.dims.push_back(embedded.block(b).dim);
    rp.c.push_back(embedded.objective()[b].real());
  }
  rp.b.resize(static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const Constraint& c = embedded.constraints()[kept[i]];
    rp.b(static_cast<Eigen::Index>(i)) = c.rhs;
    std::map<std::pair<int, std::pair<int, int>>, double> merged;
    for (const auto& e : c.entries) merged[{e.block, {e.row, e.col}}] += e.value.real();
    std::vector<SparseTerm> terms;
    for (const auto& [key, val] : merged) {
      if (val == 0.0) continue;
      if (terms.empty() || terms.back().block != key.first) terms.push_back({key.first, {}, {}, {}});
      terms.back().row.push_back(key.second.first);
      terms.back().col.push_back(key.second.second);
      terms.back().val.push_back(val);
    }
    rp.a.push_back(std::move(terms));
  }
  if (embedded.initial_point()) {
    Blocks x0;
    for (const auto& m : *embedded.initial_point()) x0.push_back(m.real());
    rp.x0 = std::move(x0);
  }
  return rp;
}

std::span<const double> flat(const RealMatrix& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}
std::span<double> flat(RealMatrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += kernels::dot(flat(a[i]), flat(b[i]));
  return s;
}

double frob(const Blocks& a) { return std::sqrt(inner(a, a)); }

void axpy(double alpha, const Blocks& x, Blocks& y) {
  for (std::size_t i = 0; i < x.size(); ++i) kernels::axpy(alpha, flat(x[i]), flat(y[i]));
}

// Tr[A_k H] for arbitrary (not necessarily symmetric) H.
RealVector apply_a(const RealProblem& p, const Blocks& h) {
  RealVector out(p.b.size());
  for (Eigen::Index k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (const auto& t : p.a[k]) {
      const RealMatrix& m = h[t.block];
      for (int e = 0; e < t.nnz(); ++e) s += t.val[e] * m(t.col[e], t.row[e]);
    }
    out(k) = s;
  }
  return out;
}

Blocks apply_at(const RealProblem& p, const RealVector& y) {
  Blocks out;
  for (int n : p.dims) out.push_back(RealMatrix::Zero(n, n));
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    if (y(k) == 0.0) continue;
    for (const auto& t : p.a[k]) {
      RealMatrix& m = out[t.block];
      for (int e = 0; e < t.nnz(); ++e) m(t.row[e], t.col[e]) += y(k) * t.val[e];
    }
  }
  return out;
}

RealMatrix sym(const RealMatrix& m) { return 0.5 * (m + m.transpose()); }

struct BlockUse {
  int k;
  const SparseTerm* term;
};

std::vector<std::vector<BlockUse>> block_uses(const RealProblem& p) {
  std::vector<std::vector<BlockUse>> uses(p.dims.size());
  for (std::size_t k = 0; k < p.a.size(); ++k) {
    for (const auto& t : p.a[k]) uses[t.block].push_back({static_cast<int>(k), &t});
  }
  return uses;
}

// M_kl = Tr[A_k X A_l Z^{-1}]
RealMatrix schur_complement(const RealProblem& p, const Blocks& x, const Blocks& zi,
                            const std::vector<std::vector<BlockUse>>& uses) {
  const Eigen::Index m = p.b.size();
  RealMatrix mat = RealMatrix::Zero(m, m);
  for (std::size_t b = 0; b < p.dims.size(); ++b) {
    const auto& list = uses[b];
    if (list.empty()) continue;
    const int n = p.dims[b];
    const RealMatrix& xb = x[b];
    const RealMatrix& zb = zi[b];
    std::vector<long> suffix(list.size() + 1, 0);
    for (std::size_t i = list.size(); i-- > 0;) suffix[i] = suffix[i + 1] + list[i].term->nnz();
    const double dense_base = static_cast<double>(n) * n * n;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const SparseTerm& tk = *list[i].term;
      const int k = list[i].k;
      const double nnz_k = tk.nnz();
      const double rest = static_cast<double>(suffix[i]);
      if (dense_base + nnz_k * n + rest < nnz_k * rest) {
        RealMatrix t = RealMatrix::Zero(n, n);
        for (int e = 0; e < tk.nnz(); ++e) t.row(tk.row[e]) += tk.val[e] * zb.row(tk.col[e]);
        const RealMatrix g = xb * t;
        for (std::size_t j = i; j < list.size(); ++j) {
          const SparseTerm& tl = *list[j].term;
          double s = 0.0;
          for (int e = 0; e < tl.nnz(); ++e) s += tl.val[e] * g(tl.col[e], tl.row[e]);
          mat(k, list[j].k) += s;
        }
      } else {
        for (std::size_t j = i; j < list.size(); ++j) {
          const SparseTerm& tl = *list[j].term;
          double s = 0.0;
          for (int e = 0; e < tk.nnz(); ++e) {
            const int pr = tk.row[e];
            const int q = tk.col[e];
            double inner_sum = 0.0;
            for (int f = 0; f < tl.nnz(); ++f) {
              inner_sum += tl.val[f] * xb(q, tl.row[f]) * zb(tl.col[f], pr);
            }
            s += tk.val[e] * inner_sum;
          }
          mat(k, list[j].k) += s;
        }
      }
    }
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index l = k + 1; l < m; ++l) {
      // Only one triangle was accumulated for each pair; fold into both.
      const double v = mat(k, l) + mat(l, k);
      mat(k, l) = v;
      mat(l, k) = v;
    }
  }
  return mat;
}

// Largest alpha with P + alpha D >= 0 (infinity when D >= 0).
double max_step(const RealMatrix& pm, const RealMatrix& dm) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (pm.rows() == 1) return dm(0, 0) < 0.0 ? -pm(0, 0) / dm(0, 0) : kInf;
  Eigen::LLT<RealMatrix> llt(pm);
  if (llt.info() != Eigen::Success) return 0.0;
  const RealMatrix l = llt.matrixL();
  const RealMatrix w1 = l.triangularView<Eigen::Lower>().solve(dm);
  const RealMatrix w =
      l.triangularView<Eigen::Lower>().solve(w1.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym(w), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0.0 ? -1.0 / lmin : kInf;
}

double max_step(const Blocks& p, const Blocks& d) {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) a = std::min(a, max_step(p[i], d[i]));
  return a;
}

bool inverse_spd(const RealMatrix& m, RealMatrix& out) {
  Eigen::LLT<RealMatrix> llt(m);
  if (llt.info() != Eigen::Success) return false;
  out = llt.solve(RealMatrix::Identity(m.rows(), m.cols()));
  out = sym(out);
  return true;
}

class SchurSolver {
 public:
  bool factor(const RealMatrix& m) {
    RealMatrix work = m;
    const double diag_scale = m.size() ? m.diagonal().cwiseAbs().maxCoeff() : 1.0;
    double reg = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      llt_.compute(work);
      if (llt_.info() == Eigen::Success) return true;
      reg = reg == 0.0 ? 1e-15 * std::max(1.0, diag_scale) : reg * 100.0;
      work = m;
      work.diagonal().array() += reg;
    }
    return false;
  }
  RealVector solve(const RealVector& rhs) const { return llt_.solve(rhs); }

 private:
  Eigen::LLT<RealMatrix> llt_;
};

struct CoreResult {
  Status status = Status::kMaxIter;
  Blocks x, z;
  RealVector y;
  int iterations = 0;
};

CoreResult interior_point(const RealProblem& p, const SolverOptions& opts) {
  const std::size_t nb = p.dims.size();
  const Eigen::Index m = p.b.size();
  double total_dim = 0.0;
  for (int n : p.dims) total_dim += n;

  const double norm_b = p.b.norm();
  const double norm_c = frob(p.c);

  // Starting point.
  Blocks x, z;
  for (std::size_t b = 0; b < nb; ++b) {
    const int n = p.dims[b];
    double max_a = 0.0;
    double ratio = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) {
      for (const auto& t : p.a[k]) {
        if (t.block != static_cast<int>(b)) continue;
        double fa = 0.0;
        for (double v : t.val) fa += v * v;
        fa = std::sqrt(fa);
        max_a = std::max(max_a, fa);
        ratio = std::max(ratio, (1.0 + std::abs(p.b(k))) / (1.0 + fa));
      }
    }
    const double sn = std::sqrt(static_cast<double>(n));
    const double xi = std::max({10.0, sn, ratio * sn});
    const double eta = std::max({10.0, sn, max_a, p.c[b].norm()});
    x.push_back(xi * RealMatrix::Identity(n, n));
    z.push_back(eta * RealMatrix::Identity(n, n));
  }
  if (p.x0) {
    bool usable = true;
    for (std::size_t b = 0; b < nb && usable; ++b) {
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(sym((*p.x0)[b]), Eigen::EigenvaluesOnly);
      usable = es.eigenvalues()(0) > 0.0;
    }
    if (usable) {
      for (std::size_t b = 0; b < nb; ++b) x[b] = sym((*p.x0)[b]);
    }
  }
  RealVector y = RealVector::Zero(m);

  const auto uses = block_uses(p);
  CoreResult res;
  double gamma = 0.9;
  double best_measure = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int iter = 0;; ++iter) {
    res.iterations = iter;
    const RealVector rp = p.b - apply_a(p, x);
    Blocks rd = p.c;
    {
      const Blocks aty = apply_at(p, y);
      for (std::size_t b = 0; b < nb; ++b) rd[b] -= aty[b] + z[b];
    }
    const double pobj = inner(p.c, x) + p.offset;
    const double dobj = p.b.dot(y) + p.offset;
    const double mu = inner(x, z) / total_dim;
    const double pinf = rp.norm() / (1.0 + norm_b);
    const double dinf = frob(rd) / (1.0 + norm_c);
    const double relgap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));

    if (opts.verbose) {
      std::fprintf(stderr, "%3d  p=% .10e  d=% .10e  gap=%.2e  pinf=%.2e  dinf=%.2e  mu=%.2e\n",
                   iter, pobj, dobj, relgap, pinf, dinf, mu);
    }
    if (pinf <= opts.feas_tol && dinf <= opts.feas_tol && relgap <= opts.gap_tol) {
      res.status = Status::kOptimal;
      break;
    }
    const double by = dobj - p.offset;
    if (by > 0.0 && by > 1e8 * (1.0 + norm_c) && frob(rd) < 1e-6 * by) {
      res.status = Status::kInfeasible;
      break;
    }
    const double cx = pobj - p.offset;
    if (cx < 0.0 && -cx > 1e8 * (1.0 + norm_b) && rp.norm() < 1e-6 * -cx) {
      res.status = Status::kUnbounded;
      break;
    }
    const double measure = std::max({pinf, dinf, relgap});
    if (measure < 0.5 * best_measure) {
      best_measure = measure;
      stall = 0;
    } else if (++stall > 25) {
      break;
    }
    if (iter >= opts.max_iter) break;

    Blocks zi(nb);
    bool ok = true;
    for (std::size_t b = 0; b < nb && ok; ++b) ok = inverse_spd(z[b], zi[b]);
    if (!ok) break;

    SchurSolver schur;
    if (!schur.factor(schur_complement(p, x, zi, uses))) break;

    // Blocks X Rd Z^{-1}, reused by both solves.
    Blocks x_rd_zi(nb);
    for (std::size_t b = 0; b < nb; ++b) x_rd_zi[b] = x[b] * rd[b] * zi[b];

    // Solves the Newton system for target R (dX = R - X dZ Z^{-1}).
    auto direction = [&](const Blocks& r, Blocks& dx, RealVector& dy, Blocks& dz) {
      Blocks h(nb);
      for (std::size_t b = 0; b < nb; ++b) h[b] = r[b] - x_rd_zi[b];
      dy = m > 0 ? schur.solve(rp - apply_a(p, h)) : RealVector();
      dz = rd;
      const Blocks atdy = apply_at(p, dy);
      for (std::size_t b = 0; b < nb; ++b) dz[b] -= atdy[b];
      dx.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) dx[b] = sym(r[b] - x[b] * dz[b] * zi[b]);
    };

    Blocks r(nb);
    for (std::size_t b = 0; b < nb; ++b) r[b] = -x[b];
    Blocks dxp, dzp;
    RealVector dyp;
    direction(r, dxp, dyp, dzp);
    const double ap_aff = std::min(1.0, max_step(x, dxp));
    const double ad_aff = std::min(1.0, max_step(z, dzp));
    Blocks xa = x, za = z;
    axpy(ap_aff, dxp, xa);
    axpy(ad_aff, dzp, za);
    const double mu_aff = inner(xa, za) / total_dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    for (std::size_t b = 0; b < nb; ++b) {
      r[b] = sigma * mu * zi[b] - x[b] - dxp[b] * dzp[b] * zi[b];
    }
    Blocks dx, dz;
    RealVector dy;
    direction(r, dx, dy, dz);
    const double ap = std::min(1.0, gamma * max_step(x, dx));
    const double ad = std::min(1.0, gamma * max_step(z, dz));
    if (!(ap > 0.0) || !(ad > 0.0)) break;
    axpy(ap, dx, x);
    axpy(ad, dz, z);
    kernels::axpy(ad, {dy.data(), static_cast<std::size_t>(dy.size())},
                  {y.data(), static_cast<std::size_t>(y.size())});
    for (std::size_t b = 0; b < nb; ++b) {
      x[b] = sym(x[b]);
      z[b] = sym(z[b]);
    }
    gamma = 0.9 + 0.09 * std::min(ap, ad);
  }
  res.x = std::move(x);
  res.z = std::move(z);
  res.y = std::move(y);
  return res;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverOptions& opts) {
  SdpSolution sol;
  const std::vector<int> kept = independent_constraints(problem);
  sol.removed_constraints = problem.num_constraints() - static_cast<int>(kept.size());

  // Dropped constraints must be implied by the kept ones, right-hand side
  // included; otherwise the problem is infeasible as posed.
  if (sol.removed_constraints > 0) {
    const RealMatrix v = constraint_coordinates(problem);
    RealMatrix vk(v.rows(), static_cast<Eigen::Index>(kept.size()));
    RealVector bk(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      vk.col(static_cast<Eigen::Index>(i)) = v.col(kept[i]);
      bk(static_cast<Eigen::Index>(i)) = problem.constraints()[kept[i]].rhs;
    }
    Eigen::ColPivHouseholderQR<RealMatrix> qr(vk);
    std::size_t next = 0;
    for (int k = 0; k < problem.num_constraints(); ++k) {
      if (next < kept.size() && kept[next] == k) {
        ++next;
        continue;
      }
      const RealVector coef = qr.solve(RealVector(v.col(k)));
      const double implied = coef.dot(bk);
      const double rhs = problem.constraints()[k].rhs;
      if (std::abs(implied - rhs) > 1e-8 * (1.0 + std::abs(rhs))) {
        sol.status = Status::kInfeasible;
        sol.multipliers = RealVector::Zero(problem.num_constraints());
        return sol;
      }
    }
  }

  const SdpProblem embedded = real_embed(problem);
  const RealProblem rp = make_real_problem(embedded, kept);
  CoreResult core = interior_point(rp, opts);

  sol.status = core.status;
  sol.iterations = core.iterations;
  sol.multipliers = RealVector::Zero(problem.num_constraints());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    sol.multipliers(kept[i]) = core.y(static_cast<Eigen::Index>(i));
  }
  for (int b = 0; b < problem.num_blocks(); ++b) {
    if (problem.block(b).kind == BlockKind::kReal) {
      sol.block_values.push_back(core.x[b].cast<Complex>());
      sol.dual_slacks.push_back(core.z[b].cast<Complex>());
    } else {
      sol.block_values.push_back(unembed_matrix(core.x[b]));
      // Embedded duals carry the factor 1/2 of the embedded coefficients.
      sol.dual_slacks.push_back(2.0 * unembed_matrix(core.z[b]));
    }
  }
  sol.primal_value = problem.objective_value(sol.block_values);
  double dual = problem.objective_offset;
  for (int k = 0; k < problem.num_constraints(); ++k) {
    dual += sol.multipliers(k) * problem.constraints()[k].rhs;
  }
  sol.dual_value = dual;
  sol.gap = std::abs(sol.primal_value - sol.dual_value);

  RealVector rhs(problem.num_constraints());
  for (int k = 0; k < problem.num_constraints(); ++k) rhs(k) = problem.constraints()[k].rhs;
  const RealVector resid = rhs - problem.constraint_values(sol.block_values);
  sol.primal_residual = resid.size() ? resid.cwiseAbs().maxCoeff() : 0.0;
  const auto aty = problem.adjoint(sol.multipliers);
  double dres = 0.0;
  for (int b = 0; b < problem.num_blocks(); ++b) {
    const ComplexMatrix r = problem.objective()[b] - aty[b] - sol.dual_slacks[b];
    dres = std::max(dres, r.cwiseAbs().maxCoeff());
  }
  sol.dual_residual = dres;
  return sol;
}

// ---------------------------------------------------------------------------
// LMI form

int LmiProgram::add_variable(double cost) {
  cost_.push_back(cost);
  terms_.emplace_back();
  return num_variables() - 1;
}

LmiProgram::HermitianVar LmiProgram::add_hermitian_variable(int dim, const ComplexMatrix& cost) {
  HermitianVar v{num_variables(), dim};
  for (const auto& e : hermitian_basis(dim)) add_variable(trace_product(cost, e));
  return v;
}

LmiProgram::HermitianVar LmiProgram::add_hermitian_variable(int dim) {
  return add_hermitian_variable(dim, ComplexMatrix::Zero(dim, dim));
}

int LmiProgram::add_block(int dim, const ComplexMatrix& constant, BlockKind kind) {
  if (constant.rows() != dim || constant.cols() != dim) {
    throw DimensionError("LmiProgram::add_block: constant has wrong shape");
  }
  blocks_.push_back({dim, kind});
  constants_.push_back(constant);
  return static_cast<int>(blocks_.size()) - 1;
}

void LmiProgram::add_term(int block, int var, const ComplexMatrix& coeff) {
  terms_.at(var).push_back({block, coeff});
}

void LmiProgram::add_term(int block, const HermitianVar& v,
                          const std::function<ComplexMatrix(const ComplexMatrix&)>& map) {
  const auto basis = hermitian_basis(v.dim);
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    add_term(block, v.first + j, map(basis[j]));
  }
}

SdpProblem LmiProgram::to_problem() const {
  SdpProblem p;
  p.objective_offset = offset;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    p.add_block(blocks_[b].dim, blocks_[b].kind);
    p.set_objective(static_cast<int>(b), constants_[b]);
  }
  for (int k = 0; k < num_variables(); ++k) {
    std::vector<Term> ts;
    for (const auto& t : terms_[k]) ts.push_back({t.block, -t.coeff});
    p.add_constraint(ts, cost_[k]);
  }
  return p;
}

ComplexMatrix LmiProgram::value(const HermitianVar& v, const RealVector& y) const {
  const auto basis = hermitian_basis(v.dim);
  ComplexMatrix out = ComplexMatrix::Zero(v.dim, v.dim);
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) out += y(v.first + j) * basis[j];
  return out;
}

LmiSolution solve(const LmiProgram& program, const SolverOptions& opts) {
  LmiSolution out;
  out.raw = solve(program.to_problem(), opts);
  out.value = out.raw.dual_value;
  out.y = out.raw.multipliers;
  out.blocks = out.raw.dual_slacks;
  return out;
}

}  // namespace incompat::sdp
