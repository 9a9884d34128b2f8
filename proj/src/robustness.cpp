#include "incompat/robustness.hpp"

#include <algorithm>
#include <string>

#include "incompat/errors.hpp"

namespace incompat {

std::string_view kind_name(RobustnessKind k) {
  switch (k) {
    case RobustnessKind::kMeasurements:
      return "measurements";
    case RobustnessKind::kChannels:
      return "channels";
    case RobustnessKind::kPair:
      return "pair";
  }
  return "unknown";
}

namespace {

struct CollectionDims {
  int n;
  int d;
  int k;
};

CollectionDims channel_dims(const std::vector<ChoiMatrix>& chs) {
  if (chs.empty()) throw ContractError("robustness: empty channel collection");
  const int d = chs.front().dim_in();
  const int k = chs.front().dim_out();
  for (const auto& c : chs) {
    if (c.dim_in() != d || c.dim_out() != k) {
      throw DimensionError("robustness: channels must share input and output dimensions");
    }
  }
  if (static_cast<int>(chs.size()) > kMaxCollectionSize) {
    throw DomainError("robustness: at most 4 channels");
  }
  return {static_cast<int>(chs.size()), d, k};
}

void require_optimal(const sdp::SdpSolution& sol, const char* what) {
  if (!sol.optimal()) {
    throw SolverError(std::string(what) + ": solver stopped with status " +
                      std::string(sdp::status_name(sol.status)));
  }
}

ComplexMatrix neg(const ComplexMatrix& e) { return -e; }

sdp::AdjointTerm same(int block) {
  return {block, [](const ComplexMatrix& e) { return e; }};
}
sdp::AdjointTerm minus(int block) { return {block, neg}; }

ComplexMatrix zero(int n) { return ComplexMatrix::Zero(n, n); }

ComplexMatrix scalar_matrix(double v) {
  ComplexMatrix m(1, 1);
  m(0, 0) = v;
  return m;
}

void fill_values(RobustnessReport& r, const sdp::SdpSolution& sol) {
  r.primal_value = sol.primal_value;
  r.dual_value = sol.dual_value;
  r.gap = sol.gap;
}

}  // namespace

// ---------------------------------------------------------------------------
// Channels

RobustnessReport robustness_channels_primal(const std::vector<ChoiMatrix>& chs,
                                            const sdp::SolverOptions& opts) {
  const auto [n, d, k] = channel_dims(chs);
  const int outs = cone::joint_shape(n, k, d).total() / d;
  const int total = outs * d;

  // G on K^n (x) H with marginals G_x = J_x + S_x, S_x >= 0, and
  // Tr_{K^n} G proportional to the identity; Tr G = 1 + s.
  sdp::SdpProblem p;
  const int g = p.add_block(total);
  std::vector<int> slack;
  for (int x = 0; x < n; ++x) slack.push_back(p.add_block(k * d));
  p.set_objective(g, identity(total));
  p.objective_offset = -1.0;
  for (int x = 0; x < n; ++x) {
    sdp::add_hermitian_equality(
        p, k * d,
        {{g, [=](const ComplexMatrix& e) { return cone::marginal_adjoint(e, n, k, d, x); }},
         minus(slack[x])},
        chs[x].matrix());
  }
  const auto traceless = traceless_hermitian_basis(d);
  sdp::add_hermitian_equality(
      p, d, {{g, [=](const ComplexMatrix& e) { return cone::input_adjoint(e, n, k, d); }}}, zero(d),
      &traceless);

  // Strictly feasible start: every marginal equals 2 I, which dominates any
  // Choi matrix (all eigenvalues at most one).
  const double t = 2.0 * d / total * k;
  std::vector<ComplexMatrix> x0{t * identity(total)};
  for (int x = 0; x < n; ++x) x0.push_back(2.0 * identity(k * d) - chs[x].matrix());
  p.set_initial_point(std::move(x0));

  RobustnessReport r;
  r.kind = RobustnessKind::kChannels;
  r.solution = sdp::solve(p, opts);
  require_optimal(r.solution, "robustness_channels_primal");
  fill_values(r, r.solution);

  const ComplexMatrix& gv = r.solution.block_values[g];
  const double s = gv.trace().real() - 1.0;
  if (s >= kZeroNoise) {
    for (int x = 0; x < n; ++x) {
      r.noise_channels.emplace_back(d, k, normalize_choi(r.solution.block_values[slack[x]], d, k));
    }
  }
  r.mixture_joint = JointChannel(d, n, k, normalize_choi(psd_part(gv), d, outs));
  return r;
}

WitnessSet robustness_channels_dual(const std::vector<ChoiMatrix>& chs,
                                    const sdp::SolverOptions& opts) {
  const auto [n, d, k] = channel_dims(chs);
  const int total = cone::joint_shape(n, k, d).total();

  // maximize sum_x Tr[A_x J_x] - 1 over A_x >= 0 such that the functional is
  // at most one on every joint channel. The maximum of sum_x Tr[A_x G_x]
  // over joints G equals min{Tr[Y]/d : I (x) Y >= sum_x lift(A_x)}.
  sdp::LmiProgram lmi;
  lmi.offset = -1.0;
  std::vector<sdp::LmiProgram::HermitianVar> a;
  std::vector<int> a_blocks;
  for (int x = 0; x < n; ++x) {
    a.push_back(lmi.add_hermitian_variable(k * d, chs[x].matrix()));
    a_blocks.push_back(lmi.add_block(k * d, zero(k * d)));
    lmi.add_term(a_blocks.back(), a.back(), [](const ComplexMatrix& e) { return e; });
  }
  const auto y = lmi.add_hermitian_variable(d);
  const int big = lmi.add_block(total, zero(total));
  lmi.add_term(big, y, [=](const ComplexMatrix& e) { return cone::input_adjoint(e, n, k, d); });
  for (int x = 0; x < n; ++x) {
    lmi.add_term(big, a[x],
                 [=](const ComplexMatrix& e) { return ComplexMatrix(-cone::marginal_adjoint(e, n, k, d, x)); });
  }
  const int budget = lmi.add_block(1, scalar_matrix(d), sdp::BlockKind::kReal);
  lmi.add_term(budget, y, [](const ComplexMatrix& e) { return scalar_matrix(-e.trace().real()); });

  const auto sol = sdp::solve(lmi, opts);
  require_optimal(sol.raw, "robustness_channels_dual");
  WitnessSet w;
  w.kind = RobustnessKind::kChannels;
  w.dim_in = d;
  w.dim_out = k;
  for (int x = 0; x < n; ++x) w.a.push_back(sol.blocks[a_blocks[x]]);
  w.value = sol.value;
  return w;
}

RobustnessReport robustness_channels(const std::vector<ChoiMatrix>& chs,
                                     const sdp::SolverOptions& opts) {
  RobustnessReport r = robustness_channels_primal(chs, opts);
  WitnessSet w = robustness_channels_dual(chs, opts);
  r.dual_value = w.value;
  r.gap = std::abs(r.primal_value - w.value);
  r.witness = std::move(w);
  return r;
}

double witness_functional(const WitnessSet& w, const std::vector<ChoiMatrix>& chs) {
  if (w.kind != RobustnessKind::kChannels || w.a.size() != chs.size()) {
    throw ContractError("witness_functional: witness does not match a channel collection");
  }
  double v = 0.0;
  for (std::size_t x = 0; x < chs.size(); ++x) v += trace_product(w.a[x], chs[x].matrix());
  return v;
}

// ---------------------------------------------------------------------------
// Measurements

namespace {

void require_measurement_size(const PovmCollection& ms) {
  if (ms.size() > kMaxCollectionSize || ms.outcomes() > kMaxOutcomes) {
    throw DomainError("robustness_measurements: at most 4 POVMs with at most 4 outcomes");
  }
}

}  // namespace

RobustnessReport robustness_measurements_primal(const PovmCollection& ms,
                                                const sdp::SolverOptions& opts) {
  require_measurement_size(ms);
  const int n = ms.size();
  const int o = ms.outcomes();
  const int d = ms.dim();
  const int lambdas = assignment_count(n, o);

  // Unnormalized parent G_lambda with sum t I; marginals dominate M_{i|x}.
  sdp::SdpProblem p;
  for (int l = 0; l < lambdas; ++l) {
    p.add_block(d);
    p.set_objective(l, identity(d) / static_cast<double>(d));
  }
  std::vector<int> slack;
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < o; ++i) slack.push_back(p.add_block(d));
  }
  p.objective_offset = -1.0;
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < o; ++i) {
      std::vector<sdp::AdjointTerm> terms;
      for (int l = 0; l < lambdas; ++l) {
        if (assignment_outcome(l, x, n, o) == i) terms.push_back(same(l));
      }
      terms.push_back(minus(slack[x * o + i]));
      sdp::add_hermitian_equality(p, d, terms, ms[x][i]);
    }
  }
  std::vector<sdp::AdjointTerm> all;
  for (int l = 0; l < lambdas; ++l) all.push_back(same(l));
  const auto traceless = traceless_hermitian_basis(d);
  if (!traceless.empty()) sdp::add_hermitian_equality(p, d, all, zero(d), &traceless);

  // Every marginal element equals 2 I.
  const double c = 2.0 / (lambdas / o);
  std::vector<ComplexMatrix> x0(lambdas, c * identity(d));
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < o; ++i) x0.push_back(2.0 * identity(d) - ms[x][i]);
  }
  p.set_initial_point(std::move(x0));

  RobustnessReport r;
  r.kind = RobustnessKind::kMeasurements;
  r.solution = sdp::solve(p, opts);
  require_optimal(r.solution, "robustness_measurements_primal");
  fill_values(r, r.solution);

  std::vector<ComplexMatrix> parent;
  ComplexMatrix sum = zero(d);
  for (int l = 0; l < lambdas; ++l) {
    parent.push_back(psd_part(r.solution.block_values[l]));
    sum += r.solution.block_values[l];
  }
  const double s = sum.trace().real() / d - 1.0;
  if (s >= kZeroNoise) {
    for (int x = 0; x < n; ++x) {
      std::vector<ComplexMatrix> elems;
      for (int i = 0; i < o; ++i) elems.push_back(psd_part(r.solution.block_values[slack[x * o + i]]));
      r.noise_povms.emplace_back(d, normalize_povm(elems));
    }
  }
  r.mixture_parent = normalize_povm(parent);
  return r;
}

WitnessSet robustness_measurements_dual(const PovmCollection& ms, const sdp::SolverOptions& opts) {
  require_measurement_size(ms);
  const int n = ms.size();
  const int o = ms.outcomes();
  const int d = ms.dim();
  const int lambdas = assignment_count(n, o);

  // maximize sum Tr[A_{i|x} M_{i|x}] - 1 with Y >= sum_x A_{lambda(x)|x}
  // for every assignment and Tr[Y] <= 1.
  sdp::LmiProgram lmi;
  lmi.offset = -1.0;
  std::vector<sdp::LmiProgram::HermitianVar> a;
  std::vector<int> a_blocks;
  for (int x = 0; x < n; ++x) {
    for (int i = 0; i < o; ++i) {
      a.push_back(lmi.add_hermitian_variable(d, ms[x][i]));
      a_blocks.push_back(lmi.add_block(d, zero(d)));
      lmi.add_term(a_blocks.back(), a.back(), [](const ComplexMatrix& e) { return e; });
    }
  }
  const auto y = lmi.add_hermitian_variable(d);
  for (int l = 0; l < lambdas; ++l) {
    const int b = lmi.add_block(d, zero(d));
    lmi.add_term(b, y, [](const ComplexMatrix& e) { return e; });
    for (int x = 0; x < n; ++x) {
      lmi.add_term(b, a[x * o + assignment_outcome(l, x, n, o)], neg);
    }
  }
  const int budget = lmi.add_block(1, scalar_matrix(1.0), sdp::BlockKind::kReal);
  lmi.add_term(budget, y, [](const ComplexMatrix& e) { return scalar_matrix(-e.trace().real()); });

  const auto sol = sdp::solve(lmi, opts);
  require_optimal(sol.raw, "robustness_measurements_dual");
  WitnessSet w;
  w.kind = RobustnessKind::kMeasurements;
  w.dim_in = d;
  w.outcomes = o;
  for (int b : a_blocks) w.a.push_back(sol.blocks[b]);
  w.value = sol.value;
  return w;
}

RobustnessReport robustness_measurements(const PovmCollection& ms, const sdp::SolverOptions& opts) {
  RobustnessReport r = robustness_measurements_primal(ms, opts);
  WitnessSet w = robustness_measurements_dual(ms, opts);
  r.dual_value = w.value;
  r.gap = std::abs(r.primal_value - w.value);
  r.witness = std::move(w);
  return r;
}

double witness_functional(const WitnessSet& w, const PovmCollection& ms) {
  if (w.kind != RobustnessKind::kMeasurements ||
      static_cast<int>(w.a.size()) != ms.size() * ms.outcomes()) {
    throw ContractError("witness_functional: witness does not match a measurement collection");
  }
  double v = 0.0;
  for (int x = 0; x < ms.size(); ++x) {
    for (int i = 0; i < ms.outcomes(); ++i) v += trace_product(w.a[x * ms.outcomes() + i], ms[x][i]);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Measurement-channel pairs

RobustnessReport robustness_pair_primal(const Povm& m, const ChoiMatrix& ch,
                                        const sdp::SolverOptions& opts) {
  const int d = ch.dim_in();
  const int k = ch.dim_out();
  const int o = m.outcomes();
  if (m.dim() != d) throw DimensionError("robustness_pair: POVM and channel input dimensions differ");

  // Unnormalized instrument J_i: d (Tr_K J_i)^T = M_i + S_i, sum_i J_i =
  // J + S, sum_i Tr_K J_i proportional to the identity.
  sdp::SdpProblem p;
  std::vector<int> inst, povm_slack;
  for (int i = 0; i < o; ++i) {
    inst.push_back(p.add_block(k * d));
    p.set_objective(inst.back(), identity(k * d));
  }
  for (int i = 0; i < o; ++i) povm_slack.push_back(p.add_block(d));
  const int channel_slack = p.add_block(k * d);
  p.objective_offset = -1.0;
  for (int i = 0; i < o; ++i) {
    sdp::add_hermitian_equality(
        p, d,
        {{inst[i], [=](const ComplexMatrix& e) { return cone::povm_adjoint(e, k, d); }},
         minus(povm_slack[i])},
        m[i]);
  }
  std::vector<sdp::AdjointTerm> total_terms;
  for (int b : inst) total_terms.push_back(same(b));
  total_terms.push_back(minus(channel_slack));
  sdp::add_hermitian_equality(p, k * d, total_terms, ch.matrix());
  const auto traceless = traceless_hermitian_basis(d);
  std::vector<sdp::AdjointTerm> input_terms;
  for (int b : inst) {
    input_terms.push_back({b, [=](const ComplexMatrix& e) { return cone::input_adjoint(e, 1, k, d); }});
  }
  if (!traceless.empty()) sdp::add_hermitian_equality(p, d, input_terms, zero(d), &traceless);

  // J_i = a I with d k a >= 2 and o a >= 2 makes both slacks positive definite.
  const double a = 2.0 * std::max(1.0 / (d * k), 1.0 / o);
  std::vector<ComplexMatrix> x0(o, a * identity(k * d));
  for (int i = 0; i < o; ++i) x0.push_back(a * d * k * identity(d) - m[i]);
  x0.push_back(a * o * identity(k * d) - ch.matrix());
  p.set_initial_point(std::move(x0));

  RobustnessReport r;
  r.kind = RobustnessKind::kPair;
  r.solution = sdp::solve(p, opts);
  require_optimal(r.solution, "robustness_pair_primal");
  fill_values(r, r.solution);

  std::vector<ComplexMatrix> elems;
  double t = 0.0;
  for (int b : inst) {
    elems.push_back(psd_part(r.solution.block_values[b]));
    t += r.solution.block_values[b].trace().real();
  }
  const double s = t - 1.0;
  if (s >= kZeroNoise) {
    std::vector<ComplexMatrix> noise;
    for (int b : povm_slack) noise.push_back(psd_part(r.solution.block_values[b]));
    r.noise_povms.emplace_back(d, normalize_povm(noise));
    r.noise_pair_channel =
        ChoiMatrix(d, k, normalize_choi(psd_part(r.solution.block_values[channel_slack]), d, k));
  }
  r.mixture_instrument = Instrument(d, k, normalize_instrument(elems, d, k));
  return r;
}

WitnessSet robustness_pair_dual(const Povm& m, const ChoiMatrix& ch, const sdp::SolverOptions& opts) {
  const int d = ch.dim_in();
  const int k = ch.dim_out();
  const int o = m.outcomes();
  if (m.dim() != d) throw DimensionError("robustness_pair: POVM and channel input dimensions differ");

  // maximize sum_i Tr[A_i M_i] + Tr[B J] - 1. Over instruments {J_i} the
  // functional is sum_i Tr[(d I (x) A_i^T + B) J_i], whose maximum is
  // min{Tr[Y]/d : I (x) Y >= d I (x) A_i^T + B for all i}.
  sdp::LmiProgram lmi;
  lmi.offset = -1.0;
  std::vector<sdp::LmiProgram::HermitianVar> a;
  std::vector<int> a_blocks;
  for (int i = 0; i < o; ++i) {
    a.push_back(lmi.add_hermitian_variable(d, m[i]));
    a_blocks.push_back(lmi.add_block(d, zero(d)));
    lmi.add_term(a_blocks.back(), a.back(), [](const ComplexMatrix& e) { return e; });
  }
  const auto bvar = lmi.add_hermitian_variable(k * d, ch.matrix());
  const int b_block = lmi.add_block(k * d, zero(k * d));
  lmi.add_term(b_block, bvar, [](const ComplexMatrix& e) { return e; });
  const auto y = lmi.add_hermitian_variable(d);
  for (int i = 0; i < o; ++i) {
    const int blk = lmi.add_block(k * d, zero(k * d));
    lmi.add_term(blk, y, [=](const ComplexMatrix& e) { return kron(identity(k), e); });
    lmi.add_term(blk, bvar, neg);
    lmi.add_term(blk, a[i],
                 [=](const ComplexMatrix& e) { return ComplexMatrix(-cone::povm_adjoint(e, k, d)); });
  }
  const int budget = lmi.add_block(1, scalar_matrix(d), sdp::BlockKind::kReal);
  lmi.add_term(budget, y, [](const ComplexMatrix& e) { return scalar_matrix(-e.trace().real()); });

  const auto sol = sdp::solve(lmi, opts);
  require_optimal(sol.raw, "robustness_pair_dual");
  WitnessSet w;
  w.kind = RobustnessKind::kPair;
  w.dim_in = d;
  w.dim_out = k;
  for (int b : a_blocks) w.a.push_back(sol.blocks[b]);
  w.b = sol.blocks[b_block];
  w.value = sol.value;
  return w;
}

RobustnessReport robustness_pair(const Povm& m, const ChoiMatrix& ch, const sdp::SolverOptions& opts) {
  RobustnessReport r = robustness_pair_primal(m, ch, opts);
  WitnessSet w = robustness_pair_dual(m, ch, opts);
  r.dual_value = w.value;
  r.gap = std::abs(r.primal_value - w.value);
  r.witness = std::move(w);
  return r;
}

double witness_functional(const WitnessSet& w, const Povm& m, const ChoiMatrix& ch) {
  if (w.kind != RobustnessKind::kPair || static_cast<int>(w.a.size()) != m.outcomes() || !w.b) {
    throw ContractError("witness_functional: witness does not match a measurement-channel pair");
  }
  double v = trace_product(*w.b, ch.matrix());
  for (int i = 0; i < m.outcomes(); ++i) v += trace_product(w.a[i], m[i]);
  return v;
}

// ---------------------------------------------------------------------------
// Reductions

PropositionCheck verify_prop1(const PovmCollection& ms, const sdp::SolverOptions& opts) {
  PropositionCheck c;
  c.lhs = robustness_measurements_primal(ms, opts).primal_value;
  std::vector<ChoiMatrix> chs;
  for (const auto& m : ms.povms()) chs.push_back(qc_channel(m));
  c.rc = robustness_channels_primal(chs, opts).primal_value;
  c.delta = std::abs(c.lhs - c.rc);
  return c;
}

PropositionCheck verify_prop2(const Povm& m, const ChoiMatrix& ch, const sdp::SolverOptions& opts) {
  PropositionCheck c;
  c.lhs = robustness_pair_primal(m, ch, opts).primal_value;
  const int common = std::max(m.outcomes(), ch.dim_out());
  c.rc = robustness_channels_primal({qc_channel(m, common), pad_output(ch, common)}, opts).primal_value;
  c.delta = std::abs(c.lhs - c.rc);
  return c;
}

double identity_pair_closed_form(int d) {
  if (d < 2) throw DomainError("identity_pair_closed_form: d must be at least 2");
  return (d - 1.0) / (d + 1.0);
}

}  // namespace incompat
