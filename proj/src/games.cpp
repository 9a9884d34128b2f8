#include "incompat/games.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "incompat/compat.hpp"
#include "incompat/errors.hpp"
#include "incompat/sampling.hpp"

namespace incompat {

DiscriminationGame::DiscriminationGame(bool assisted, int dim, std::vector<double> prior,
                                       std::vector<std::vector<WeightedState>> ensembles)
    : assisted_(assisted), dim_(dim), prior_(std::move(prior)), ensembles_(std::move(ensembles)) {
  if (dim < 1) throw DimensionError("DiscriminationGame: dimension must be positive");
  if (prior_.empty() || prior_.size() != ensembles_.size()) {
    throw ContractError("DiscriminationGame: need one prior weight per ensemble");
  }
  auto check_distribution = [](const std::vector<double>& p, const char* what) {
    double s = 0.0;
    for (double v : p) {
      if (v < 0.0) throw ContractError(std::string("DiscriminationGame: negative ") + what);
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw ContractError(std::string("DiscriminationGame: ") + what + " does not sum to one");
    }
  };
  check_distribution(prior_, "prior");
  const int sd = state_dim();
  for (const auto& ens : ensembles_) {
    if (ens.empty()) throw ContractError("DiscriminationGame: empty ensemble");
    std::vector<double> p;
    for (const auto& ws : ens) {
      if (ws.state.rows() != sd || ws.state.cols() != sd) {
        throw DimensionError("DiscriminationGame: state has wrong dimension");
      }
      if (!is_hermitian(ws.state, 1e-10) || !is_psd(ws.state, kValidityTol) ||
          std::abs(ws.state.trace().real() - 1.0) > kValidityTol) {
        throw ContractError("DiscriminationGame: ensemble member is not a density matrix");
      }
      p.push_back(ws.p);
    }
    check_distribution(p, "conditional distribution");
  }
}

namespace {

double born(const ComplexMatrix& rho, const Povm& m, int i) {
  if (i >= m.outcomes()) return 0.0;
  return trace_product(rho, m[i]);
}

void require_measurement_dim(const Povm& m, int dim, const char* what) {
  if (m.dim() != dim) throw DimensionError(std::string(what) + ": measurement has wrong dimension");
}

// Reduced state on the first factor of H (x) H.
ComplexMatrix first_factor(const ComplexMatrix& rho, int d) {
  const int keep[] = {0};
  return partial_trace(rho, TensorShape({d, d}), keep);
}

}  // namespace

double success_prob(const DiscriminationGame& game, const Strategy& strat) {
  const int n = game.n();
  if (static_cast<int>(strat.measurements.size()) != n ||
      (!strat.preprocess.empty() && static_cast<int>(strat.preprocess.size()) != n)) {
    throw DimensionError("success_prob: strategy needs one measurement (and channel) per ensemble");
  }
  const int d = game.dim();
  double total = 0.0;
  for (int x = 0; x < n; ++x) {
    const Povm& m = strat.measurements[x];
    if (!strat.preprocess.empty()) {
      const ChoiMatrix& ch = strat.preprocess[x];
      if (ch.dim_in() != d) throw DimensionError("success_prob: channel input dimension mismatch");
      require_measurement_dim(m, game.assisted() ? ch.dim_out() * d : ch.dim_out(), "success_prob");
    } else {
      require_measurement_dim(m, game.state_dim(), "success_prob");
    }
    double px = 0.0;
    const auto& ens = game.ensembles()[x];
    for (int i = 0; i < static_cast<int>(ens.size()); ++i) {
      if (ens[i].p == 0.0) continue;
      ComplexMatrix rho = ens[i].state;
      if (!strat.preprocess.empty()) {
        rho = game.assisted() ? apply_channel_extended(strat.preprocess[x], rho)
                              : apply_channel(strat.preprocess[x], rho);
      }
      px += ens[i].p * born(rho, m, i);
    }
    total += game.prior()[x] * px;
  }
  return total;
}

double success_prob(const DiscriminationGame& game, const PairStrategy& strat) {
  if (game.n() != 2) throw DimensionError("success_prob: two-round strategies need two ensembles");
  const int d = game.dim();
  if (strat.first.dim() != d || strat.channel.dim_in() != d) {
    throw DimensionError("success_prob: pair strategy input dimension mismatch");
  }
  const int k = strat.channel.dim_out();
  require_measurement_dim(strat.second, game.assisted() ? k * d : k, "success_prob");
  double first = 0.0;
  const auto& e0 = game.ensembles()[0];
  for (int i = 0; i < static_cast<int>(e0.size()); ++i) {
    if (e0[i].p == 0.0) continue;
    const ComplexMatrix rho = game.assisted() ? first_factor(e0[i].state, d) : e0[i].state;
    first += e0[i].p * born(rho, strat.first, i);
  }
  double second = 0.0;
  const auto& e1 = game.ensembles()[1];
  for (int i = 0; i < static_cast<int>(e1.size()); ++i) {
    if (e1[i].p == 0.0) continue;
    const ComplexMatrix out = game.assisted() ? apply_channel_extended(strat.channel, e1[i].state)
                                              : apply_channel(strat.channel, e1[i].state);
    second += e1[i].p * born(out, strat.second, i);
  }
  return game.prior()[0] * first + game.prior()[1] * second;
}

ComplexMatrix success_operator(const ComplexMatrix& rho, const ComplexMatrix& m, int dim_in,
                               int dim_out, bool assisted) {
  const int d = dim_in;
  const int k = dim_out;
  if (!assisted) {
    if (rho.rows() != d || m.rows() != k) throw DimensionError("success_operator: shape mismatch");
    return static_cast<double>(d) * kron(m, rho.transpose());
  }
  if (rho.rows() != d * d || m.rows() != k * d) {
    throw DimensionError("success_operator: shape mismatch");
  }
  // Q_{(k',h'),(k,h)} = d sum_{a,a'} rho_{(h,a),(h',a')} M_{(k',a'),(k,a)}
  ComplexMatrix q = ComplexMatrix::Zero(k * d, k * d);
  for (int kp = 0; kp < k; ++kp) {
    for (int hp = 0; hp < d; ++hp) {
      for (int kk = 0; kk < k; ++kk) {
        for (int h = 0; h < d; ++h) {
          Complex s = 0.0;
          for (int a = 0; a < d; ++a) {
            for (int ap = 0; ap < d; ++ap) {
              s += rho(h * d + a, hp * d + ap) * m(kp * d + ap, kk * d + a);
            }
          }
          q(kp * d + hp, kk * d + h) = static_cast<double>(d) * s;
        }
      }
    }
  }
  return hermitian_part(q);
}

namespace {

// sum_i p(i) Q(rho_i, M_i) for one ensemble.
ComplexMatrix ensemble_operator(const DiscriminationGame& game, int x, const Povm& m, int k,
                                double weight) {
  const int d = game.dim();
  ComplexMatrix q = ComplexMatrix::Zero(k * d, k * d);
  const auto& ens = game.ensembles()[x];
  for (int i = 0; i < static_cast<int>(ens.size()) && i < m.outcomes(); ++i) {
    if (ens[i].p == 0.0) continue;
    q += weight * ens[i].p * success_operator(ens[i].state, m[i], d, k, game.assisted());
  }
  return q;
}

double solve_max(sdp::SdpProblem& p, const char* what, const sdp::SolverOptions& opts) {
  const auto sol = sdp::solve(p, opts);
  if (!sol.optimal()) {
    throw SolverError(std::string(what) + ": solver stopped with status " +
                      std::string(sdp::status_name(sol.status)));
  }
  return -sol.primal_value;
}

}  // namespace

double best_compatible_success(const DiscriminationGame& game, const std::vector<Povm>& meas,
                               int dim_out, const sdp::SolverOptions& opts) {
  const int n = game.n();
  const int d = game.dim();
  const int k = dim_out;
  if (static_cast<int>(meas.size()) != n) {
    throw DimensionError("best_compatible_success: one measurement per ensemble required");
  }
  if (n > kMaxCollectionSize) throw DomainError("best_compatible_success: at most 4 ensembles");
  for (const auto& m : meas) {
    require_measurement_dim(m, game.assisted() ? k * d : k, "best_compatible_success");
  }
  const int total = cone::joint_shape(n, k, d).total();

  // maximize sum_x Tr[Q_x G_x] over joint channels G.
  ComplexMatrix cost = ComplexMatrix::Zero(total, total);
  for (int x = 0; x < n; ++x) {
    cost -= cone::marginal_adjoint(ensemble_operator(game, x, meas[x], k, game.prior()[x]), n, k,
                                   d, x);
  }
  sdp::SdpProblem p;
  const int g = p.add_block(total);
  p.set_objective(g, cost);
  sdp::add_hermitian_equality(
      p, d, {{g, [=](const ComplexMatrix& e) { return cone::input_adjoint(e, n, k, d); }}},
      identity(d) / static_cast<double>(d));
  p.set_initial_point({identity(total) / static_cast<double>(total)});
  return solve_max(p, "best_compatible_success", opts);
}

double best_compatible_pair_success(const DiscriminationGame& game, const Povm& second,
                                    int dim_out, int outcomes, const sdp::SolverOptions& opts) {
  if (game.n() != 2) throw DimensionError("best_compatible_pair_success: needs two ensembles");
  const int d = game.dim();
  const int k = dim_out;
  const int o = outcomes;
  require_measurement_dim(second, game.assisted() ? k * d : k, "best_compatible_pair_success");

  // With M_j = d (Tr_K J_j)^T and Lambda = sum_j J_j the success is
  // sum_j Tr[(p(0) p(j|0) d I (x) sigma_j^T + Q) J_j].
  const ComplexMatrix q = ensemble_operator(game, 1, second, k, game.prior()[1]);
  const auto& e0 = game.ensembles()[0];
  sdp::SdpProblem p;
  std::vector<sdp::AdjointTerm> input_terms;
  for (int j = 0; j < o; ++j) {
    ComplexMatrix c = q;
    if (j < static_cast<int>(e0.size()) && e0[j].p != 0.0) {
      const ComplexMatrix sigma = game.assisted() ? first_factor(e0[j].state, d) : e0[j].state;
      c += game.prior()[0] * e0[j].p * d * kron(identity(k), sigma.transpose());
    }
    const int b = p.add_block(k * d);
    p.set_objective(b, -c);
    input_terms.push_back({b, [=](const ComplexMatrix& e) { return cone::input_adjoint(e, 1, k, d); }});
  }
  sdp::add_hermitian_equality(p, d, input_terms, identity(d) / static_cast<double>(d));
  p.set_initial_point(std::vector<ComplexMatrix>(
      o, identity(k * d) / static_cast<double>(o * k * d)));
  return solve_max(p, "best_compatible_pair_success", opts);
}

ChannelGame game_from_channel_witness(const WitnessSet& w) {
  if (w.kind != RobustnessKind::kChannels) {
    throw ContractError("game_from_channel_witness: witness is not of channel kind");
  }
  const int d = w.dim_in;
  const int k = w.dim_out;
  const int n = static_cast<int>(w.a.size());
  std::vector<double> norms;
  for (const auto& a : w.a) {
    const double v = op_norm(a);
    norms.push_back(v < kWitnessFloor ? 0.0 : v);
  }
  const double sum = std::accumulate(norms.begin(), norms.end(), 0.0);
  if (sum == 0.0) throw DegenerateWitnessError("game_from_channel_witness: witness is zero");

  const ComplexMatrix psi = max_entangled_state(d);
  const ComplexMatrix mixed = identity(d * d) / static_cast<double>(d * d);
  std::vector<double> prior;
  std::vector<std::vector<WeightedState>> ensembles;
  std::vector<Povm> meas;
  for (int x = 0; x < n; ++x) {
    prior.push_back(norms[x] / sum);
    ensembles.push_back({{1.0, psi}, {0.0, mixed}});
    ComplexMatrix e = ComplexMatrix::Zero(k * d, k * d);
    if (norms[x] > 0.0) e = hermitian_part(w.a[x]) / norms[x];
    meas.emplace_back(k * d, std::vector<ComplexMatrix>{e, identity(k * d) - e});
  }
  return {DiscriminationGame(true, d, std::move(prior), std::move(ensembles)), std::move(meas)};
}

PairGame game_from_pair_witness(const WitnessSet& w) {
  if (w.kind != RobustnessKind::kPair || !w.b) {
    throw ContractError("game_from_pair_witness: witness is not of pair kind");
  }
  const int d = w.dim_in;
  const int k = w.dim_out;
  std::vector<double> traces;
  for (const auto& a : w.a) {
    const double t = a.trace().real();
    traces.push_back(t < kWitnessFloor ? 0.0 : t);
  }
  const double sum_a = std::accumulate(traces.begin(), traces.end(), 0.0);
  double norm_b = op_norm(*w.b);
  if (norm_b < kWitnessFloor) norm_b = 0.0;
  const double total = sum_a + norm_b;
  if (total == 0.0) throw DegenerateWitnessError("game_from_pair_witness: witness is zero");

  const ComplexMatrix sigma = identity(d) / static_cast<double>(d);
  const ComplexMatrix mixed = identity(d * d) / static_cast<double>(d * d);
  std::vector<WeightedState> first;
  for (std::size_t i = 0; i < w.a.size(); ++i) {
    if (traces[i] == 0.0) {
      first.push_back({0.0, mixed});
    } else {
      first.push_back({traces[i] / sum_a, kron(hermitian_part(w.a[i]) / traces[i], sigma)});
    }
  }
  if (sum_a == 0.0) first.front().p = 1.0;  // zero-weight ensemble still needs a distribution
  std::vector<WeightedState> second{{1.0, max_entangled_state(d)}, {0.0, mixed}};

  ComplexMatrix l1 = ComplexMatrix::Zero(k * d, k * d);
  if (norm_b > 0.0) l1 = hermitian_part(*w.b) / norm_b;
  Povm l(k * d, {l1, identity(k * d) - l1});
  DiscriminationGame game(true, d, {sum_a / total, norm_b / total},
                          {std::move(first), std::move(second)});
  return {std::move(game), std::move(l)};
}

double advantage_ratio(const DiscriminationGame& game, const Strategy& resource,
                       const sdp::SolverOptions& opts) {
  if (resource.preprocess.empty()) {
    throw ContractError("advantage_ratio: resource strategy needs preprocessing channels");
  }
  const double num = success_prob(game, resource);
  const double den =
      best_compatible_success(game, resource.measurements, resource.preprocess.front().dim_out(), opts);
  return num / den;
}

double advantage_ratio(const DiscriminationGame& game, const PairStrategy& resource,
                       const sdp::SolverOptions& opts) {
  const double num = success_prob(game, resource);
  const double den = best_compatible_pair_success(game, resource.second, resource.channel.dim_out(),
                                                  resource.first.outcomes(), opts);
  return num / den;
}

double unassisted_bound(int d) {
  if (d < 2) throw DomainError("unassisted_bound: d must be at least 2");
  return 2.0 * (d + 1.0) / (d + 3.0);
}

BoundCheck unassisted_bound_check(int d, int trials, std::uint64_t seed,
                                  const sdp::SolverOptions& opts) {
  BoundCheck out;
  out.trials = trials;
  out.bound = unassisted_bound(d);
  out.assisted_value = 2.0 * d / (d + 1.0);
  const JointChannel cloner = cloning_channel(d);
  const Strategy cloned{{marginal(cloner, 0), marginal(cloner, 1)}, {}};
  for (int t = 0; t < trials; ++t) {
    auto rng = sampling::trial_rng(seed, static_cast<std::uint64_t>(t));
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::vector<double> prior{unif(rng), unif(rng)};
    const double ps = prior[0] + prior[1];
    prior[0] /= ps;
    prior[1] = 1.0 - prior[0];
    std::vector<std::vector<WeightedState>> ensembles(2);
    std::vector<Povm> meas;
    for (int x = 0; x < 2; ++x) {
      meas.push_back(sampling::random_projective_povm(d, rng));
      // Each state leans towards the matching eigenprojector so that the
      // identity strategy is a strong one.
      const double q = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      std::vector<double> w(d);
      for (auto& v : w) v = unif(rng);
      const double ws = std::accumulate(w.begin(), w.end(), 0.0);
      double acc = 0.0;
      for (int i = 0; i < d; ++i) {
        const double p = i + 1 < d ? w[i] / ws : 1.0 - acc;
        acc += p;
        ensembles[x].push_back({p, (1.0 - q) * meas[x][i] + q * sampling::random_state(d, rng)});
      }
    }
    const DiscriminationGame game(false, d, prior, std::move(ensembles));
    const double p_id = success_prob(game, Strategy{{}, meas});
    const double p_best = best_compatible_success(game, meas, d, opts);
    Strategy clone_strat = cloned;
    clone_strat.measurements = meas;
    const double p_clone = success_prob(game, clone_strat);
    const double ratio = p_id / p_best;
    const double quotient = p_id / p_clone;
    out.max_ratio = std::max(out.max_ratio, ratio);
    out.max_cloning_quotient = std::max(out.max_cloning_quotient, quotient);
    if (ratio > quotient + 1e-7 || quotient > out.bound + 1e-9) out.chain_holds = false;
  }
  return out;
}

DiscriminationGame bb84_game() {
  ComplexVector plus(2), minus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  std::vector<std::vector<WeightedState>> ens{
      {{0.5, projector(ComplexVector::Unit(2, 0))}, {0.5, projector(ComplexVector::Unit(2, 1))}},
      {{0.5, projector(plus)}, {0.5, projector(minus)}}};
  return DiscriminationGame(false, 2, {0.5, 0.5}, std::move(ens));
}

}  // namespace incompat
