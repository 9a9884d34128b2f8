#include "incompat/suites.hpp"

#include <cmath>
#include <numbers>

#include "incompat/compat.hpp"
#include "incompat/errors.hpp"
#include "incompat/games.hpp"
#include "incompat/robustness.hpp"

namespace incompat::suites {

Check expect_near(std::string name, double value, double reference, double tol) {
  return {std::move(name), value, reference, tol, Relation::kEqual,
          std::abs(value - reference) <= tol};
}

Check expect_at_most(std::string name, double value, double bound, double tol) {
  return {std::move(name), value, bound, tol, Relation::kAtMost, value <= bound + tol};
}

Check expect_at_least(std::string name, double value, double bound, double tol) {
  return {std::move(name), value, bound, tol, Relation::kAtLeast, value >= bound - tol};
}

bool SuiteReport::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

Povm computational_povm(int d) {
  std::vector<ComplexMatrix> e;
  for (int i = 0; i < d; ++i) e.push_back(matrix_unit(d, i, i));
  return Povm(d, std::move(e));
}

Povm fourier_povm(int d) {
  std::vector<ComplexMatrix> e;
  for (int j = 0; j < d; ++j) {
    ComplexVector v(d);
    for (int k = 0; k < d; ++k) {
      v(k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * j * k / d);
    }
    e.push_back(projector(v));
  }
  return Povm(d, std::move(e));
}

Povm random_binary_projective(int d, sampling::Rng& rng) {
  const ComplexMatrix u = sampling::haar_unitary(d, rng);
  const int r = (d + 1) / 2;
  const ComplexMatrix p = u.leftCols(r) * u.leftCols(r).adjoint();
  return Povm(d, {hermitian_part(p), identity(d) - hermitian_part(p)});
}

std::vector<ChoiMatrix> random_incompatible_channels(int d, sampling::Rng& rng,
                                                     double min_robustness,
                                                     const sdp::SolverOptions& opts) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<ChoiMatrix> chs{sampling::random_channel(d, d, rng, 2),
                                sampling::random_channel(d, d, rng, 2)};
    if (robustness_channels_primal(chs, opts).primal_value > min_robustness) return chs;
  }
  throw SolverError("random_incompatible_channels: no incompatible pair found");
}

namespace {

constexpr double kMinRobustness = 1e-3;

int trials_or(const SuiteConfig& cfg, int fallback) { return cfg.trials >= 0 ? cfg.trials : fallback; }

SuiteReport start(const char* name, const SuiteConfig& cfg, int trials) {
  SuiteReport r;
  r.suite = name;
  r.dim = cfg.dim;
  r.seed = cfg.seed;
  r.trials = trials;
  return r;
}

void theorem1_instance(SuiteReport& rep, const std::string& label, const std::vector<ChoiMatrix>& chs,
                       const sdp::SolverOptions& opts) {
  const RobustnessReport r = robustness_channels(chs, opts);
  const ChannelGame g = game_from_channel_witness(*r.witness);
  const double ratio = advantage_ratio(g.game, Strategy{chs, g.measurements}, opts);
  rep.checks.push_back(expect_near(label + ": advantage ratio = 1 + R_C", ratio, 1.0 + r.primal_value,
                                   kRatioTol));
}

}  // namespace

SuiteReport theorem1(const SuiteConfig& cfg) {
  const int d = cfg.dim;
  const int trials = trials_or(cfg, 5);
  SuiteReport rep = start("theorem1", cfg, trials);
  const std::vector<ChoiMatrix> ids{identity_channel(d), identity_channel(d)};
  {
    const RobustnessReport r = robustness_channels(ids, cfg.solver);
    const ChannelGame g = game_from_channel_witness(*r.witness);
    const double ratio = advantage_ratio(g.game, Strategy{ids, g.measurements}, cfg.solver);
    rep.checks.push_back(expect_near("{id,id}: advantage ratio = 2d/(d+1)", ratio,
                                     1.0 + identity_pair_closed_form(d), kRatioTol));
    rep.checks.push_back(
        expect_near("{id,id}: advantage ratio = 1 + R_C", ratio, 1.0 + r.primal_value, kRatioTol));
  }
  theorem1_instance(rep, "qc channels of two unbiased bases",
                    {qc_channel(computational_povm(d)), qc_channel(fourier_povm(d))}, cfg.solver);
  for (int t = 0; t < trials; ++t) {
    auto rng = sampling::trial_rng(cfg.seed, t);
    theorem1_instance(rep, "random pair " + std::to_string(t),
                      random_incompatible_channels(d, rng, kMinRobustness, cfg.solver), cfg.solver);
  }
  return rep;
}

SuiteReport theorem2(const SuiteConfig& cfg) {
  const int d = cfg.dim;
  const int trials = trials_or(cfg, 3);
  SuiteReport rep = start("theorem2", cfg, trials);
  auto instance = [&](const std::string& label, const Povm& m, const ChoiMatrix& ch) {
    const RobustnessReport r = robustness_pair(m, ch, cfg.solver);
    const PairGame g = game_from_pair_witness(*r.witness);
    const double ratio = advantage_ratio(g.game, PairStrategy{m, ch, g.second}, cfg.solver);
    rep.checks.push_back(
        expect_near(label + ": advantage ratio = 1 + R_MC", ratio, 1.0 + r.primal_value, kRatioTol));
  };
  for (int t = 0; t < trials; ++t) {
    if (t == 0) {
      instance("computational basis with identity", computational_povm(d), identity_channel(d));
      continue;
    }
    auto rng = sampling::trial_rng(cfg.seed, t);
    for (int attempt = 0;; ++attempt) {
      const Povm m = random_binary_projective(d, rng);
      const ChoiMatrix ch = sampling::random_channel(d, d, rng, 1);
      if (robustness_pair_primal(m, ch, cfg.solver).primal_value > kMinRobustness) {
        instance("random pair " + std::to_string(t), m, ch);
        break;
      }
      if (attempt > 100) throw SolverError("theorem2: no incompatible pair found");
    }
  }
  return rep;
}

SuiteReport prop1(const SuiteConfig& cfg) {
  const int d = cfg.dim;
  const int trials = trials_or(cfg, 20);
  SuiteReport rep = start("prop1", cfg, trials);
  double worst = 0.0;
  auto instance = [&](const std::string& label, const PovmCollection& ms) {
    const PropositionCheck c = verify_prop1(ms, cfg.solver);
    worst = std::max(worst, c.delta);
    rep.checks.push_back(expect_near(label + ": R_M = R_C(qc)", c.lhs, c.rc, kReductionTol));
  };
  instance("two unbiased bases", PovmCollection({computational_povm(d), fourier_povm(d)}));
  for (int t = 0; t < trials; ++t) {
    auto rng = sampling::trial_rng(cfg.seed, t);
    // Alternate sharp and unsharp two-outcome measurements.
    auto draw = [&]() {
      return t % 2 == 0 ? random_binary_projective(d, rng) : sampling::random_povm(d, 2, rng);
    };
    const Povm a = draw();
    const Povm b = draw();
    instance("random pair " + std::to_string(t), PovmCollection({a, b}));
  }
  rep.checks.push_back(expect_at_most("max |R_M - R_C|", worst, 0.0, kReductionTol));
  return rep;
}

SuiteReport prop2(const SuiteConfig& cfg) {
  const int d = cfg.dim;
  const int trials = trials_or(cfg, 10);
  SuiteReport rep = start("prop2", cfg, trials);
  double worst = 0.0;
  auto instance = [&](const std::string& label, const Povm& m, const ChoiMatrix& ch) {
    const PropositionCheck c = verify_prop2(m, ch, cfg.solver);
    worst = std::max(worst, c.delta);
    rep.checks.push_back(expect_near(label + ": R_MC = R_C(qc, channel)", c.lhs, c.rc, kReductionTol));
  };
  instance("computational basis with identity", computational_povm(d), identity_channel(d));
  for (int t = 0; t < trials; ++t) {
    auto rng = sampling::trial_rng(cfg.seed, t);
    const Povm m = t % 2 == 0 ? random_binary_projective(d, rng) : sampling::random_povm(d, 2, rng);
    const ChoiMatrix ch = sampling::random_channel(d, d, rng, 1 + t % 2);
    instance("random pair " + std::to_string(t), m, ch);
  }
  rep.checks.push_back(expect_at_most("max |R_MC - R_C|", worst, 0.0, kReductionTol));
  return rep;
}

SuiteReport appendix_c(const SuiteConfig& cfg) {
  const int d = cfg.dim;
  const int trials = trials_or(cfg, 200);
  SuiteReport rep = start("appendixC", cfg, trials);
  const JointChannel cloner = cloning_channel(d);
  const ChoiMatrix depol = depolarizing_channel(d, cloning_visibility(d));
  for (int x = 0; x < 2; ++x) {
    rep.checks.push_back(expect_near("cloner marginal " + std::to_string(x) + " = depolarizing c(d)",
                                     max_abs_diff(marginal(cloner, x).matrix(), depol.matrix()), 0.0,
                                     1e-9));
  }
  const BoundCheck b = unassisted_bound_check(d, trials, cfg.seed, cfg.solver);
  rep.checks.push_back(expect_at_most("max sampled unassisted ratio <= 2(d+1)/(d+3)", b.max_ratio,
                                      b.bound, 1e-6));
  rep.checks.push_back(expect_at_most("max P(id,id)/P(cloner) <= 2(d+1)/(d+3)",
                                      b.max_cloning_quotient, b.bound, 1e-6));
  rep.checks.push_back(expect_near("ratio <= P(id,id)/P(cloner) <= bound on every sample",
                                   b.chain_holds ? 1.0 : 0.0, 1.0, 0.0));
  Check gap = expect_at_least("2d/(d+1) - 2(d+1)/(d+3) > 0", b.assisted_value - b.bound, 0.0, 0.0);
  gap.pass = b.assisted_value - b.bound > 0.0;
  rep.checks.push_back(gap);
  return rep;
}

SuiteReport duality(const SuiteConfig& cfg) {
  const int d = cfg.dim;
  const int trials = trials_or(cfg, 10);
  SuiteReport rep = start("duality", cfg, trials);
  auto instance = [&](const std::string& label, const std::vector<ChoiMatrix>& chs) {
    const RobustnessReport r = robustness_channels(chs, cfg.solver);
    rep.checks.push_back(expect_at_most(label + ": |primal - dual|/(1 + primal)",
                                        r.gap / (1.0 + r.primal_value), 0.0, kDualityTol));
    return r;
  };
  const RobustnessReport ids = instance("{id,id}", {identity_channel(d), identity_channel(d)});
  rep.checks.push_back(
      expect_near("{id,id}: R_C = (d-1)/(d+1)", ids.primal_value, identity_pair_closed_form(d), 1e-6));
  for (int t = 0; t < trials; ++t) {
    auto rng = sampling::trial_rng(cfg.seed, t);
    instance("random pair " + std::to_string(t),
             {sampling::random_channel(d, d, rng, 1 + t % 3), sampling::random_channel(d, d, rng, 1 + t % 3)});
  }
  // The {id, id} witness must stay at most one on compatible collections.
  double worst = 0.0;
  auto rng = sampling::trial_rng(cfg.seed, 1u << 20);
  for (int s = 0; s < 100; ++s) {
    const JointChannel joint = sampling::random_joint_channel(d, 2, d, rng, 1 + s % 3);
    worst = std::max(worst, witness_functional(*ids.witness, {marginal(joint, 0), marginal(joint, 1)}));
  }
  rep.checks.push_back(expect_at_most("witness functional on 100 sampled compatible pairs", worst, 1.0,
                                      kNormalizationTol));
  return rep;
}

std::vector<std::string> suite_names() {
  return {"theorem1", "theorem2", "prop1", "prop2", "appendixC", "duality"};
}

SuiteReport run(const std::string& name, const SuiteConfig& cfg) {
  if (cfg.dim < 2) throw DomainError("suites: dimension must be at least 2");
  if (name == "theorem1") return theorem1(cfg);
  if (name == "theorem2") return theorem2(cfg);
  if (name == "prop1") return prop1(cfg);
  if (name == "prop2") return prop2(cfg);
  if (name == "appendixC") return appendix_c(cfg);
  if (name == "duality") return duality(cfg);
  throw ContractError("unknown suite \"" + name + "\"");
}

}  // namespace incompat::suites
