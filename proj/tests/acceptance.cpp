// Acceptance run: one PASS/FAIL line per numbered criterion. Exit status is
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "incompat/compat.hpp"
#include "incompat/errors.hpp"
#include "incompat/games.hpp"
#include "incompat/robustness.hpp"
#include "incompat/sampling.hpp"
#include "incompat/suites.hpp"

using namespace incompat;

namespace {

// Pinned tolerances.
constexpr double kClosedFormTol = 1e-6;
constexpr double kGapTol = 1e-6;          // scaled by 1 + primal
constexpr double kRatioTol = 1e-5;
constexpr double kReductionTol = 1e-6;
constexpr double kClonerTol = 1e-9;
constexpr double kBoundTol = 1e-6;
constexpr double kRoundTripTol = 1e-6;
constexpr double kTraceTol = 1e-10;
constexpr double kWitnessTol = 1e-7;
constexpr double kProbTol = 1e-12;

constexpr std::uint64_t kSeed = 20240611;
const std::vector<int> kKeepInput{1};

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Povm sigma_z() { return suites::computational_povm(2); }
Povm sigma_x() { return suites::fourier_povm(2); }

Outcome criterion1() {
  Outcome o;
  const double expected[] = {1.0 / 3.0, 0.5};
  for (int d = 2; d <= 3; ++d) {
    const auto t0 = std::chrono::steady_clock::now();
    const double r =
        robustness_channels_primal({identity_channel(d), identity_channel(d)}).primal_value;
    const double secs = seconds_since(t0);
    const double err = std::abs(r - expected[d - 2]);
    o.pass = o.pass && err <= kClosedFormTol && secs < 5.0;
    o.detail += fmt("d=%g R_C=%.10f (%.2fs) ", d, r, secs);
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  auto instance = [&](const std::vector<ChoiMatrix>& chs) {
    const double p = robustness_channels_primal(chs).primal_value;
    const double dv = robustness_channels_dual(chs).value;
    const double excess = std::abs(p - dv) - kGapTol * (1.0 + p);
    worst = std::max(worst, std::abs(p - dv) / (1.0 + p));
    o.pass = o.pass && excess <= 0.0;
  };
  for (int d = 2; d <= 3; ++d) instance({identity_channel(d), identity_channel(d)});
  for (int t = 0; t < 10; ++t) {
    auto rng = sampling::trial_rng(kSeed, t);
    instance({sampling::random_channel(2, 2, rng), sampling::random_channel(2, 2, rng)});
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 60.0;
  o.detail = fmt("max |p-d|/(1+p)=%.2e over 12 instances (%.1fs)", worst, secs);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  auto instance = [&](const std::vector<ChoiMatrix>& chs, double reference) {
    const RobustnessReport r = robustness_channels(chs);
    const ChannelGame g = game_from_channel_witness(*r.witness);
    const double ratio = advantage_ratio(g.game, Strategy{chs, g.measurements});
    const double target = reference < 0.0 ? 1.0 + r.primal_value : reference;
    worst = std::max(worst, std::abs(ratio - target));
    return ratio;
  };
  const double id_ratio = instance({identity_channel(2), identity_channel(2)}, 4.0 / 3.0);
  for (int t = 0; t < 5; ++t) {
    auto rng = sampling::trial_rng(kSeed + 3, t);
    instance(suites::random_incompatible_channels(2, rng, 1e-3, {}), -1.0);
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= kRatioTol && secs < 120.0;
  o.detail = fmt("{id,id} ratio=%.10f, max deviation=%.2e (%.1fs)", id_ratio, worst, secs);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = verify_prop1(PovmCollection({sigma_z(), sigma_x()})).delta;
  for (int t = 0; t < 20; ++t) {
    auto rng = sampling::trial_rng(kSeed + 4, t);
    const Povm a = sampling::random_povm(2, 2, rng);
    const Povm b = sampling::random_povm(2, 2, rng);
    worst = std::max(worst, verify_prop1(PovmCollection({a, b})).delta);
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= kReductionTol && secs < 120.0;
  o.detail = fmt("max |R_M - R_C|=%.2e over 21 pairs (%.1fs)", worst, secs);
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = verify_prop2(sigma_z(), identity_channel(2)).delta;
  for (int t = 0; t < 10; ++t) {
    auto rng = sampling::trial_rng(kSeed + 5, t);
    const Povm m = sampling::random_povm(2, 2, rng);
    const ChoiMatrix ch = sampling::random_channel(2, 2, rng);
    worst = std::max(worst, verify_prop2(m, ch).delta);
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= kReductionTol && secs < 120.0;
  o.detail = fmt("max |R_MC - R_C|=%.2e over 11 pairs (%.1fs)", worst, secs);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  int count = 0;
  auto instance = [&](const Povm& m, const ChoiMatrix& ch) {
    const RobustnessReport r = robustness_pair(m, ch);
    const PairGame g = game_from_pair_witness(*r.witness);
    const double ratio = advantage_ratio(g.game, PairStrategy{m, ch, g.second});
    worst = std::max(worst, std::abs(ratio - (1.0 + r.primal_value)));
    ++count;
  };
  instance(sigma_z(), identity_channel(2));
  auto rng = sampling::trial_rng(kSeed + 6, 0);
  while (count < 3) {
    const Povm m = suites::random_binary_projective(2, rng);
    const ChoiMatrix ch = sampling::random_channel(2, 2, rng, 1);
    if (robustness_pair_primal(m, ch).primal_value > 1e-3) instance(m, ch);
  }
  const double secs = seconds_since(t0);
  o.pass = worst <= kRatioTol && secs < 120.0;
  o.detail = fmt("max |ratio - (1+R_MC)|=%.2e over 3 pairs (%.1fs)", worst, secs);
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double bounds[] = {1.2, 4.0 / 3.0};
  for (int d = 2; d <= 3; ++d) {
    const JointChannel cloner = cloning_channel(d);
    const double c = (d + 2.0) / (2.0 * (d + 1.0));
    const ChoiMatrix depol = depolarizing_channel(d, c);
    for (int x = 0; x < 2; ++x) {
      o.pass = o.pass && max_abs_diff(marginal(cloner, x).matrix(), depol.matrix()) <= kClonerTol;
    }
    const BoundCheck b = unassisted_bound_check(d, 200, kSeed + 7);
    const double assisted = 2.0 * d / (d + 1.0);
    o.pass = o.pass && b.trials == 200 && std::abs(b.bound - bounds[d - 2]) <= 1e-15 &&
             b.max_ratio <= bounds[d - 2] + kBoundTol && bounds[d - 2] < assisted;
    o.detail += fmt("d=%g max ratio=%.6f bound=%.6f ", d, b.max_ratio, bounds[d - 2]);
  }
  const double secs = seconds_since(t0);
  o.pass = o.pass && secs < 600.0;
  o.detail += fmt("(%.1fs)", secs);
  return o;
}

// Property checks.

bool choi_validity(std::string& why) {
  for (int t = 0; t < 30; ++t) {
    auto rng = sampling::trial_rng(kSeed + 80, t);
    const int din = 2 + t % 2;
    const int dout = 2 + (t / 2) % 2;
    const ChoiMatrix ch = sampling::random_channel(din, dout, rng, dout < din ? 2 + t % 3 : t % 4);
    const ComplexMatrix red = partial_trace(ch.matrix(), ch.shape(), kKeepInput);
    if (max_abs_diff(red, identity(din) / static_cast<double>(din)) > kTraceTol ||
        min_eigenvalue(ch.matrix()) < -kTraceTol) {
      why = "random channel violates Tr_K J = I/d or J >= 0";
      return false;
    }
    const JointChannel joint = sampling::random_joint_channel(din, 2, dout, rng, 1 + t % 3);
    for (int x = 0; x < 2; ++x) {
      const ComplexMatrix mred = partial_trace(marginal(joint, x).matrix(), TensorShape({dout, din}), kKeepInput);
      if (max_abs_diff(mred, identity(din) / static_cast<double>(din)) > kTraceTol) {
        why = "joint channel marginal not trace preserving";
        return false;
      }
    }
  }
  return true;
}

bool compat_round_trips(std::string& why) {
  for (int t = 0; t < 5; ++t) {
    auto rng = sampling::trial_rng(kSeed + 81, t);
    const JointChannel joint = sampling::random_joint_channel(2, 2, 2, rng, 1 + t % 3);
    const std::vector<ChoiMatrix> chs{marginal(joint, 0), marginal(joint, 1)};
    const CompatibilityVerdict v = check_channels(chs);
    if (!v.compatible || !v.joint) {
      why = "marginals of a joint channel reported incompatible";
      return false;
    }
    for (int x = 0; x < 2; ++x) {
      if (max_abs_diff(marginal(*v.joint, x).matrix(), chs[x].matrix()) > kRoundTripTol) {
        why = "returned joint channel does not reproduce the marginals";
        return false;
      }
    }

    // Post-processings of a common parent.
    const Povm parent = sampling::random_povm(2, 4, rng);
    const Povm a(2, {parent[0] + parent[1], parent[2] + parent[3]});
    const Povm b(2, {parent[0] + parent[2], parent[1] + parent[3]});
    const CompatibilityVerdict vm = check_measurements(PovmCollection({a, b}));
    if (!vm.compatible || !vm.parent) {
      why = "coarse-grainings of one POVM reported incompatible";
      return false;
    }
    const auto& g = *vm.parent;
    if (max_abs_diff(g[0] + g[1], a[0]) > kRoundTripTol || max_abs_diff(g[0] + g[2], b[0]) > kRoundTripTol) {
      why = "returned parent does not reproduce the POVMs";
      return false;
    }

    const Instrument instr = sampling::random_instrument(2, 2, 2, rng);
    const Povm m = instrument_povm(instr);
    const ChoiMatrix ch = instrument_total(instr);
    const CompatibilityVerdict vp = check_pair(m, ch);
    if (!vp.compatible || !vp.instrument) {
      why = "POVM and channel of one instrument reported incompatible";
      return false;
    }
    const Povm m2 = instrument_povm(*vp.instrument);
    if (max_abs_diff(instrument_total(*vp.instrument).matrix(), ch.matrix()) > kRoundTripTol ||
        max_abs_diff(m2[0], m[0]) > kRoundTripTol) {
      why = "returned instrument does not reproduce the pair";
      return false;
    }
  }
  if (check_channels({identity_channel(2), identity_channel(2)}).compatible ||
      check_measurements(PovmCollection({sigma_z(), sigma_x()})).compatible ||
      check_pair(sigma_z(), identity_channel(2)).compatible) {
    why = "known incompatible instance reported compatible";
    return false;
  }
  return true;
}

bool witness_normalization(std::string& why) {
  const RobustnessReport rc = robustness_channels({identity_channel(2), identity_channel(2)});
  const RobustnessReport rm = robustness_measurements(PovmCollection({sigma_z(), sigma_x()}));
  const RobustnessReport rp = robustness_pair(sigma_z(), identity_channel(2));
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    auto rng = sampling::trial_rng(kSeed + 82, s);
    const JointChannel joint = sampling::random_joint_channel(2, 2, 2, rng, 1 + s % 3);
    worst = std::max(worst, witness_functional(*rc.witness, {marginal(joint, 0), marginal(joint, 1)}));

    const Povm parent = sampling::random_povm(2, 4, rng);
    const Povm a(2, {parent[0] + parent[1], parent[2] + parent[3]});
    const Povm b(2, {parent[0] + parent[2], parent[1] + parent[3]});
    worst = std::max(worst, witness_functional(*rm.witness, PovmCollection({a, b})));

    const Instrument instr = sampling::random_instrument(2, 2, 2, rng);
    worst = std::max(worst, witness_functional(*rp.witness, instrument_povm(instr), instrument_total(instr)));
  }
  if (worst > 1.0 + kWitnessTol) {
    why = fmt("witness exceeds one on a compatible sample (%.3e)", worst - 1.0);
    return false;
  }
  return true;
}

bool success_in_unit_interval(std::string& why) {
  for (int t = 0; t < 100; ++t) {
    auto rng = sampling::trial_rng(kSeed + 83, t);
    const bool assisted = t % 2 == 1;
    const int d = 2;
    const int sd = assisted ? d * d : d;
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const double p0 = u(rng);
    std::vector<std::vector<WeightedState>> ens(2);
    for (auto& e : ens) {
      const double q = u(rng);
      e.push_back({q / (1.0 + q), sampling::random_state(sd, rng)});
      e.push_back({1.0 / (1.0 + q), sampling::random_state(sd, rng)});
    }
    const DiscriminationGame game(assisted, d, {p0 / (1.0 + p0), 1.0 / (1.0 + p0)}, std::move(ens));
    const int md = assisted ? d * d : d;
    const Strategy s{{sampling::random_channel(d, d, rng), sampling::random_channel(d, d, rng)},
                     {sampling::random_povm(md, 2, rng), sampling::random_povm(md, 2, rng)}};
    const double p = success_prob(game, s);
    if (p < -kProbTol || p > 1.0 + kProbTol) {
      why = fmt("P_succ=%.17g outside [0,1]", p);
      return false;
    }
  }
  return true;
}

bool determinism(std::string& why) {
  suites::SuiteConfig cfg;
  cfg.seed = 99;
  cfg.trials = 3;
  const auto a = suites::run("duality", cfg);
  const auto b = suites::run("duality", cfg);
  if (a.checks.size() != b.checks.size()) {
    why = "suite length differs between identical runs";
    return false;
  }
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    if (a.checks[i].value != b.checks[i].value) {
      why = "suite values differ between identical runs";
      return false;
    }
  }
  auto r1 = sampling::trial_rng(5, 7);
  auto r2 = sampling::trial_rng(5, 7);
  if (max_abs_diff(sampling::random_state(3, r1), sampling::random_state(3, r2)) != 0.0) {
    why = "seeded sampler not reproducible";
    return false;
  }
  return true;
}

Outcome criterion8() {
  Outcome o;
  const std::vector<std::pair<const char*, std::function<bool(std::string&)>>> props{
      {"choi-validity", choi_validity},
      {"compat-round-trips", compat_round_trips},
      {"witness-normalization", witness_normalization},
      {"psucc-unit-interval", success_in_unit_interval},
      {"determinism", determinism},
  };
  for (const auto& [name, fn] : props) {
    std::string why;
    const bool ok = fn(why);
    o.pass = o.pass && ok;
    o.detail += std::string(name) + (ok ? "=ok " : "=FAIL(" + why + ") ");
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
      {"identity-pair closed form", criterion1},
      {"strong duality", criterion2},
      {"channel witness game ratio", criterion3},
      {"measurement reduction", criterion4},
      {"pair reduction", criterion5},
      {"pair witness game ratio", criterion6},
      {"cloner and unassisted bound", criterion7},
      {"property suites", criterion8},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
