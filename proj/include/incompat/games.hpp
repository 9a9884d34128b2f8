#pragma once

// State discrimination games. Bob draws x with probability p(x) and sends
// rho_{i|x} with probability p(i|x); Alice learns x and guesses i.
//
// In an entanglement-assisted game the states live on H (x) H and Alice's
// channel acts on the first factor only; her measurement then acts on
// K (x) H. Unassisted games use states on H and measurements on K.

#include <cstdint>
#include <vector>

#include "incompat/qobjects.hpp"
#include "incompat/robustness.hpp"
#include "incompat/sdp.hpp"

namespace incompat {

struct WeightedState {
  double p;
  ComplexMatrix state;
};

class DiscriminationGame {
 public:
  // `dim` is the dimension of H.
  DiscriminationGame(bool assisted, int dim, std::vector<double> prior,
                     std::vector<std::vector<WeightedState>> ensembles);

  bool assisted() const { return assisted_; }
  int dim() const { return dim_; }
  int state_dim() const { return assisted_ ? dim_ * dim_ : dim_; }
  int n() const { return static_cast<int>(prior_.size()); }
  const std::vector<double>& prior() const { return prior_; }
  const std::vector<std::vector<WeightedState>>& ensembles() const { return ensembles_; }

 private:
  bool assisted_;
  int dim_;
  std::vector<double> prior_;
  std::vector<std::vector<WeightedState>> ensembles_;
};

// One optional preprocessing channel and one measurement per x. Without
// preprocessing the measurements act directly on the states.
struct Strategy {
  std::vector<ChoiMatrix> preprocess;
  std::vector<Povm> measurements;
};

// Two-round strategy for a game with n = 2: measure `first` on H for x = 0;
// apply `channel` and measure `second` for x = 1.
struct PairStrategy {
  Povm first;
  ChoiMatrix channel;
  Povm second;
};

double success_prob(const DiscriminationGame& game, const Strategy& strat);
double success_prob(const DiscriminationGame& game, const PairStrategy& strat);

// The operator Q with Tr[J Q] = Tr[Phi(rho) M] (unassisted, rho on H) or
// Tr[(Phi (x) id)(rho) M] (assisted, rho on H (x) H), for every Choi
// matrix J of a map H -> K.
ComplexMatrix success_operator(const ComplexMatrix& rho, const ComplexMatrix& m, int dim_in,
                               int dim_out, bool assisted);

// Largest success probability when the preprocessing channels must be the
// marginals of one joint channel (measurements fixed).
double best_compatible_success(const DiscriminationGame& game, const std::vector<Povm>& meas,
                               int dim_out, const sdp::SolverOptions& opts = {});
// Largest two-round success probability over compatible (POVM, channel)
// pairs, i.e. over instruments with `outcomes` outcomes (second
// measurement fixed).
double best_compatible_pair_success(const DiscriminationGame& game, const Povm& second,
                                    int dim_out, int outcomes,
                                    const sdp::SolverOptions& opts = {});

struct ChannelGame {
  DiscriminationGame game;
  std::vector<Povm> measurements;
};

struct PairGame {
  DiscriminationGame game;
  Povm second;  // measurement on K (x) H for x = 1
};

// Witness components with operator norm below this are dropped.
inline constexpr double kWitnessFloor = 1e-10;

ChannelGame game_from_channel_witness(const WitnessSet& w);
PairGame game_from_pair_witness(const WitnessSet& w);

// success(resource) / best compatible success.
double advantage_ratio(const DiscriminationGame& game, const Strategy& resource,
                       const sdp::SolverOptions& opts = {});
double advantage_ratio(const DiscriminationGame& game, const PairStrategy& resource,
                       const sdp::SolverOptions& opts = {});

// Upper bound 2(d + 1)/(d + 3) on unassisted advantages of {id, id}.
double unassisted_bound(int d);

struct BoundCheck {
  int trials = 0;
  double max_ratio = 0.0;
  double bound = 0.0;
  double assisted_value = 0.0;  // 2d/(d + 1)
  // Largest P(id, id)/P(cloner marginals) seen, and whether every sample
  // satisfied ratio <= that quotient <= bound.
  double max_cloning_quotient = 0.0;
  bool chain_holds = true;
};

// Samples unassisted two-ensemble games and compares {id, id} against the
// best compatible channels. Each trial draws random priors, a random
// projective measurement per x, and states (1 - q) P_{i|x} + q rho with
// P_{i|x} the measurement's projectors, rho a random mixed state and q
// uniform in [0, 1].
BoundCheck unassisted_bound_check(int d, int trials, std::uint64_t seed,
                                  const sdp::SolverOptions& opts = {});

// The game of perfectly distinguishing {|0>,|1>} or {|+>,|->}, uniform.
DiscriminationGame bb84_game();

}  // namespace incompat
