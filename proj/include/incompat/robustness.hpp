#pragma once

// Robustness of incompatibility for channel collections, measurement
// collections and measurement-channel pairs: the least weight s of noise
// such that (object + s noise)/(1 + s) becomes compatible.
//
// Primal programs optimize over the cone generated by compatible objects
// (joint objects with unnormalized trace 1 + s). Dual programs optimize
// over witnesses whose functional is at most one on every compatible object.

#include <optional>
#include <string_view>
#include <vector>

#include "incompat/compat.hpp"
#include "incompat/qobjects.hpp"
#include "incompat/sdp.hpp"

namespace incompat {

enum class RobustnessKind { kMeasurements, kChannels, kPair };
std::string_view kind_name(RobustnessKind k);

// Below this weight the noise object is reported as absent.
inline constexpr double kZeroNoise = 1e-9;

struct WitnessSet {
  RobustnessKind kind = RobustnessKind::kChannels;
  // channels: A_x on K (x) H; pair: A_i on H; measurements: A_{i|x} on H,
  // stored at index x * o + i.
  std::vector<ComplexMatrix> a;
  std::optional<ComplexMatrix> b;  // pair only, on K (x) H
  int dim_in = 0;
  int dim_out = 0;
  int outcomes = 0;  // measurements only
  double value = 0.0;
};

// Witness functional: sum_x Tr[A_x J_x], sum_{i,x} Tr[A_{i|x} M_{i|x}] or
// sum_i Tr[A_i M_i] + Tr[B J].
double witness_functional(const WitnessSet& w, const std::vector<ChoiMatrix>& chs);
double witness_functional(const WitnessSet& w, const PovmCollection& ms);
double witness_functional(const WitnessSet& w, const Povm& m, const ChoiMatrix& ch);

struct RobustnessReport {
  RobustnessKind kind = RobustnessKind::kChannels;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  std::optional<WitnessSet> witness;

  // Noise realizing the optimum; empty when s < kZeroNoise.
  std::vector<ChoiMatrix> noise_channels;
  std::vector<Povm> noise_povms;
  std::optional<ChoiMatrix> noise_pair_channel;

  // Joint object of the normalized mixture.
  std::optional<JointChannel> mixture_joint;
  std::optional<std::vector<ComplexMatrix>> mixture_parent;
  std::optional<Instrument> mixture_instrument;

  sdp::SdpSolution solution;
};

RobustnessReport robustness_channels_primal(const std::vector<ChoiMatrix>& chs,
                                            const sdp::SolverOptions& opts = {});
WitnessSet robustness_channels_dual(const std::vector<ChoiMatrix>& chs,
                                    const sdp::SolverOptions& opts = {});
// Primal plus dual; the report's dual_value and witness come from the
// witness program.
RobustnessReport robustness_channels(const std::vector<ChoiMatrix>& chs,
                                     const sdp::SolverOptions& opts = {});

RobustnessReport robustness_measurements_primal(const PovmCollection& ms,
                                                const sdp::SolverOptions& opts = {});
WitnessSet robustness_measurements_dual(const PovmCollection& ms,
                                        const sdp::SolverOptions& opts = {});
RobustnessReport robustness_measurements(const PovmCollection& ms,
                                         const sdp::SolverOptions& opts = {});

RobustnessReport robustness_pair_primal(const Povm& m, const ChoiMatrix& ch,
                                        const sdp::SolverOptions& opts = {});
WitnessSet robustness_pair_dual(const Povm& m, const ChoiMatrix& ch,
                                const sdp::SolverOptions& opts = {});
RobustnessReport robustness_pair(const Povm& m, const ChoiMatrix& ch,
                                 const sdp::SolverOptions& opts = {});

struct PropositionCheck {
  double lhs = 0.0;  // R_M or R_MC
  double rc = 0.0;   // robustness of the corresponding channels
  double delta = 0.0;
};

// R_M of the collection against R_C of its quantum-to-classical channels.
PropositionCheck verify_prop1(const PovmCollection& ms, const sdp::SolverOptions& opts = {});
// R_MC of the pair against R_C of {qc_channel(m), ch}, both outputs padded
// to max(o, d').
PropositionCheck verify_prop2(const Povm& m, const ChoiMatrix& ch,
                              const sdp::SolverOptions& opts = {});

// R_C of two identity channels on dimension d: (d - 1)/(d + 1).
double identity_pair_closed_form(int d);

}  // namespace incompat
