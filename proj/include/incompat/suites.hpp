#pragma once

// Built-in verification suites. Each suite runs a fixed list of numerical
// checks and records value, reference, tolerance and verdict for each.

#include <cstdint>
#include <string>
#include <vector>

#include "incompat/qobjects.hpp"
#include "incompat/sampling.hpp"
#include "incompat/sdp.hpp"

namespace incompat::suites {

enum class Relation { kEqual, kAtMost, kAtLeast };

struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::kEqual;
  bool pass = false;
};

Check expect_near(std::string name, double value, double reference, double tol);
Check expect_at_most(std::string name, double value, double bound, double tol);
Check expect_at_least(std::string name, double value, double bound, double tol);

struct SuiteReport {
  std::string suite;
  int dim = 2;
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<Check> checks;
  bool pass() const;
};

struct SuiteConfig {
  int dim = 2;
  std::uint64_t seed = 1;
  int trials = -1;  // negative: the suite's default
  sdp::SolverOptions solver;
};

inline constexpr double kDualityTol = 1e-6;
inline constexpr double kReductionTol = 1e-6;
inline constexpr double kRatioTol = 1e-5;
inline constexpr double kNormalizationTol = 1e-7;

// Ratio of the witness game equals 1 + R_C: {id, id}, the quantum-to-
// classical channels of two mutually unbiased bases, and random pairs
// (default 5).
SuiteReport theorem1(const SuiteConfig& cfg);
// Ratio of the witness game equals 1 + R_MC for the computational-basis
// measurement with the identity channel and random pairs (default 3 total).
SuiteReport theorem2(const SuiteConfig& cfg);
// R_M = R_C of the quantum-to-classical channels (default 20 random pairs
// plus the mutually unbiased pair).
SuiteReport prop1(const SuiteConfig& cfg);
// R_MC = R_C({Gamma, Lambda}) (default 10 random pairs plus one fixed).
SuiteReport prop2(const SuiteConfig& cfg);
// Cloner marginals and the unassisted bound (default 200 trials).
SuiteReport appendix_c(const SuiteConfig& cfg);
// Strong duality and witness normalization (default 10 random pairs).
SuiteReport duality(const SuiteConfig& cfg);

std::vector<std::string> suite_names();
// Throws ContractError for an unknown name.
SuiteReport run(const std::string& name, const SuiteConfig& cfg);

// Fixed instances shared by suites, demos and tests.
Povm computational_povm(int d);
Povm fourier_povm(int d);
// Two-outcome projective POVM: projector onto the span of the first
// ceil(d/2) columns of a Haar unitary, and its complement.
Povm random_binary_projective(int d, sampling::Rng& rng);
// Random channel pair with R_C above `min_robustness` (rank-2 channels).
std::vector<ChoiMatrix> random_incompatible_channels(int d, sampling::Rng& rng,
                                                     double min_robustness,
                                                     const sdp::SolverOptions& opts);

}  // namespace incompat::suites
