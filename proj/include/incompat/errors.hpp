#pragma once

#include <stdexcept>
#include <string>

namespace incompat {

// Shapes or subsystem dimensions that do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An input violates a documented precondition (not Hermitian, not a POVM, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A scalar parameter outside the supported range.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A dual witness that is identically zero cannot define a discrimination game.
class DegenerateWitnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The conic solver did not reach an optimal status.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace incompat
