#pragma once

// Seeded random quantum objects for the randomized suites.

#include <cstdint>
#include <random>

#include "incompat/qobjects.hpp"

namespace incompat::sampling {

using Rng = std::mt19937_64;

// Independent generator for trial `trial` of a suite seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t trial);

// Entries i.i.d. standard complex Gaussian.
ComplexMatrix ginibre(int rows, int cols, Rng& rng);
ComplexMatrix haar_unitary(int d, Rng& rng);
ComplexVector haar_pure_state(int d, Rng& rng);
// Reduced state of a Haar-random pure state on C^d (x) C^d.
ComplexMatrix random_state(int d, Rng& rng);
ComplexMatrix random_hermitian(int d, Rng& rng);

// Eigenprojectors of a random Hermitian matrix (d outcomes).
Povm random_projective_povm(int d, Rng& rng);
// Wishart elements W_i made to sum to the identity.
Povm random_povm(int d, int outcomes, Rng& rng);

// Random channel with the given Kraus rank (0 means full rank d * d').
// Throws DomainError when rank * d' < d.
ChoiMatrix random_channel(int dim_in, int dim_out, Rng& rng, int kraus_rank = 0);
JointChannel random_joint_channel(int dim_in, int n, int dim_out_each, Rng& rng,
                                  int kraus_rank = 0);
Instrument random_instrument(int dim_in, int dim_out, int outcomes, Rng& rng);

}  // namespace incompat::sampling
