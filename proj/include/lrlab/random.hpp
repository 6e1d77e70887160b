#pragma once

#include <cstdint>
#include <random>

#include "lrlab/linalg.hpp"
#include "lrlab/quantum.hpp"

namespace lrlab {

using Rng = std::mt19937_64;

/// Ginibre matrix with i.i.d. standard complex normal entries.
Matrix ginibre(Index rows, Index cols, Rng& rng);
/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
Matrix haar_unitary(Index dim, Rng& rng);
/// Random Hermitian matrix scaled to operator norm `norm`.
Matrix random_hermitian(Index dim, Rng& rng, double norm = 1.0);
/// Haar-random pure state.
PureState random_state(int n_qubits, Rng& rng);
/// Product of independent Haar-random single-qubit states.
PureState random_product_state(int n_qubits, Rng& rng);
/// Random full-rank density matrix (Ginibre ensemble) on dim dimensions.
Matrix random_density(Index dim, Rng& rng);

}  // namespace lrlab
