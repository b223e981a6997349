// Reference computations that share no code path with the matrix-free
// evolution: Hamiltonians assembled from Kronecker products of explicit
// matrices, and propagation by dense matrix exponential.
#pragma once

#include <Eigen/Dense>

#include "intricacy/indexed_state.hpp"
#include "intricacy/lattice.hpp"

namespace intricacy::oracle {

/// Standard Hamiltonian K_S (+ K_M + U) + V on the physical space, one
/// identical block per M label.
Eigen::MatrixXcd standard_hamiltonian(const StateLayout& layout, const PairPotential& potential,
                                      const MCoupling& coupling);

/// H' assembled as sum of kron(string operator, spatial operator) terms.
Eigen::MatrixXcd extended_hamiltonian(const StateLayout& layout, const PairPotential& potential,
                                      const MCoupling& coupling);

/// The A projection lifted to the full indexed space (kron(A, I) per label).
Eigen::MatrixXcd projection_matrix(const StateLayout& layout, int target_channel = 1);

/// Copies a physical-space operator onto every string: per label,
/// kron(I_strings, block).
Eigen::MatrixXcd lift_to_strings(const StateLayout& layout, const Eigen::MatrixXcd& physical);

/// exp(-i t H) psi0 via Pade scaling-and-squaring.
Eigen::VectorXcd propagate(const Eigen::MatrixXcd& hamiltonian, const Eigen::VectorXcd& psi0,
                           double t);

}  // namespace intricacy::oracle
