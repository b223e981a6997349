#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "intricacy/indexed_state.hpp"
#include "intricacy/lattice.hpp"

namespace intricacy {

/// Extended Hamiltonian H' on the string-indexed space, applied matrix-free.
///
///   H' = sum_n -(1/2) d^2/dx_n^2 (same on every string)
///      + sum_{n<m} V(x_n, x_m) O_{nm}
///      + [M present]  -(1/2 m_M) d^2/dy^2 + sum_n U(y, x_n) (S_j P_0 + P_j)_n
///
/// where j is the channel attached to the M label. Laplacians are
/// second-order central differences with zero (hard-wall) boundary values.
/// String transitions come from the index maps of the algebra's operators.
class ExtendedHamiltonian {
 public:
  ExtendedHamiltonian(const StateLayout& layout, const PairPotential& potential,
                      const MCoupling& coupling);

  const StateLayout& layout() const { return layout_; }

  /// out = H' in. `out` is resized as needed; must not alias `in`.
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

  /// Upper bound on the spectral radius of H' (Gershgorin-style).
  double spectral_bound() const { return spectral_bound_; }

  /// Explicit matrix, assembled column by column. Small systems only.
  Eigen::MatrixXcd to_dense() const;

 private:
  void apply_kinetic(const Complex* in, Complex* out) const;

  StateLayout layout_;
  std::vector<std::int64_t> strides_;
  std::vector<int> extents_;
  std::vector<double> kinetic_coeff_;  // 1 / (2 m h^2) per dimension

  struct StringCoupling {
    Eigen::VectorXd values;                // potential over the spatial grid
    std::vector<std::vector<int>> to;      // [label][string] -> string or -1
  };
  std::vector<StringCoupling> couplings_;  // pair terms, then M terms
  double spectral_bound_ = 0.0;
};

/// H' psi as a new indexed wave function.
IndexedWaveFunction apply_extended_hamiltonian(const IndexedWaveFunction& state,
                                               const ExtendedHamiltonian& hamiltonian);

IndexedWaveFunction apply_extended_hamiltonian(const IndexedWaveFunction& state,
                                               const LatticeConfig& config,
                                               const PairPotential& potential,
                                               const MCoupling& coupling);

}  // namespace intricacy
