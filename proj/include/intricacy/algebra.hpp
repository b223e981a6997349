// Per-atom intricacy operator algebra.
//
// Each atom carries an index in {0, 1, ..., k}: 0 means "not intricate",
// j >= 1 means "intricate with channel j". Operators act on that index as
// small dense matrices. Basis ordering is (0, 1, ..., k), so index 0 is the
// first coordinate. For k = 1 this gives
//
//   P0 = diag(1, 0) = (I - sz)/2,  P1 = diag(0, 1) = (I + sz)/2,
//   S  = [[0, 0], [1, 0]] = (sx + i sy)/2
//
// with the Pauli matrices written in the (down, up) ordering, i.e.
// sz = diag(-1, 1), sx = [[0, 1], [1, 0]], sy = [[0, i], [-i, 0]].
//
// Strings of indices over N atoms are encoded base (k+1) with atom 0 as the
// most significant digit, which matches Kronecker-product ordering.
#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace intricacy {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Complex = std::complex<double>;

/// Number of intricacy channels k; the per-atom index set is {0, ..., k}.
class ChannelCount {
 public:
  explicit ChannelCount(int k) : k_(k) {
    if (k < 1) throw std::invalid_argument("channel count must be >= 1");
  }
  int value() const { return k_; }
  int local_dim() const { return k_ + 1; }

  friend bool operator==(ChannelCount, ChannelCount) = default;

 private:
  int k_;
};

/// Projectors P_mu (mu = 0..k) and raising maps S_j (j = 1..k) for one atom.
template <typename Scalar = Complex>
struct AtomOperators {
  ChannelCount channels;
  std::vector<DenseMatrix<Scalar>> projector;  // projector[mu] = P_mu
  std::vector<DenseMatrix<Scalar>> raising;    // raising[j-1] = S_j

  const DenseMatrix<Scalar>& P(int mu) const { return projector.at(mu); }
  const DenseMatrix<Scalar>& S(int j) const {
    if (j < 1 || j > channels.value()) throw std::out_of_range("raising channel out of range");
    return raising[j - 1];
  }
  DenseMatrix<Scalar> identity() const {
    return DenseMatrix<Scalar>::Identity(channels.local_dim(), channels.local_dim());
  }
};

template <typename Scalar = Complex>
AtomOperators<Scalar> build_atom_operators(ChannelCount channels) {
  const int d = channels.local_dim();
  AtomOperators<Scalar> ops{channels, {}, {}};
  for (int mu = 0; mu < d; ++mu) {
    DenseMatrix<Scalar> p = DenseMatrix<Scalar>::Zero(d, d);
    p(mu, mu) = Scalar(1);
    ops.projector.push_back(std::move(p));
  }
  // S_j has a single 1 in row j, column 0.
  for (int j = 1; j < d; ++j) {
    DenseMatrix<Scalar> s = DenseMatrix<Scalar>::Zero(d, d);
    s(j, 0) = Scalar(1);
    ops.raising.push_back(std::move(s));
  }
  return ops;
}

/// Pauli matrices in the (index 0, index 1) ordering used above.
struct PauliMatrices {
  DenseMatrix<Complex> x, y, z;
};

inline PauliMatrices pauli_in_index_basis() {
  using namespace std::complex_literals;
  PauliMatrices s{DenseMatrix<Complex>(2, 2), DenseMatrix<Complex>(2, 2),
                  DenseMatrix<Complex>(2, 2)};
  s.x << 0.0, 1.0, 1.0, 0.0;
  s.y << 0.0, 1i, -1i, 0.0;
  s.z << -1.0, 0.0, 0.0, 1.0;
  return s;
}

/// Operator on an ordered pair of atom indices, (k+1)^2 square.
/// Row/column index of the pair (a, b) is a*(k+1) + b.
template <typename Scalar = Complex>
struct PairOperator {
  ChannelCount channels;
  DenseMatrix<Scalar> matrix;

  int pair_index(int a, int b) const { return a * channels.local_dim() + b; }

  /// Output pair for the basis input (a, b), or nullopt if annihilated.
  std::optional<std::pair<int, int>> transition(int a, int b) const {
    const int d = channels.local_dim();
    const int col = pair_index(a, b);
    for (int row = 0; row < matrix.rows(); ++row) {
      if (matrix(row, col) != Scalar(0)) return std::make_pair(row / d, row % d);
    }
    return std::nullopt;
  }
};

// O = sum_mu P_mu (x) P_mu + sum_j (S_j P_0 (x) P_j + P_j (x) S_j P_0).
// No P_i (x) P_j term for distinct channels i, j >= 1: such pairs are annihilated.
template <typename Scalar = Complex>
PairOperator<Scalar> build_pair_operator(const AtomOperators<Scalar>& ops) {
  using Eigen::kroneckerProduct;
  const int d = ops.channels.local_dim();
  DenseMatrix<Scalar> o = DenseMatrix<Scalar>::Zero(d * d, d * d);
  for (int mu = 0; mu < d; ++mu) o += kroneckerProduct(ops.P(mu), ops.P(mu)).eval();
  for (int j = 1; j < d; ++j) {
    const DenseMatrix<Scalar> raise = ops.S(j) * ops.P(0);
    o += kroneckerProduct(raise, ops.P(j)).eval();
    o += kroneckerProduct(ops.P(j), raise).eval();
  }
  return {ops.channels, std::move(o)};
}

template <typename Scalar = Complex>
PairOperator<Scalar> build_pair_operator(ChannelCount channels) {
  return build_pair_operator(build_atom_operators<Scalar>(channels));
}

/// Generation map for the M-atom coupling: S_j P_0 + P_j on one atom.
template <typename Scalar = Complex>
DenseMatrix<Scalar> generation_operator(const AtomOperators<Scalar>& ops, int channel) {
  return ops.S(channel) * ops.P(0) + ops.P(channel);
}

/// Enumerates intricacy strings over N atoms with k channels.
class StringSpace {
 public:
  StringSpace(ChannelCount channels, int n_atoms) : channels_(channels), n_atoms_(n_atoms) {
    if (n_atoms < 1) throw std::invalid_argument("need at least one atom");
    size_ = 1;
    for (int n = 0; n < n_atoms; ++n) size_ *= channels.local_dim();
  }

  ChannelCount channels() const { return channels_; }
  int n_atoms() const { return n_atoms_; }
  std::int64_t size() const { return size_; }

  int digit(std::int64_t code, int atom) const {
    const int d = channels_.local_dim();
    for (int n = n_atoms_ - 1; n > atom; --n) code /= d;
    return static_cast<int>(code % d);
  }

  std::int64_t with_digit(std::int64_t code, int atom, int value) const {
    std::int64_t place = 1;
    for (int n = n_atoms_ - 1; n > atom; --n) place *= channels_.local_dim();
    return code + (value - digit(code, atom)) * place;
  }

  std::int64_t encode(const std::vector<int>& digits) const {
    if (static_cast<int>(digits.size()) != n_atoms_)
      throw std::invalid_argument("string length does not match atom count");
    std::int64_t code = 0;
    for (int v : digits) {
      if (v < 0 || v > channels_.value()) throw std::invalid_argument("string index out of range");
      code = code * channels_.local_dim() + v;
    }
    return code;
  }

  std::vector<int> decode(std::int64_t code) const {
    std::vector<int> digits(n_atoms_);
    for (int n = n_atoms_ - 1; n >= 0; --n) {
      digits[n] = static_cast<int>(code % channels_.local_dim());
      code /= channels_.local_dim();
    }
    return digits;
  }

  std::int64_t uniform(int value) const { return encode(std::vector<int>(n_atoms_, value)); }

 private:
  ChannelCount channels_;
  int n_atoms_;
  std::int64_t size_;
};

/// Lifts a single-atom operator to the full string space (identity elsewhere).
template <typename Scalar>
DenseMatrix<Scalar> embed_atom(const DenseMatrix<Scalar>& op, int n_atoms, int atom) {
  const Eigen::Index d = op.rows();
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Identity(1, 1);
  for (int n = 0; n < n_atoms; ++n) {
    const DenseMatrix<Scalar> factor = n == atom ? op : DenseMatrix<Scalar>::Identity(d, d);
    out = Eigen::kroneckerProduct(out, factor).eval();
  }
  return out;
}

/// Lifts a pair operator to act on atoms (first, second) of an N-atom string.
template <typename Scalar>
DenseMatrix<Scalar> embed_pair(const PairOperator<Scalar>& pair, int n_atoms, int first,
                               int second) {
  if (first == second || first < 0 || second < 0 || first >= n_atoms || second >= n_atoms)
    throw std::invalid_argument("invalid atom pair");
  const StringSpace space(pair.channels, n_atoms);
  const int d = pair.channels.local_dim();
  DenseMatrix<Scalar> out = DenseMatrix<Scalar>::Zero(space.size(), space.size());
  for (std::int64_t col = 0; col < space.size(); ++col) {
    const int a = space.digit(col, first), b = space.digit(col, second);
    for (int a2 = 0; a2 < d; ++a2) {
      for (int b2 = 0; b2 < d; ++b2) {
        const Scalar c = pair.matrix(pair.pair_index(a2, b2), pair.pair_index(a, b));
        if (c == Scalar(0)) continue;
        const std::int64_t row = space.with_digit(space.with_digit(col, first, a2), second, b2);
        out(row, col) += c;
      }
    }
  }
  return out;
}

/// A = prod_n (P_j + S_j P_0) over all atoms, as a (k+1)^N square matrix.
template <typename Scalar = Complex>
DenseMatrix<Scalar> build_projection_A(const AtomOperators<Scalar>& ops, int n_atoms,
                                       int target_channel) {
  if (target_channel < 1 || target_channel > ops.channels.value())
    throw std::invalid_argument("target channel outside 1..k");
  if (n_atoms < 1) throw std::invalid_argument("need at least one atom");
  const DenseMatrix<Scalar> factor = generation_operator(ops, target_channel);
  DenseMatrix<Scalar> a = factor;
  for (int n = 1; n < n_atoms; ++n) a = Eigen::kroneckerProduct(a, factor).eval();
  return a;
}

template <typename Scalar = Complex>
DenseMatrix<Scalar> build_projection_A(ChannelCount channels, int n_atoms, int target_channel) {
  return build_projection_A(build_atom_operators<Scalar>(channels), n_atoms, target_channel);
}

/// Reads a matrix as a deterministic index map: column -> row, -1 if the
/// column is zero. Throws unless every column has at most one entry, equal to 1.
template <typename Derived>
std::vector<int> to_index_map(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  std::vector<int> map(static_cast<std::size_t>(m.cols()), -1);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (Eigen::Index row = 0; row < m.rows(); ++row) {
      const Scalar c = m(row, col);
      if (c == Scalar(0)) continue;
      if (c != Scalar(1) || map[col] != -1)
        throw std::logic_error("operator is not a deterministic index map");
      map[col] = static_cast<int>(row);
    }
  }
  return map;
}

}  // namespace intricacy
