#include "intricacy/harness/oracles.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "intricacy/algebra.hpp"

namespace intricacy::oracle {

namespace {

using Eigen::MatrixXcd;

MatrixXcd laplacian_1d(int points, double spacing, double mass) {
  MatrixXcd t = MatrixXcd::Zero(points, points);
  const double c = 0.5 / (mass * spacing * spacing);
  for (int i = 0; i < points; ++i) {
    t(i, i) = 2.0 * c;
    if (i > 0) t(i, i - 1) = -c;
    if (i + 1 < points) t(i, i + 1) = -c;
  }
  return t;
}

struct Dims {
  std::vector<int> extent;
  std::vector<double> spacing;
  std::vector<double> mass;
};

Dims spatial_dims(const StateLayout& layout, const MCoupling& coupling) {
  Dims d;
  for (int n = 0; n < layout.n_atoms; ++n) {
    d.extent.push_back(layout.grid_points);
    d.spacing.push_back(layout.spacing);
    d.mass.push_back(1.0);
  }
  if (layout.has_m) {
    d.extent.push_back(layout.m_points);
    d.spacing.push_back(layout.m_spacing);
    d.mass.push_back(coupling.mass);
  }
  return d;
}

MatrixXcd kinetic(const Dims& d) {
  MatrixXcd total;
  for (std::size_t dim = 0; dim < d.extent.size(); ++dim) {
    MatrixXcd term = MatrixXcd::Identity(1, 1);
    for (std::size_t k = 0; k < d.extent.size(); ++k) {
      const MatrixXcd f = k == dim ? laplacian_1d(d.extent[k], d.spacing[k], d.mass[k])
                                   : MatrixXcd::Identity(d.extent[k], d.extent[k]);
      term = Eigen::kroneckerProduct(term, f).eval();
    }
    total = dim == 0 ? term : (total + term).eval();
  }
  return total;
}

// Diagonal matrix of f(coordinate[a], coordinate[b]) over the spatial grid.
template <typename F>
MatrixXcd diagonal_potential(const Dims& d, int a, int b, F f) {
  Eigen::Index size = 1;
  for (int e : d.extent) size *= e;
  Eigen::VectorXcd diag(size);
  std::vector<int> idx(d.extent.size());
  for (Eigen::Index s = 0; s < size; ++s) {
    Eigen::Index r = s;
    for (int k = static_cast<int>(d.extent.size()) - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(r % d.extent[k]);
      r /= d.extent[k];
    }
    diag[s] = f((idx[a] + 1) * d.spacing[a], (idx[b] + 1) * d.spacing[b]);
  }
  return diag.asDiagonal();
}

MatrixXcd block_diagonal(const MatrixXcd& block, int copies) {
  return Eigen::kroneckerProduct(MatrixXcd::Identity(copies, copies), block).eval();
}

}  // namespace

MatrixXcd standard_hamiltonian(const StateLayout& layout, const PairPotential& potential,
                               const MCoupling& coupling) {
  const Dims d = spatial_dims(layout, coupling);
  MatrixXcd h = kinetic(d);
  for (int n = 0; n < layout.n_atoms; ++n)
    for (int m = n + 1; m < layout.n_atoms; ++m) h += diagonal_potential(d, n, m, potential);
  if (layout.has_m) {
    const int y = layout.n_atoms;
    for (int n = 0; n < layout.n_atoms; ++n)
      h += diagonal_potential(d, y, n, [&](double yv, double xv) { return coupling.potential(yv, xv); });
  }
  return block_diagonal(h, layout.labels);
}

MatrixXcd extended_hamiltonian(const StateLayout& layout, const PairPotential& potential,
                               const MCoupling& coupling) {
  const Dims d = spatial_dims(layout, coupling);
  const auto ops = build_atom_operators(ChannelCount(layout.channels));
  const auto pair = build_pair_operator(ops);
  const Eigen::Index strings = layout.strings();
  const MatrixXcd id_strings = MatrixXcd::Identity(strings, strings);

  MatrixXcd common = Eigen::kroneckerProduct(id_strings, kinetic(d)).eval();
  for (int n = 0; n < layout.n_atoms; ++n)
    for (int m = n + 1; m < layout.n_atoms; ++m)
      common += Eigen::kroneckerProduct(embed_pair(pair, layout.n_atoms, n, m),
                                        diagonal_potential(d, n, m, potential))
                    .eval();

  const Eigen::Index block = strings * layout.space();
  MatrixXcd h = MatrixXcd::Zero(layout.labels * block, layout.labels * block);
  for (int l = 0; l < layout.labels; ++l) {
    MatrixXcd hl = common;
    if (layout.has_m) {
      const MatrixXcd gen = generation_operator(ops, layout.label_channel(l));
      const int y = layout.n_atoms;
      for (int n = 0; n < layout.n_atoms; ++n)
        hl += Eigen::kroneckerProduct(
                  embed_atom(gen, layout.n_atoms, n),
                  diagonal_potential(d, y, n, [&](double yv, double xv) { return coupling.potential(yv, xv); }))
                  .eval();
    }
    h.block(l * block, l * block, block, block) = hl;
  }
  return h;
}

MatrixXcd projection_matrix(const StateLayout& layout, int target_channel) {
  const auto ops = build_atom_operators(ChannelCount(layout.channels));
  const Eigen::Index block = layout.strings() * layout.space();
  MatrixXcd p = MatrixXcd::Zero(layout.labels * block, layout.labels * block);
  for (int l = 0; l < layout.labels; ++l) {
    const int channel = layout.has_m ? layout.label_channel(l) : target_channel;
    p.block(l * block, l * block, block, block) =
        Eigen::kroneckerProduct(build_projection_A(ops, layout.n_atoms, channel),
                                MatrixXcd::Identity(layout.space(), layout.space()));
  }
  return p;
}

MatrixXcd lift_to_strings(const StateLayout& layout, const MatrixXcd& physical) {
  const Eigen::Index space = layout.space(), block = layout.strings() * space;
  MatrixXcd out = MatrixXcd::Zero(layout.labels * block, layout.labels * block);
  for (int l = 0; l < layout.labels; ++l)
    for (int k = 0; k < layout.labels; ++k)
      out.block(l * block, k * block, block, block) = Eigen::kroneckerProduct(
          MatrixXcd::Identity(layout.strings(), layout.strings()),
          physical.block(l * space, k * space, space, space));
  return out;
}

Eigen::VectorXcd propagate(const MatrixXcd& hamiltonian, const Eigen::VectorXcd& psi0, double t) {
  const MatrixXcd generator = (Complex(0.0, -t) * hamiltonian).eval();
  const MatrixXcd u = generator.exp();
  return u * psi0;
}

}  // namespace intricacy::oracle
