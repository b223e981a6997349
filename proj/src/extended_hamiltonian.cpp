#include "intricacy/extended_hamiltonian.hpp"

#include <algorithm>

#include "intricacy/algebra.hpp"
#include "intricacy/errors.hpp"

namespace intricacy {

namespace {

double node(double spacing, std::int64_t i) { return static_cast<double>(i + 1) * spacing; }

int max_in_degree(const std::vector<std::vector<int>>& maps, std::int64_t strings) {
  int worst = 0;
  for (const auto& map : maps) {
    std::vector<int> count(static_cast<std::size_t>(strings), 0);
    for (int target : map)
      if (target >= 0) worst = std::max(worst, ++count[target]);
  }
  return worst;
}

}  // namespace

ExtendedHamiltonian::ExtendedHamiltonian(const StateLayout& layout, const PairPotential& potential,
                                         const MCoupling& coupling)
    : layout_(layout) {
  if (layout.has_m != coupling.present) throw ConfigError("layout and M coupling disagree");

  // Spatial dimensions: atoms (slowest first), then y.
  const std::int64_t space = layout.space();
  std::int64_t stride = space;
  for (int n = 0; n < layout.n_atoms; ++n) {
    stride /= layout.grid_points;
    strides_.push_back(stride);
    extents_.push_back(layout.grid_points);
    kinetic_coeff_.push_back(0.5 / (layout.spacing * layout.spacing));
  }
  if (layout.has_m) {
    strides_.push_back(1);
    extents_.push_back(layout.m_points);
    kinetic_coeff_.push_back(0.5 / (coupling.mass * layout.m_spacing * layout.m_spacing));
  }

  auto coordinate = [&](int dim, std::int64_t s) {
    const std::int64_t i = (s / strides_[dim]) % extents_[dim];
    return node(dim < layout.n_atoms ? layout.spacing : layout.m_spacing, i);
  };

  const ChannelCount channels(layout.channels);
  const auto ops = build_atom_operators(channels);
  const auto pair = build_pair_operator(ops);
  const std::vector<int> pair_map = to_index_map(pair.matrix);
  const StringSpace strings = layout.string_space();
  const int d = channels.local_dim();

  for (int n = 0; n < layout.n_atoms; ++n) {
    for (int m = n + 1; m < layout.n_atoms; ++m) {
      StringCoupling c;
      c.values.resize(space);
      for (std::int64_t s = 0; s < space; ++s) c.values[s] = potential(coordinate(n, s), coordinate(m, s));
      std::vector<int> to(static_cast<std::size_t>(strings.size()), -1);
      for (std::int64_t q = 0; q < strings.size(); ++q) {
        const int target = pair_map[pair.pair_index(strings.digit(q, n), strings.digit(q, m))];
        if (target < 0) continue;
        to[q] = static_cast<int>(
            strings.with_digit(strings.with_digit(q, n, target / d), m, target % d));
      }
      c.to.assign(layout.labels, to);
      couplings_.push_back(std::move(c));
    }
  }

  if (layout.has_m) {
    const int ydim = layout.n_atoms;
    for (int n = 0; n < layout.n_atoms; ++n) {
      StringCoupling c;
      c.values.resize(space);
      for (std::int64_t s = 0; s < space; ++s)
        c.values[s] = coupling.potential(coordinate(ydim, s), coordinate(n, s));
      for (int l = 0; l < layout.labels; ++l) {
        const std::vector<int> gen = to_index_map(generation_operator(ops, layout.label_channel(l)));
        std::vector<int> to(static_cast<std::size_t>(strings.size()), -1);
        for (std::int64_t q = 0; q < strings.size(); ++q) {
          const int target = gen[strings.digit(q, n)];
          if (target >= 0) to[q] = static_cast<int>(strings.with_digit(q, n, target));
        }
        c.to.push_back(std::move(to));
      }
      couplings_.push_back(std::move(c));
    }
  }

  for (double c : kinetic_coeff_) spectral_bound_ += 4.0 * c;
  for (const auto& c : couplings_)
    spectral_bound_ += c.values.cwiseAbs().maxCoeff() * max_in_degree(c.to, strings.size());
}

void ExtendedHamiltonian::apply_kinetic(const Complex* in, Complex* out) const {
  const std::int64_t space = layout_.space();
  for (std::int64_t s = 0; s < space; ++s) out[s] = 0.0;
  for (std::size_t dim = 0; dim < strides_.size(); ++dim) {
    const std::int64_t st = strides_[dim];
    const int ext = extents_[dim];
    const double c = kinetic_coeff_[dim];
    for (std::int64_t s = 0; s < space; ++s) {
      const std::int64_t i = (s / st) % ext;
      Complex acc = 2.0 * in[s];
      if (i > 0) acc -= in[s - st];
      if (i + 1 < ext) acc -= in[s + st];
      out[s] += c * acc;
    }
  }
}

void ExtendedHamiltonian::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  if (in.size() != layout_.size()) throw std::invalid_argument("state dimension mismatch");
  out.resize(in.size());
  const std::int64_t space = layout_.space();
  for (int l = 0; l < layout_.labels; ++l) {
    for (std::int64_t q = 0; q < layout_.strings(); ++q) {
      const std::int64_t off = layout_.offset(l, q);
      apply_kinetic(in.data() + off, out.data() + off);
    }
  }
  for (const auto& c : couplings_) {
    for (int l = 0; l < layout_.labels; ++l) {
      const auto& to = c.to[l];
      for (std::int64_t q = 0; q < layout_.strings(); ++q) {
        if (to[q] < 0) continue;
        out.segment(layout_.offset(l, to[q]), space).array() +=
            c.values.array() * in.segment(layout_.offset(l, q), space).array();
      }
    }
  }
}

Eigen::MatrixXcd ExtendedHamiltonian::to_dense() const {
  const std::int64_t n = layout_.size();
  if (n > 8192) throw std::length_error("state too large for a dense matrix");
  Eigen::MatrixXcd h(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n), col;
  for (std::int64_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e, col);
    h.col(j) = col;
    e[j] = 0.0;
  }
  return h;
}

IndexedWaveFunction apply_extended_hamiltonian(const IndexedWaveFunction& state,
                                               const ExtendedHamiltonian& hamiltonian) {
  if (!(state.layout() == hamiltonian.layout())) throw std::invalid_argument("state dimension mismatch");
  IndexedWaveFunction out(state.layout());
  hamiltonian.apply(state.data(), out.data());
  return out;
}

IndexedWaveFunction apply_extended_hamiltonian(const IndexedWaveFunction& state,
                                               const LatticeConfig& config,
                                               const PairPotential& potential,
                                               const MCoupling& coupling) {
  return apply_extended_hamiltonian(
      state, ExtendedHamiltonian(StateLayout::make(config, coupling), potential, coupling));
}

}  // namespace intricacy
