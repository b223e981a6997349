#include "intricacy/indexed_state.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "intricacy/errors.hpp"

namespace intricacy {

std::vector<GaussianPacket> LatticeConfig::resolved_packets() const {
  if (!packets.empty()) return packets;
  std::vector<GaussianPacket> out;
  for (int n = 0; n < n_atoms; ++n) {
    const double center = box_length * (n + 1) / (n_atoms + 1);
    const double p = (n % 2 == 0) ? packet_momentum : -packet_momentum;
    out.push_back({center, packet_width, p});
  }
  return out;
}

void LatticeConfig::validate() const {
  if (n_atoms < 2 || n_atoms > 4) throw ConfigError("indexed.n_atoms must be in [2, 4]");
  if (channels < 1) throw ConfigError("indexed.channels must be >= 1");
  if (grid_points < 8) throw ConfigError("indexed.grid_points must be >= 8");
  if (!(box_length > 0)) throw ConfigError("indexed.box_length must be positive");
  if (!(dt > 0)) throw ConfigError("indexed.dt must be positive");
  if (!(t_end >= 0)) throw ConfigError("indexed.t_end must be non-negative");
  if (!packets.empty() && static_cast<int>(packets.size()) != n_atoms)
    throw ConfigError("one packet per atom required");
  for (const auto& p : resolved_packets()) {
    if (!(p.width > 0)) throw ConfigError("packet width must be positive");
    if (p.center <= 0 || p.center >= box_length) throw ConfigError("packet center outside box");
  }
  if (!initial_string.empty()) {
    if (static_cast<int>(initial_string.size()) != n_atoms)
      throw ConfigError("indexed.initial_string length must equal n_atoms");
    for (int v : initial_string)
      if (v < 0 || v > channels) throw ConfigError("indexed.initial_string index out of range");
  }
}

void MCoupling::validate(int channels) const {
  if (!present) return;
  if (grid_points < 8) throw ConfigError("M grid_points must be >= 8");
  if (!(mass > 0)) throw ConfigError("M mass must be positive");
  if (!(range > 0)) throw ConfigError("M coupling range must be positive");
  if (static_cast<int>(channel_weights.size()) != channels)
    throw ConfigError("need one channel weight per channel");
  double total = 0.0;
  for (const auto& c : channel_weights) total += std::norm(c);
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("channel weights must have unit norm");
}

StateLayout StateLayout::make(const LatticeConfig& config, const MCoupling& coupling) {
  config.validate();
  coupling.validate(config.channels);
  StateLayout layout;
  layout.n_atoms = config.n_atoms;
  layout.channels = config.channels;
  layout.grid_points = config.grid_points;
  layout.spacing = config.spacing();
  layout.has_m = coupling.present;
  if (coupling.present) {
    layout.m_points = coupling.grid_points;
    layout.labels = config.channels;
    layout.m_spacing = config.box_length / (coupling.grid_points + 1);
  }
  // Overflow-safe size check.
  long double entries = static_cast<long double>(layout.labels) * layout.m_points;
  for (int n = 0; n < config.n_atoms; ++n) entries *= (config.channels + 1) * config.grid_points;
  if (entries > static_cast<long double>(LatticeConfig::kMaxStateEntries))
    throw ConfigError("indexed state exceeds memory cap of " +
                      std::to_string(LatticeConfig::kMaxStateEntries) + " complex entries");
  return layout;
}

std::int64_t StateLayout::atom_space() const {
  std::int64_t s = 1;
  for (int n = 0; n < n_atoms; ++n) s *= grid_points;
  return s;
}

double StateLayout::cell_volume() const {
  double v = std::pow(spacing, n_atoms);
  if (has_m) v *= m_spacing;
  return v;
}

double IndexedWaveFunction::string_weight(std::int64_t string) const {
  double w = 0.0;
  for (int l = 0; l < layout_.labels; ++l) w += block(l, string).squaredNorm();
  return w * layout_.cell_volume();
}

namespace {

// Symmetrized product sum_perm prod_n phi_perm(n)(x_n) on the atom grid.
Eigen::VectorXcd symmetrized_product(const LatticeConfig& config,
                                     const std::vector<GaussianPacket>& packets) {
  const int n_atoms = config.n_atoms;
  const int g = config.grid_points;
  std::vector<Eigen::VectorXcd> phi;
  for (const auto& p : packets) {
    Eigen::VectorXcd v(g);
    for (int i = 0; i < g; ++i) v[i] = p(config.node(i));
    phi.push_back(std::move(v));
  }
  std::int64_t size = 1;
  for (int n = 0; n < n_atoms; ++n) size *= g;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(size);
  std::vector<int> perm(n_atoms);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> idx(n_atoms);
  do {
    for (std::int64_t s = 0; s < size; ++s) {
      std::int64_t r = s;
      for (int n = n_atoms - 1; n >= 0; --n) {
        idx[n] = static_cast<int>(r % g);
        r /= g;
      }
      Complex term = 1.0;
      for (int n = 0; n < n_atoms; ++n) term *= phi[perm[n]][idx[n]];
      psi[s] += term;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Reject packet sets whose symmetrization (nearly) cancels.
  double product_norm = 1.0, factorial = 1.0;
  for (int n = 0; n < n_atoms; ++n) {
    product_norm *= phi[n].squaredNorm();
    factorial *= n + 1;
  }
  if (psi.squaredNorm() < 1e-8 * factorial * product_norm)
    throw ConfigError("overlapping packets: symmetrized state has vanishing norm");
  return psi;
}

}  // namespace

IndexedWaveFunction init_state(const LatticeConfig& config, const MCoupling& coupling) {
  const StateLayout layout = StateLayout::make(config, coupling);
  IndexedWaveFunction state(layout);

  const Eigen::VectorXcd psi = symmetrized_product(config, config.resolved_packets());
  Eigen::VectorXcd chi = Eigen::VectorXcd::Ones(1);
  if (layout.has_m) {
    chi.resize(layout.m_points);
    for (int i = 0; i < layout.m_points; ++i) chi[i] = coupling.packet((i + 1) * layout.m_spacing);
  }

  const StringSpace strings = layout.string_space();
  const std::int64_t initial =
      config.initial_string.empty() ? 0 : strings.encode(config.initial_string);
  for (int l = 0; l < layout.labels; ++l) {
    const Complex weight = layout.has_m ? coupling.channel_weights[l] : Complex(1.0);
    auto target = state.block(l, initial);
    for (std::int64_t s = 0; s < psi.size(); ++s)
      target.segment(s * layout.m_points, layout.m_points) = weight * psi[s] * chi;
  }
  const double norm = physical_norm(layout, project_physical(state));
  state.data() /= norm;
  return state;
}

Eigen::VectorXcd project_physical(const IndexedWaveFunction& state) {
  const StateLayout& layout = state.layout();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(layout.labels * layout.space());
  for (int l = 0; l < layout.labels; ++l) {
    auto dst = out.segment(l * layout.space(), layout.space());
    for (std::int64_t q = 0; q < layout.strings(); ++q) dst += state.block(l, q);
  }
  return out;
}

double physical_norm(const StateLayout& layout, const Eigen::VectorXcd& psi) {
  return std::sqrt(layout.cell_volume()) * psi.norm();
}

IndexedWaveFunction apply_projection_A(const IndexedWaveFunction& state, int target_channel) {
  const StateLayout& layout = state.layout();
  const auto ops = build_atom_operators(ChannelCount(layout.channels));
  IndexedWaveFunction out(layout);
  for (int l = 0; l < layout.labels; ++l) {
    const int channel = layout.has_m ? layout.label_channel(l) : target_channel;
    const std::vector<int> map = to_index_map(build_projection_A(ops, layout.n_atoms, channel));
    for (std::int64_t q = 0; q < layout.strings(); ++q) {
      if (map[q] < 0) continue;
      out.block(l, map[q]) += state.block(l, q);
    }
  }
  return out;
}

IntricacyMeasures intricacy_measures(const IndexedWaveFunction& state, int atom, int channel) {
  const StateLayout& layout = state.layout();
  if (atom < 0 || atom >= layout.n_atoms) throw std::out_of_range("atom index out of range");
  if (channel < 1 || channel > layout.channels) throw std::out_of_range("channel out of range");
  const StringSpace strings = layout.string_space();
  const std::int64_t width = layout.labels * layout.space();
  Eigen::VectorXcd intricate = Eigen::VectorXcd::Zero(width);
  Eigen::VectorXcd rest = Eigen::VectorXcd::Zero(width);
  for (int l = 0; l < layout.labels; ++l) {
    for (std::int64_t q = 0; q < layout.strings(); ++q) {
      auto& sum = strings.digit(q, atom) == channel ? intricate : rest;
      sum.segment(l * layout.space(), layout.space()) += state.block(l, q);
    }
  }
  const double total = (intricate + rest).squaredNorm();
  IntricacyMeasures m;
  m.phys_norm = std::sqrt(total * layout.cell_volume());
  if (total == 0.0) return m;
  m.p1 = intricate.squaredNorm() / total;
  m.p0 = rest.squaredNorm() / total;
  m.interference = 2.0 * rest.dot(intricate).real() / total;
  return m;
}

}  // namespace intricacy
