#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "intricacy/algebra.hpp"
#include "intricacy/lattice.hpp"

namespace intricacy {

/// Memory layout of an indexed wave function.
///
/// data[((label * strings + q) * space) + s], where s runs over the atom
/// grid (atom 0 slowest) followed by the M coordinate (fastest). Labels are
/// the internal states of M (one per channel when M is present, otherwise a
/// single dummy label).
struct StateLayout {
  int n_atoms = 0;
  int channels = 1;
  int grid_points = 0;
  int m_points = 1;
  int labels = 1;
  bool has_m = false;
  double spacing = 0.0;
  double m_spacing = 0.0;

  static StateLayout make(const LatticeConfig& config, const MCoupling& coupling);

  StringSpace string_space() const { return StringSpace(ChannelCount(channels), n_atoms); }
  std::int64_t strings() const { return string_space().size(); }
  std::int64_t atom_space() const;
  std::int64_t space() const { return atom_space() * m_points; }
  std::int64_t size() const { return labels * strings() * space(); }
  std::int64_t offset(int label, std::int64_t string) const {
    return (label * strings() + string) * space();
  }
  /// Channel raised by the coupling for this label (0 without M).
  int label_channel(int label) const { return has_m ? label + 1 : 0; }
  double cell_volume() const;

  friend bool operator==(const StateLayout&, const StateLayout&) = default;
};

class IndexedWaveFunction {
 public:
  explicit IndexedWaveFunction(StateLayout layout)
      : layout_(layout), data_(Eigen::VectorXcd::Zero(layout.size())) {}

  const StateLayout& layout() const { return layout_; }
  Eigen::VectorXcd& data() { return data_; }
  const Eigen::VectorXcd& data() const { return data_; }

  auto block(int label, std::int64_t string) {
    return data_.segment(layout_.offset(label, string), layout_.space());
  }
  auto block(int label, std::int64_t string) const {
    return data_.segment(layout_.offset(label, string), layout_.space());
  }

  /// Squared norm of one string's amplitudes summed over labels.
  double string_weight(std::int64_t string) const;

 private:
  StateLayout layout_;
  Eigen::VectorXcd data_;
};

/// Product state psi({x}) chi(y) on the initial string, psi a symmetrized
/// product of the configured Gaussian packets, normalized to one.
IndexedWaveFunction init_state(const LatticeConfig& config, const MCoupling& coupling);

/// psi = sum_q psi_q, as a vector over (label, space).
Eigen::VectorXcd project_physical(const IndexedWaveFunction& state);

/// Discrete L2 norm of a physical-space vector (cell-volume weighted).
double physical_norm(const StateLayout& layout, const Eigen::VectorXcd& psi);

/// Applies prod_n (P_j + S_j P_0) to the string index. Without M, j is
/// target_channel; with M, each label uses its own channel.
IndexedWaveFunction apply_projection_A(const IndexedWaveFunction& state, int target_channel = 1);

struct IntricacyMeasures {
  double p1 = 0.0;
  double p0 = 0.0;
  double interference = 0.0;
  double phys_norm = 0.0;
};

/// p1 = ||sum of strings with atom index == channel||^2, p0 the same for the
/// complementary strings (index 0 when k = 1), interference the cross term
/// 2 Re <sum0|sum1>. All three are divided by the physical norm squared so
/// p1 + p0 + interference = 1 up to round-off.
IntricacyMeasures intricacy_measures(const IndexedWaveFunction& state, int atom, int channel);

}  // namespace intricacy
