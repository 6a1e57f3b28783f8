#pragma once

// Maximal epsilon-sparse nets over a finite sample, and their partition into
// bins whose members are pairwise at least R apart.

#include "hypext/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hypext {

/// Indices (into `sample`) chosen by the greedy rule: a point joins the net
/// unless it is strictly within `epsilon` of an earlier net point.
std::vector<std::size_t> greedy_net_indices(std::span<const HPoint> sample, double epsilon);
std::vector<HPoint> greedy_net(std::span<const HPoint> sample, double epsilon);

struct BinAssignment {
  std::vector<int> bin_of;
  int num_bins = 0;
};

/// First-fit coloring: each center takes the lowest bin with no earlier
/// center at distance < R.
BinAssignment assign_bins(std::span<const HPoint> centers, double R);

double hyperbolic_ball_volume(int m, double radius);
double euclidean_ball_volume(int m, double radius);

/// ceil(Vol_H(B(R + eps/2)) / Vol_E(B(eps/2))), saturating at UINT64_MAX.
std::uint64_t volume_bound_N(int m, double R, double epsilon);

struct Net {
  std::vector<HPoint> centers;
  std::vector<std::size_t> center_indices;  // into the sample
  double epsilon = 0.0;
  double R = 0.0;
  std::vector<int> bin_of;
  int num_bins = 0;
  std::uint64_t theoretical_N = 0;

  /// Center indices (into `centers`) grouped by bin.
  std::vector<std::vector<std::size_t>> bins() const;
};

Net build_net(std::span<const HPoint> sample, double epsilon, double R);

}  // namespace hypext
