#pragma once

#include <stdexcept>

#include "thermokin/types.hpp"

namespace thermokin {

/// Midpoint grid on the torus [-1/2, 1/2].  n_k must be even so that k = 0 and
/// k = +-1/2 fall on cell faces and are never sampled.  Midpoints are stored
/// mirror-symmetrically: midpoints[n_k-1-j] == -midpoints[j] bit for bit.
struct WavenumberGrid {
  int n_k = 0;
  double cell_width = 0.0;
  Vec midpoints;

  static WavenumberGrid make(int n_k) {
    if (n_k < 2 || n_k % 2 != 0)
      throw std::invalid_argument("WavenumberGrid: n_k must be even and >= 2");
    WavenumberGrid g;
    g.n_k = n_k;
    g.cell_width = 1.0 / n_k;
    g.midpoints.resize(n_k);
    for (int j = 0; j < n_k / 2; ++j) {
      g.midpoints[j] = -0.5 + (j + 0.5) * g.cell_width;
      g.midpoints[n_k - 1 - j] = -g.midpoints[j]; // mirror closure exact
    }
    return g;
  }

  int mirror_index(int j) const { return n_k - 1 - j; }
};

/// Uniform cell grid on [-L, L]; n_y even puts the interface y = 0 on a face.
struct SpatialGrid {
  int n_y = 0;
  double half_width = 0.0;
  double dy = 0.0;
  Vec centers;

  static SpatialGrid make(int n_y, double half_width) {
    if (n_y < 4 || n_y % 2 != 0)
      throw std::invalid_argument("SpatialGrid: n_y must be even and >= 4");
    if (!(half_width > 0.0))
      throw std::invalid_argument("SpatialGrid: half_width must be positive");
    SpatialGrid g;
    g.n_y = n_y;
    g.half_width = half_width;
    g.dy = 2.0 * half_width / n_y;
    g.centers.resize(n_y);
    for (int i = 0; i < n_y; ++i)
      g.centers[i] = -half_width + (i + 0.5) * g.dy;
    return g;
  }

  // cells adjacent to the interface face
  int left_of_interface() const { return n_y / 2 - 1; }
  int right_of_interface() const { return n_y / 2; }
};

} // namespace thermokin
