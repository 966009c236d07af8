#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "sixdma/channel.hpp"
#include "sixdma/geometry.hpp"

namespace sixdma {

// Undirected cell-adjacency graph over cells {0..M-1}.
struct AdjacencyGraph {
  int num_vertices = 0;
  std::vector<std::pair<int, int>> edges;   // stored with first < second
  std::vector<std::vector<int>> neighbors;  // sorted ascending

  static AdjacencyGraph from_edges(int num_vertices, std::vector<std::pair<int, int>> edges);
  bool adjacent(int m, int n) const;
};

// Static network description: geometry, per-cell user layout, powers and
// propagation constants. Everything random (regular-user positions, fading)
// is drawn later per channel sample; edge users are pinned here.
struct NetworkScenario {
  struct User {
    int cell = 0;
    double weight = 1.0;
    bool edge = false;               // fixed local position if true
    Eigen::Vector2d local_xy{0, 0};  // used only for edge users
  };

  std::string name;
  double wavelength = 0.125;       // meters
  double path_loss_exponent = 3.5;
  double p_max = 100.0;            // watts per BS
  double noise_power = 1e-11;      // watts
  double annulus_inner = 70.0;     // regular-user radii, meters
  double annulus_outer = 90.0;
  double user_height = 0.0;
  int surfaces_per_bs = 3;

  std::vector<Eigen::Vector3d> bs_positions;
  AdjacencyGraph graph;
  GeometryConfig geometry;
  GainPattern pattern;
  std::vector<User> users;

  int num_cells() const { return static_cast<int>(bs_positions.size()); }
  int num_users() const { return static_cast<int>(users.size()); }
  int antennas_per_bs() const { return surfaces_per_bs * geometry.num_antennas(); }
  std::vector<int> cell_users(int m) const;
  // True if the pair (BS m, user k) participates in the SINR or IPC terms:
  // in-cell, or k served by a neighbor of m.
  bool relevant(int m, int k) const;

  // Throws std::invalid_argument on structural problems.
  void validate() const;

  std::string to_json() const;
  static NetworkScenario from_json(const std::string& text);
  static NetworkScenario load(const std::string& path);
  void save(const std::string& path) const;
};

// The two three-cell layouts ("high_ici", "medium_ici"): M=3, B=3, N=4,
// complete adjacency, six users per cell with fixed edge users.
NetworkScenario build_setup(const std::string& name);

// Triangular-lattice layouts for M in {3, 6, 10, 15}: 400 m edges, six
// regular users per cell, no edge users, nearest-neighbor adjacency.
NetworkScenario build_lattice(int num_cells);

}  // namespace sixdma
