#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "sixdma/scenario.hpp"

namespace sixdma {

// Rotation-independent part of one Monte Carlo draw: user positions and the
// complex path coefficients xi for every relevant (BS, user) pair. Streams
// are keyed by (seed, sample_index, user) for positions and
// (seed, sample_index, bs, user) for fading, so re-evaluating under a
// different rotation reuses bit-identical draws.
struct SampleDraws {
  int sample_index = 0;
  std::uint64_t seed = 0;
  std::vector<Eigen::Vector3d> user_positions;              // global frame
  std::vector<std::vector<std::complex<double>>> xi;        // [M][K], relevant pairs
  std::vector<std::vector<bool>> has_pair;                  // [M][K]
};

SampleDraws draw_positions_and_fading(const NetworkScenario& scenario, int sample_index,
                                      std::uint64_t seed);

// One full channel realization: stacked channel vectors for every relevant
// (BS, user) pair under the given rotations.
struct ChannelSample {
  int sample_index = 0;
  std::uint64_t seed = 0;
  std::vector<Eigen::Vector3d> user_positions;
  std::vector<std::vector<Eigen::VectorXcd>> h;  // [M][K]; empty when irrelevant

  bool relevant(int m, int k) const { return h[m][k].size() != 0; }
  std::string to_json() const;  // self-describing dump for golden tests
};

ChannelSample assemble_sample(const NetworkScenario& scenario,
                              const std::vector<BsRotation>& rotations,
                              const SampleDraws& draws);

ChannelSample draw_sample(const NetworkScenario& scenario,
                          const std::vector<BsRotation>& rotations, int sample_index,
                          std::uint64_t seed);

// Channels seen by one cell's short-term problem: in-cell columns plus the
// victim columns toward adjacent cells' users, flattened in lexicographic
// (neighbor cell ascending, user index ascending) order.
struct CellChannels {
  Eigen::MatrixXcd in_cell;          // NB x K_m
  Eigen::VectorXd weights;           // K_m
  std::vector<int> in_cell_users;    // global user ids
  Eigen::MatrixXcd victims;          // NB x Q_m
  std::vector<int> victim_users;     // global user ids, one per column
  std::vector<int> victim_cells;     // serving cell per column
};

CellChannels assemble_cell_channels(const NetworkScenario& scenario, const BsRotation& z_m,
                                    int cell, const SampleDraws& draws);

}  // namespace sixdma
