#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sixdma/centralized.hpp"
#include "sixdma/coordination.hpp"

namespace sixdma {

// The benchmark schemes. "Fixed" rotations always mean the uniformly spaced
// initial configuration.
enum class Scheme {
  Proposed,        // IPC coordination + rotation optimization (distributed)
  RotationOnly,    // local WMMSE without IPC, rotations optimized
  IpcOnly,         // IPC coordination, rotations fixed
  Centralized,     // SAA + global PSO upper bound
  CentralizedFpa,  // centralized precoding, rotations fixed
  Fpa,             // local WMMSE without IPC, rotations fixed
  FixedIpc,        // constant IPC thresholds, rotations optimized
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct SchemeOptions {
  Scheme scheme = Scheme::Proposed;
  AoOptions ao;
  CentralizedOptions central;
  double sigma_const = 1e-8;  // FixedIpc threshold value
};

struct SummaryRow {
  int iteration = 0;
  double surrogate_sum = 0.0;
  double actual_sum = 0.0;
  std::vector<double> cell_actual, cell_surrogate;
  long messages = 0, scalars = 0;
};

struct SchemeResult {
  std::vector<SummaryRow> rows;
  double final_actual = 0.0;  // network weighted sum-rate on the shared eval set
  bool is_centralized = false;
  CoordinationTrace trace;              // AO-style schemes
  CentralizedResult central;            // centralized schemes
  std::vector<BsRotation> final_rotations;
  std::vector<double> per_bs_iteration_seconds;  // one entry per (t, cell)
};

SchemeResult run_scheme(const NetworkScenario& scenario, const SchemeOptions& opts,
                        std::uint64_t seed);

}  // namespace sixdma
