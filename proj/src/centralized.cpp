#include "sixdma/centralized.hpp"

#include <chrono>
#include <cmath>

#include "sixdma/geometry.hpp"
#include "sixdma/longterm.hpp"
#include "sixdma/parallel.hpp"
#include "sixdma/rng.hpp"

namespace sixdma {

double sample_value(const NetworkScenario& scenario, const std::vector<BsRotation>& z,
                    const SampleDraws& draws, const SolverOptions& solver) {
  const ChannelSample sample = assemble_sample(scenario, z, draws);
  return solve_network_wsr(scenario, sample, solver).weighted_sum;
}

double saa_objective(const NetworkScenario& scenario, const std::vector<BsRotation>& z,
                     const std::vector<SampleDraws>& draws, const SolverOptions& solver) {
  std::vector<double> values(draws.size());
  parallel_for(static_cast<int>(draws.size()), [&](int s) {
    values[s] = sample_value(scenario, z, draws[s], solver);
  });
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(draws.size());
}

namespace {

std::vector<BsRotation> decode_all(const Eigen::VectorXd& x, int m_cells, int b_surfaces) {
  std::vector<BsRotation> z(m_cells);
  for (int m = 0; m < m_cells; ++m) {
    z[m] = decode_rotation(x.segment(2 * b_surfaces * m, 2 * b_surfaces));
  }
  return z;
}

}  // namespace

CentralizedResult centralized_search(const NetworkScenario& scenario,
                                     const std::vector<BsRotation>& z0,
                                     const CentralizedOptions& opts, std::uint64_t seed) {
  const int m_cells = scenario.num_cells();
  const int b_surfaces = scenario.surfaces_per_bs;
  const std::uint64_t channel_seed = seed;

  std::vector<SampleDraws> draws;
  draws.reserve(opts.saa_samples);
  for (int s = 0; s < opts.saa_samples; ++s) {
    draws.push_back(draw_positions_and_fading(scenario, s, channel_seed));
  }

  CentralizedResult res;
  if (opts.pso.max_iters <= 0) {
    // Degenerate budget: keep the initial rotations (fixed-rotation variant).
    const auto t0 = std::chrono::steady_clock::now();
    res.rotations = z0;
    res.jhat = saa_objective(scenario, z0, draws, opts.solver);
    res.trace = {-res.jhat};
    res.evaluations = 1;
    res.eval_seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return res;
  }

  std::vector<PsoDimension> dims;
  for (int m = 0; m < m_cells; ++m) {
    const auto cell_dims = rotation_dimensions(b_surfaces, scenario.geometry);
    dims.insert(dims.end(), cell_dims.begin(), cell_dims.end());
  }
  Eigen::VectorXd warm(2 * b_surfaces * m_cells);
  for (int m = 0; m < m_cells; ++m) {
    warm.segment(2 * b_surfaces * m, 2 * b_surfaces) = encode_rotation(z0[m]);
  }

  auto penalty_of = [&](const Eigen::VectorXd& x) {
    double p = 0.0;
    for (const auto& zm : decode_all(x, m_cells, b_surfaces)) {
      p += rotation_penalty(zm, scenario.geometry);
    }
    return p;
  };

  const int s_count = static_cast<int>(draws.size());
  auto batch = [&](const std::vector<Eigen::VectorXd>& points) {
    std::vector<std::vector<BsRotation>> zs(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      zs[p] = decode_all(points[p], m_cells, b_surfaces);
    }
    std::vector<double> values(points.size() * s_count);
    std::vector<double> task_seconds(points.size() * s_count);
    parallel_for(static_cast<int>(values.size()), [&](int idx) {
      const auto t0 = std::chrono::steady_clock::now();
      values[idx] = sample_value(scenario, zs[idx / s_count], draws[idx % s_count], opts.solver);
      task_seconds[idx] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    std::vector<double> out(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      double mean = 0.0, secs = 0.0;
      for (int s = 0; s < s_count; ++s) {
        mean += values[p * s_count + s];
        secs += task_seconds[p * s_count + s];
      }
      mean /= s_count;
      out[p] = -mean + opts.kappa * penalty_of(points[p]);
      res.eval_seconds.push_back(secs);
      res.evaluations += 1;
    }
    return out;
  };

  const PsoResult pso = pso_minimize(batch, penalty_of, dims, warm, opts.pso,
                                     StreamRng::derive(seed, stream_tag::kCentralized));
  res.rotations = decode_all(pso.best_point, m_cells, b_surfaces);
  res.jhat = -pso.best_value;  // best feasible particle carries zero penalty
  res.trace = pso.trace;
  return res;
}

}  // namespace sixdma
