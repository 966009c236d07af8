#include "sixdma/longterm.hpp"

#include <cmath>
#include <stdexcept>

#include "sixdma/parallel.hpp"
#include "sixdma/rng.hpp"

namespace sixdma {

SaaContext SaaContext::make(const NetworkScenario& scenario, int cell, int num_samples,
                            std::uint64_t channel_seed, const SolverOptions& solver,
                            bool use_ipc) {
  SaaContext ctx;
  ctx.scenario = &scenario;
  ctx.cell = cell;
  ctx.channel_seed = channel_seed;
  ctx.solver = solver;
  ctx.use_ipc = use_ipc;
  ctx.sample_indices.resize(num_samples);
  for (int s = 0; s < num_samples; ++s) ctx.sample_indices[s] = s;
  ctx.draws.reserve(num_samples);
  for (int s : ctx.sample_indices) {
    ctx.draws.push_back(draw_positions_and_fading(scenario, s, channel_seed));
  }
  return ctx;
}

CellProblem cell_problem_for_sample(const SaaContext& ctx, const BsRotation& z_m,
                                    const IpcThresholds& sigma, int slot) {
  const NetworkScenario& sc = *ctx.scenario;
  const CellChannels cc = assemble_cell_channels(sc, z_m, ctx.cell, ctx.draws[slot]);
  CellProblem pb;
  pb.channels = cc.in_cell;
  pb.weights = cc.weights;
  pb.p_max = sc.p_max;
  if (ctx.use_ipc) {
    pb.victims = cc.victims;
    pb.ipc_limits.resize(static_cast<int>(cc.victim_cells.size()));
    for (std::size_t q = 0; q < cc.victim_cells.size(); ++q) {
      pb.ipc_limits(static_cast<int>(q)) = sigma.get(ctx.cell, cc.victim_cells[q]);
    }
    pb.c_const = sc.noise_power + sigma.incoming_sum(ctx.cell);
  } else {
    pb.victims = Eigen::MatrixXcd(cc.in_cell.rows(), 0);
    pb.ipc_limits = Eigen::VectorXd(0);
    pb.c_const = sc.noise_power;
  }
  return pb;
}

std::vector<double> saa_cell_rate_samples(const BsRotation& z_m, const IpcThresholds& sigma,
                                          const SaaContext& ctx) {
  std::vector<double> values(ctx.draws.size());
  parallel_for(static_cast<int>(ctx.draws.size()), [&](int s) {
    const CellProblem pb = cell_problem_for_sample(ctx, z_m, sigma, s);
    values[s] = solve_p4(pb, ctx.solver).weighted_sum;
  });
  return values;
}

double saa_cell_rate(const BsRotation& z_m, const IpcThresholds& sigma, const SaaContext& ctx) {
  const auto values = saa_cell_rate_samples(z_m, sigma, ctx);
  double total = 0.0;
  for (double v : values) total += v;  // fixed reduction order
  return total / static_cast<double>(values.size());
}

Eigen::VectorXd encode_rotation(const BsRotation& z) {
  Eigen::VectorXd x(2 * z.size());
  for (int b = 0; b < z.size(); ++b) {
    x(2 * b) = z.surfaces[b].azimuth;
    x(2 * b + 1) = z.surfaces[b].tilt;
  }
  return x;
}

BsRotation decode_rotation(const Eigen::VectorXd& x) {
  BsRotation z;
  z.surfaces.reserve(x.size() / 2);
  for (int b = 0; 2 * b + 1 < x.size(); ++b) {
    z.surfaces.emplace_back(x(2 * b), x(2 * b + 1));
  }
  return z;
}

std::vector<PsoDimension> rotation_dimensions(int num_surfaces, const GeometryConfig& cfg) {
  std::vector<PsoDimension> dims;
  dims.reserve(2 * num_surfaces);
  for (int b = 0; b < num_surfaces; ++b) {
    dims.push_back({true, 0.0, kTwoPi});                  // azimuth, periodic
    dims.push_back({false, cfg.tilt_min, cfg.tilt_max});  // tilt, reflected
  }
  return dims;
}

BsRotation rotation_update(const BsRotation& z_current, const IpcThresholds& sigma,
                           const SaaContext& ctx, const PsoParams& params, std::uint64_t seed,
                           double* rhat_before, double* rhat_after) {
  const NetworkScenario& sc = *ctx.scenario;
  if (rotation_penalty(z_current, sc.geometry) != 0.0) {
    throw std::invalid_argument("rotation_update: warm start must be feasible");
  }
  const int s_count = static_cast<int>(ctx.draws.size());
  const auto dims = rotation_dimensions(z_current.size(), sc.geometry);

  auto penalty_of = [&](const Eigen::VectorXd& x) {
    return rotation_penalty(decode_rotation(x), sc.geometry);
  };
  // One batch = swarm_size points x S samples, flattened for the worker pool.
  auto batch = [&](const std::vector<Eigen::VectorXd>& points) {
    std::vector<BsRotation> rotations(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) rotations[p] = decode_rotation(points[p]);
    std::vector<double> cell_rates(points.size() * s_count);
    parallel_for(static_cast<int>(cell_rates.size()), [&](int idx) {
      const int p = idx / s_count;
      const int s = idx % s_count;
      const CellProblem pb = cell_problem_for_sample(ctx, rotations[p], sigma, s);
      cell_rates[idx] = solve_p4(pb, ctx.solver).weighted_sum;
    });
    std::vector<double> values(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
      double mean = 0.0;
      for (int s = 0; s < s_count; ++s) mean += cell_rates[p * s_count + s];
      mean /= s_count;
      values[p] = -mean + params.kappa * penalty_of(points[p]);
    }
    return values;
  };

  const Eigen::VectorXd warm = encode_rotation(z_current);
  const PsoResult res = pso_minimize(batch, penalty_of, dims, warm, params,
                                     StreamRng::derive(seed, stream_tag::kRotation));
  if (rhat_before) *rhat_before = saa_cell_rate(z_current, sigma, ctx);
  if (rhat_after) *rhat_after = -res.best_value;  // feasible best has zero penalty
  return decode_rotation(res.best_point);
}

}  // namespace sixdma
