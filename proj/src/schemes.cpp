#include "sixdma/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "sixdma/parallel.hpp"
#include "sixdma/rng.hpp"

namespace sixdma {

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::RotationOnly: return "rotation-only";
    case Scheme::IpcOnly: return "ipc-only";
    case Scheme::Centralized: return "centralized";
    case Scheme::CentralizedFpa: return "centralized-fpa";
    case Scheme::Fpa: return "fpa";
    case Scheme::FixedIpc: return "fixed-ipc";
  }
  return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
  static const std::map<std::string, Scheme> table = {
      {"proposed", Scheme::Proposed},       {"rotation-only", Scheme::RotationOnly},
      {"ipc-only", Scheme::IpcOnly},        {"centralized", Scheme::Centralized},
      {"centralized-fpa", Scheme::CentralizedFpa}, {"fpa", Scheme::Fpa},
      {"fixed-ipc", Scheme::FixedIpc}};
  const auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown scheme: " + name);
  return it->second;
}

namespace {

std::vector<BsRotation> initial_rotations(const NetworkScenario& sc) {
  std::vector<BsRotation> z(sc.num_cells());
  for (auto& zm : z) zm = uniform_initial_rotation(sc.surfaces_per_bs, sc.geometry);
  return z;
}

// Mean network value of a rotation layout on the shared evaluation sample
// set, using the centralized short-term solver.
double eval_with_network_solver(const NetworkScenario& sc, const std::vector<BsRotation>& z,
                                int eval_samples, std::uint64_t eval_seed,
                                const SolverOptions& solver) {
  std::vector<double> values(eval_samples);
  parallel_for(eval_samples, [&](int s) {
    const SampleDraws draws = draw_positions_and_fading(sc, s, eval_seed);
    values[s] = sample_value(sc, z, draws, solver);
  });
  double total = 0.0;
  for (double v : values) total += v;
  return total / eval_samples;
}

SchemeResult run_ao_scheme(const NetworkScenario& sc, const SchemeOptions& opts,
                           std::uint64_t seed) {
  AoOptions ao = opts.ao;
  double sigma_init = std::max(sc.noise_power, ao.sigma_floor);
  switch (opts.scheme) {
    case Scheme::Proposed:
      break;
    case Scheme::RotationOnly:
      ao.coordinate_ipc = false;
      ao.use_ipc = false;
      break;
    case Scheme::IpcOnly:
      ao.optimize_rotation = false;
      break;
    case Scheme::Fpa:
      ao.coordinate_ipc = false;
      ao.optimize_rotation = false;
      ao.use_ipc = false;
      ao.t_max = 0;
      break;
    case Scheme::FixedIpc:
      ao.coordinate_ipc = false;
      ao.sigma_floor = std::min(ao.sigma_floor, opts.sigma_const);
      sigma_init = opts.sigma_const;
      break;
    default:
      throw std::invalid_argument("run_ao_scheme: not an AO scheme");
  }

  const IpcThresholds sigma0(sc.graph, sigma_init, ao.sigma_floor);
  AoResult ao_res = ao_run(sc, initial_rotations(sc), sigma0, ao, seed);

  SchemeResult out;
  out.final_rotations = ao_res.rotations;
  for (const auto& ev : ao_res.trace.evals) {
    SummaryRow row;
    row.iteration = ev.t;
    row.surrogate_sum = ev.surrogate_sum;
    row.actual_sum = ev.actual_sum;
    row.cell_actual = ev.cell_actual;
    row.cell_surrogate = ev.cell_surrogate;
    row.messages = ev.messages;
    row.scalars = ev.scalars;
    out.rows.push_back(row);
  }
  out.final_actual = out.rows.empty() ? 0.0 : out.rows.back().actual_sum;

  // Per-BS cost of one AO iteration: own rotation update plus half of every
  // pairwise search the BS participated in (each endpoint carries the same
  // candidate load under the parallel-evaluation model).
  for (int t = 0; t < ao.t_max; ++t) {
    for (int m = 0; m < sc.num_cells(); ++m) {
      double secs = 0.0;
      for (const auto& r : ao_res.trace.rotations) {
        if (r.t == t && r.cell == m) secs += r.wall_seconds;
      }
      for (const auto& p : ao_res.trace.pairwise) {
        if (p.t == t && (p.m == m || p.n == m)) secs += 0.5 * p.wall_seconds;
      }
      out.per_bs_iteration_seconds.push_back(secs);
    }
  }
  out.trace = std::move(ao_res.trace);
  return out;
}

SchemeResult run_centralized_scheme(const NetworkScenario& sc, const SchemeOptions& opts,
                                    std::uint64_t seed) {
  CentralizedOptions central = opts.central;
  if (opts.scheme == Scheme::CentralizedFpa) central.pso.max_iters = 0;

  SchemeResult out;
  out.is_centralized = true;
  out.central = centralized_search(sc, initial_rotations(sc), central, seed);
  out.final_rotations = out.central.rotations;

  // Rows mirror the swarm trace: running best SAA objective per iteration.
  for (std::size_t i = 0; i < out.central.trace.size(); ++i) {
    SummaryRow row;
    row.iteration = static_cast<int>(i);
    row.actual_sum = -out.central.trace[i];
    row.surrogate_sum = row.actual_sum;
    out.rows.push_back(row);
  }
  const std::uint64_t eval_seed = StreamRng::derive(seed, stream_tag::kEvaluation);
  out.final_actual = eval_with_network_solver(sc, out.central.rotations, opts.ao.eval_samples,
                                              eval_seed, central.solver);
  return out;
}

}  // namespace

SchemeResult run_scheme(const NetworkScenario& scenario, const SchemeOptions& opts,
                        std::uint64_t seed) {
  scenario.validate();
  if (opts.scheme == Scheme::Centralized || opts.scheme == Scheme::CentralizedFpa) {
    return run_centralized_scheme(scenario, opts, seed);
  }
  return run_ao_scheme(scenario, opts, seed);
}

}  // namespace sixdma
