#include <cmath>
#include <sstream>

#include "sixdma/harness.hpp"
#include "sixdma/rng.hpp"

namespace sixdma {

namespace {

BsRotation random_rotation(StreamRng& rng, int surfaces, const GeometryConfig& cfg) {
  BsRotation z;
  for (int b = 0; b < surfaces; ++b) {
    z.surfaces.emplace_back(rng.uniform(0.0, kTwoPi), rng.uniform(cfg.tilt_min, cfg.tilt_max));
  }
  return z;
}

}  // namespace

std::vector<CheckResult> self_test() {
  std::vector<CheckResult> out;
  auto check = [&](const std::string& name, bool pass, const std::string& detail = "") {
    out.push_back({name, pass, detail});
  };
  StreamRng rng(20240601);
  GeometryConfig geo;
  geo.local_antenna_offsets = {{0, 0.03125, 0.03125},
                               {0, 0.03125, -0.03125},
                               {0, -0.03125, 0.03125},
                               {0, -0.03125, -0.03125}};

  {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const SurfaceRotation z(rng.uniform(-10, 10), rng.uniform(-1, 2));
      const Eigen::Matrix3d r = rotation_matrix(z);
      worst = std::max(worst, (r.transpose() * r - Eigen::Matrix3d::Identity()).norm());
      worst = std::max(worst, std::abs(r.determinant() - 1.0));
    }
    check("rotation_matrix_orthonormal", worst <= 1e-12, "worst=" + std::to_string(worst));
  }
  {
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10), c = rng.uniform(-10, 10);
      const double dab = circular_distance(a, b);
      ok = ok && std::abs(dab - circular_distance(b, a)) < 1e-12 && dab <= M_PI + 1e-12 &&
           dab <= circular_distance(a, c) + circular_distance(c, b) + 1e-9;
    }
    check("circular_distance_metric", ok);
  }
  {
    GainPattern pat;
    bool ok = true;
    const double lo = std::pow(10.0, (pat.max_gain_dbi - pat.front_back_db) / 10.0);
    const double hi = std::pow(10.0, pat.max_gain_dbi / 10.0);
    for (int i = 0; i < 500 && ok; ++i) {
      Eigen::Vector3d dir(rng.normal_pair().first, rng.normal_pair().first,
                          rng.normal_pair().first);
      if (dir.norm() < 1e-6) continue;
      dir.normalize();
      const double g = element_gain(dir, pat);
      ok = g >= lo - 1e-15 && g <= hi + 1e-12;
    }
    check("element_gain_bounds", ok);
  }
  {
    GainPattern pat;
    bool ok = true;
    for (int i = 0; i < 200 && ok; ++i) {
      const BsRotation z = random_rotation(rng, 3, geo);
      Eigen::Vector3d dir(rng.normal_pair().first, rng.normal_pair().first,
                          rng.normal_pair().first);
      if (dir.norm() < 1e-6) continue;
      dir.normalize();
      const std::complex<double> xi = rng.cnormal() * 1e-5;
      const Eigen::VectorXcd h = stacked_channel(z, {0, 0, 10}, 80.0 * dir + Eigen::Vector3d(0, 0, 10),
                                                 xi, geo, pat, 0.125);
      double expect = 0.0;
      for (const auto& s : z.surfaces) expect += 4.0 * effective_gain(s, dir, pat);
      expect *= std::norm(xi);
      ok = std::abs(h.squaredNorm() - expect) <= 1e-12 * std::max(1.0, expect);
    }
    check("channel_energy_identity", ok);
  }
  {
    const NetworkScenario sc = build_setup("high_ici");
    std::vector<BsRotation> z(3);
    for (auto& zm : z) zm = uniform_initial_rotation(3, sc.geometry);
    const ChannelSample a = draw_sample(sc, z, 0, 42);
    const ChannelSample b = draw_sample(sc, z, 0, 42);
    check("sample_determinism", a.to_json() == b.to_json());
  }
  {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < 5 && ok; ++i) {
      const int nb = 8, k = 4;
      Eigen::MatrixXcd h(nb, k);
      for (int c = 0; c < k; ++c) {
        for (int r = 0; r < nb; ++r) h(r, c) = rng.cnormal() * 1e-5;
      }
      SolverOptions opts;
      const CellSolveResult res = solve_p3(h, Eigen::VectorXd::Ones(k), 100.0, 1e-11, opts);
      for (std::size_t t = 1; t < res.diag.objective_trace.size(); ++t) {
        if (res.diag.objective_trace[t] < res.diag.objective_trace[t - 1] - 1e-9) {
          ok = false;
          detail = "instance " + std::to_string(i);
        }
      }
      ok = ok && res.transmit_power <= 100.0 * (1 + 1e-6);
    }
    check("wmmse_trace_monotone", ok, detail);
  }
  {
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
      const int m = 4 + static_cast<int>(rng.below(20));
      std::vector<std::pair<int, int>> edges;
      for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
          if (rng.uniform() < 0.3) edges.emplace_back(a, b);
        }
      }
      const AdjacencyGraph g = AdjacencyGraph::from_edges(m, edges);
      const auto matching = random_maximal_matching(g, rng.next_u64());
      std::vector<bool> used(m, false);
      for (auto [a, b] : matching) {
        if (used[a] || used[b]) ok = false;
        used[a] = used[b] = true;
      }
      for (auto [a, b] : g.edges) {
        if (!used[a] && !used[b]) ok = false;  // not maximal
      }
    }
    check("random_maximal_matching", ok);
  }
  {
    const auto c = ipc_candidates(1e-8, 7, 1e-9);
    bool ok = c.size() == 7 && std::abs(c.front() - 1e-9) < 1e-21 &&
              std::abs(c.back() - 1e-7) < 1e-19;
    const auto c2 = ipc_candidates(1e-10, 7, 1e-9);
    ok = ok && c2.size() == 2;
    check("ipc_candidate_grid", ok);
  }
  {
    // Micro end-to-end run with trace invariants.
    ExperimentConfig cfg;
    cfg.scenario_ref = "high_ici";
    cfg.scheme = Scheme::Proposed;
    cfg.saa_samples = 2;
    cfg.eval_samples = 2;
    cfg.t_max = 1;
    cfg.t_ipc = 2;
    cfg.t_pso = 3;
    cfg.n_sw = 4;
    const NetworkScenario sc = cfg.resolve_scenario();
    AoOptions ao = cfg.ao_options();
    const double sigma_init = std::max(sc.noise_power, ao.sigma_floor);
    std::vector<BsRotation> z0(sc.num_cells());
    for (auto& zm : z0) zm = uniform_initial_rotation(sc.surfaces_per_bs, sc.geometry);
    const AoResult res =
        ao_run(sc, z0, IpcThresholds(sc.graph, sigma_init, ao.sigma_floor), ao, 7);
    const auto checks =
        validate_trace(sc, res.trace, res.sigma, sigma_init, ao.eps_tol, ao.sigma_floor);
    for (const auto& c : checks) check("micro_ao_" + c.name, c.pass, c.detail);
  }
  return out;
}

}  // namespace sixdma
