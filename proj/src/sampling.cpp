#include "sixdma/sampling.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "sixdma/rng.hpp"

namespace sixdma {

namespace {

Eigen::Vector3d draw_user_position(const NetworkScenario& s, int k, int sample_index,
                                   std::uint64_t seed) {
  const auto& u = s.users[k];
  const Eigen::Vector3d& o = s.bs_positions[u.cell];
  Eigen::Vector2d local;
  if (u.edge) {
    local = u.local_xy;
  } else {
    auto rng = StreamRng::stream(seed, stream_tag::kUserPosition, sample_index, k);
    const double radius = rng.uniform(s.annulus_inner, s.annulus_outer);
    const double angle = kTwoPi * (1.0 - rng.uniform());  // (0, 2pi]
    local = radius * Eigen::Vector2d(std::cos(angle), std::sin(angle));
  }
  return {o.x() + local.x(), o.y() + local.y(), s.user_height};
}

}  // namespace

SampleDraws draw_positions_and_fading(const NetworkScenario& scenario, int sample_index,
                                      std::uint64_t seed) {
  const int m_cells = scenario.num_cells();
  const int k_users = scenario.num_users();
  SampleDraws d;
  d.sample_index = sample_index;
  d.seed = seed;
  d.user_positions.resize(k_users);
  d.xi.assign(m_cells, std::vector<std::complex<double>>(k_users, 0.0));
  d.has_pair.assign(m_cells, std::vector<bool>(k_users, false));

  for (int k = 0; k < k_users; ++k) {
    d.user_positions[k] = draw_user_position(scenario, k, sample_index, seed);
  }
  for (int m = 0; m < m_cells; ++m) {
    for (int k = 0; k < k_users; ++k) {
      if (!scenario.relevant(m, k)) continue;
      const double dist = (d.user_positions[k] - scenario.bs_positions[m]).norm();
      const double beta = path_gain(dist, scenario.wavelength, scenario.path_loss_exponent);
      auto rng = StreamRng::stream(seed, stream_tag::kFading, sample_index, m, k);
      d.xi[m][k] = std::sqrt(beta) * rng.cnormal();
      d.has_pair[m][k] = true;
    }
  }
  return d;
}

ChannelSample assemble_sample(const NetworkScenario& scenario,
                              const std::vector<BsRotation>& rotations,
                              const SampleDraws& draws) {
  ChannelSample sample;
  sample.sample_index = draws.sample_index;
  sample.seed = draws.seed;
  sample.user_positions = draws.user_positions;
  const int m_cells = scenario.num_cells();
  sample.h.assign(m_cells, std::vector<Eigen::VectorXcd>(scenario.num_users()));
  for (int m = 0; m < m_cells; ++m) {
    for (int k = 0; k < scenario.num_users(); ++k) {
      if (!draws.has_pair[m][k]) continue;
      sample.h[m][k] =
          stacked_channel(rotations[m], scenario.bs_positions[m], draws.user_positions[k],
                          draws.xi[m][k], scenario.geometry, scenario.pattern, scenario.wavelength);
    }
  }
  return sample;
}

ChannelSample draw_sample(const NetworkScenario& scenario,
                          const std::vector<BsRotation>& rotations, int sample_index,
                          std::uint64_t seed) {
  return assemble_sample(scenario, rotations,
                         draw_positions_and_fading(scenario, sample_index, seed));
}

CellChannels assemble_cell_channels(const NetworkScenario& scenario, const BsRotation& z_m,
                                    int cell, const SampleDraws& draws) {
  const int nb = scenario.antennas_per_bs();
  const auto in_cell = scenario.cell_users(cell);
  CellChannels cc;
  cc.in_cell_users = in_cell;
  cc.in_cell.resize(nb, static_cast<int>(in_cell.size()));
  cc.weights.resize(static_cast<int>(in_cell.size()));
  const Eigen::Vector3d& o = scenario.bs_positions[cell];
  for (std::size_t i = 0; i < in_cell.size(); ++i) {
    const int k = in_cell[i];
    cc.in_cell.col(i) = stacked_channel(z_m, o, draws.user_positions[k], draws.xi[cell][k],
                                        scenario.geometry, scenario.pattern, scenario.wavelength);
    cc.weights(i) = scenario.users[k].weight;
  }
  for (int n : scenario.graph.neighbors[cell]) {
    for (int k : scenario.cell_users(n)) {
      cc.victim_users.push_back(k);
      cc.victim_cells.push_back(n);
    }
  }
  cc.victims.resize(nb, static_cast<int>(cc.victim_users.size()));
  for (std::size_t q = 0; q < cc.victim_users.size(); ++q) {
    const int k = cc.victim_users[q];
    cc.victims.col(q) = stacked_channel(z_m, o, draws.user_positions[k], draws.xi[cell][k],
                                        scenario.geometry, scenario.pattern, scenario.wavelength);
  }
  return cc;
}

std::string ChannelSample::to_json() const {
  nlohmann::json j;
  j["sample_index"] = sample_index;
  j["seed"] = seed;
  j["description"] =
      "stacked channel vectors h[m][k] (re/im interleaved) for relevant (BS, user) pairs";
  j["user_positions_m"] = nlohmann::json::array();
  for (const auto& p : user_positions) {
    j["user_positions_m"].push_back(nlohmann::json::array({p.x(), p.y(), p.z()}));
  }
  j["h"] = nlohmann::json::array();
  for (std::size_t m = 0; m < h.size(); ++m) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < h[m].size(); ++k) {
      nlohmann::json entry = nlohmann::json::array();
      for (int i = 0; i < h[m][k].size(); ++i) {
        entry.push_back(h[m][k](i).real());
        entry.push_back(h[m][k](i).imag());
      }
      row.push_back(entry);
    }
    j["h"].push_back(row);
  }
  return j.dump();
}

}  // namespace sixdma
