#include "sixdma/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sixdma {

using nlohmann::json;

AdjacencyGraph AdjacencyGraph::from_edges(int num_vertices,
                                          std::vector<std::pair<int, int>> edges) {
  AdjacencyGraph g;
  g.num_vertices = num_vertices;
  std::set<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a == b) throw std::invalid_argument("adjacency graph: self loop");
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= num_vertices) throw std::invalid_argument("adjacency graph: vertex out of range");
    seen.insert({a, b});
  }
  g.edges.assign(seen.begin(), seen.end());
  g.neighbors.assign(num_vertices, {});
  for (auto [a, b] : g.edges) {
    g.neighbors[a].push_back(b);
    g.neighbors[b].push_back(a);
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());
  return g;
}

bool AdjacencyGraph::adjacent(int m, int n) const {
  const auto& nb = neighbors[m];
  return std::binary_search(nb.begin(), nb.end(), n);
}

std::vector<int> NetworkScenario::cell_users(int m) const {
  std::vector<int> out;
  for (int k = 0; k < num_users(); ++k) {
    if (users[k].cell == m) out.push_back(k);
  }
  return out;
}

bool NetworkScenario::relevant(int m, int k) const {
  const int serving = users[k].cell;
  return serving == m || graph.adjacent(m, serving);
}

void NetworkScenario::validate() const {
  if (bs_positions.empty()) throw std::invalid_argument("scenario: no base stations");
  if (graph.num_vertices != num_cells()) throw std::invalid_argument("scenario: graph size mismatch");
  if (geometry.num_antennas() < 1) throw std::invalid_argument("scenario: no antenna offsets");
  if (surfaces_per_bs < 1) throw std::invalid_argument("scenario: surfaces_per_bs < 1");
  if (geometry.guard_angle <= 0) throw std::invalid_argument("scenario: guard angle must be positive");
  if (geometry.tilt_min > geometry.tilt_max) throw std::invalid_argument("scenario: tilt range empty");
  if (geometry.track_radius < 0) throw std::invalid_argument("scenario: negative track radius");
  for (int i = 0; i < num_cells(); ++i) {
    for (int j = i + 1; j < num_cells(); ++j) {
      if ((bs_positions[i] - bs_positions[j]).norm() < 1e-9) {
        throw std::invalid_argument("scenario: duplicate BS positions");
      }
    }
  }
  for (const auto& u : users) {
    if (u.cell < 0 || u.cell >= num_cells()) throw std::invalid_argument("scenario: user cell out of range");
    if (u.weight <= 0) throw std::invalid_argument("scenario: nonpositive user weight");
  }
  for (int m = 0; m < num_cells(); ++m) {
    if (cell_users(m).empty()) throw std::invalid_argument("scenario: empty cell");
  }
}

namespace {

constexpr double kDeg = M_PI / 180.0;

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& j) {
  return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>());
}

}  // namespace

std::string NetworkScenario::to_json() const {
  json j;
  j["name"] = name;
  j["wavelength_m"] = wavelength;
  j["path_loss_exponent"] = path_loss_exponent;
  j["p_max_w"] = p_max;
  j["noise_power_w"] = noise_power;
  j["annulus_inner_m"] = annulus_inner;
  j["annulus_outer_m"] = annulus_outer;
  j["user_height_m"] = user_height;
  j["surfaces_per_bs"] = surfaces_per_bs;
  j["bs_positions_m"] = json::array();
  for (const auto& o : bs_positions) j["bs_positions_m"].push_back(vec3_to_json(o));
  j["adjacency_edges"] = json::array();
  for (auto [a, b] : graph.edges) j["adjacency_edges"].push_back(json::array({a, b}));
  j["geometry"] = {
      {"track_radius_m", geometry.track_radius},
      {"guard_angle_deg", geometry.guard_angle / kDeg},
      {"tilt_min_deg", geometry.tilt_min / kDeg},
      {"tilt_max_deg", geometry.tilt_max / kDeg},
  };
  j["geometry"]["antenna_offsets_m"] = json::array();
  for (const auto& r : geometry.local_antenna_offsets) {
    j["geometry"]["antenna_offsets_m"].push_back(vec3_to_json(r));
  }
  j["pattern"] = {
      {"max_gain_dbi", pattern.max_gain_dbi},
      {"vertical_3db_deg", pattern.vertical_3db_deg},
      {"horizontal_3db_deg", pattern.horizontal_3db_deg},
      {"sla_v_db", pattern.sla_v_db},
      {"front_back_db", pattern.front_back_db},
  };
  j["users"] = json::array();
  for (const auto& u : users) {
    j["users"].push_back({{"cell", u.cell},
                          {"weight", u.weight},
                          {"edge", u.edge},
                          {"local_xy_m", json::array({u.local_xy.x(), u.local_xy.y()})}});
  }
  return j.dump(2);
}

NetworkScenario NetworkScenario::from_json(const std::string& text) {
  const json j = json::parse(text);
  NetworkScenario s;
  s.name = j.value("name", "");
  s.wavelength = j.at("wavelength_m").get<double>();
  s.path_loss_exponent = j.at("path_loss_exponent").get<double>();
  s.p_max = j.at("p_max_w").get<double>();
  s.noise_power = j.at("noise_power_w").get<double>();
  s.annulus_inner = j.value("annulus_inner_m", 70.0);
  s.annulus_outer = j.value("annulus_outer_m", 90.0);
  s.user_height = j.value("user_height_m", 0.0);
  s.surfaces_per_bs = j.at("surfaces_per_bs").get<int>();
  for (const auto& o : j.at("bs_positions_m")) s.bs_positions.push_back(vec3_from_json(o));
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("adjacency_edges")) {
    edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  s.graph = AdjacencyGraph::from_edges(static_cast<int>(s.bs_positions.size()), edges);
  const json& g = j.at("geometry");
  s.geometry.track_radius = g.at("track_radius_m").get<double>();
  s.geometry.guard_angle = g.at("guard_angle_deg").get<double>() * kDeg;
  s.geometry.tilt_min = g.at("tilt_min_deg").get<double>() * kDeg;
  s.geometry.tilt_max = g.at("tilt_max_deg").get<double>() * kDeg;
  for (const auto& r : g.at("antenna_offsets_m")) {
    s.geometry.local_antenna_offsets.push_back(vec3_from_json(r));
  }
  const json& p = j.at("pattern");
  s.pattern.max_gain_dbi = p.at("max_gain_dbi").get<double>();
  s.pattern.vertical_3db_deg = p.at("vertical_3db_deg").get<double>();
  s.pattern.horizontal_3db_deg = p.at("horizontal_3db_deg").get<double>();
  s.pattern.sla_v_db = p.at("sla_v_db").get<double>();
  s.pattern.front_back_db = p.at("front_back_db").get<double>();
  for (const auto& ju : j.at("users")) {
    User u;
    u.cell = ju.at("cell").get<int>();
    u.weight = ju.at("weight").get<double>();
    u.edge = ju.at("edge").get<bool>();
    u.local_xy = Eigen::Vector2d(ju.at("local_xy_m").at(0).get<double>(),
                                 ju.at("local_xy_m").at(1).get<double>());
    s.users.push_back(u);
  }
  s.validate();
  return s;
}

NetworkScenario NetworkScenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void NetworkScenario::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write scenario file: " + path);
  out << to_json() << "\n";
}

namespace {

NetworkScenario base_scenario() {
  NetworkScenario s;
  const double quarter = s.wavelength / 4.0;
  // Four antennas per square surface at [0, +-lambda/4, +-lambda/4] in the
  // surface-local frame.
  s.geometry.local_antenna_offsets = {
      {0.0, quarter, quarter}, {0.0, quarter, -quarter},
      {0.0, -quarter, quarter}, {0.0, -quarter, -quarter}};
  return s;
}

void add_edge_user(NetworkScenario& s, int cell, double bearing_deg, double radius_m) {
  NetworkScenario::User u;
  u.cell = cell;
  u.weight = 1.0;
  u.edge = true;
  u.local_xy = radius_m * Eigen::Vector2d(std::cos(bearing_deg * kDeg), std::sin(bearing_deg * kDeg));
  s.users.push_back(u);
}

void add_regular_users(NetworkScenario& s, int cell, int count, double weight) {
  for (int i = 0; i < count; ++i) {
    NetworkScenario::User u;
    u.cell = cell;
    u.weight = weight;
    u.edge = false;
    s.users.push_back(u);
  }
}

}  // namespace

NetworkScenario build_setup(const std::string& name) {
  NetworkScenario s = base_scenario();
  s.name = name;
  if (name == "high_ici") {
    s.bs_positions = {{0, 0, 10}, {300, 0, 10}, {150, 280, 10}};
  } else if (name == "medium_ici") {
    s.bs_positions = {{0, 0, 10}, {400, 0, 10}, {200, 380, 10}};
  } else {
    throw std::invalid_argument("build_setup: unknown setup name '" + name + "'");
  }
  s.graph = AdjacencyGraph::from_edges(3, {{0, 1}, {0, 2}, {1, 2}});

  // Local user layouts are shared by both setups. Edge users sit at 140 m on
  // bearings toward the two other cells of the high-ICI layout; cell 1 has
  // four edge users, split +-4 degrees around each bearing.
  const double r_edge = 140.0;
  add_edge_user(s, 0, 0.0, r_edge);
  add_edge_user(s, 0, 62.0, r_edge);
  add_regular_users(s, 0, 4, 0.5);
  add_edge_user(s, 1, 176.0, r_edge);
  add_edge_user(s, 1, 184.0, r_edge);
  add_edge_user(s, 1, 114.0, r_edge);
  add_edge_user(s, 1, 122.0, r_edge);
  add_regular_users(s, 1, 2, 0.5);
  add_edge_user(s, 2, 242.0, r_edge);
  add_edge_user(s, 2, 298.0, r_edge);
  add_regular_users(s, 2, 4, 0.5);

  s.validate();
  return s;
}

NetworkScenario build_lattice(int num_cells) {
  int bottom_row = 0;
  switch (num_cells) {
    case 3: bottom_row = 2; break;
    case 6: bottom_row = 3; break;
    case 10: bottom_row = 4; break;
    case 15: bottom_row = 5; break;
    default:
      throw std::invalid_argument("build_lattice: M must be one of {3, 6, 10, 15}");
  }
  NetworkScenario s = base_scenario();
  s.name = "lattice_" + std::to_string(num_cells);

  const double edge = 400.0;
  const double row_height = edge * std::sqrt(3.0) / 2.0;
  for (int row = 0; row < bottom_row; ++row) {
    const int in_row = bottom_row - row;
    for (int i = 0; i < in_row; ++i) {
      s.bs_positions.push_back({row * edge / 2.0 + i * edge, row * row_height, 10.0});
    }
  }

  std::vector<std::pair<int, int>> edges;
  for (int a = 0; a < num_cells; ++a) {
    for (int b = a + 1; b < num_cells; ++b) {
      const double d = (s.bs_positions[a].head<2>() - s.bs_positions[b].head<2>()).norm();
      if (std::abs(d - edge) < 1e-6) edges.emplace_back(a, b);
    }
  }
  s.graph = AdjacencyGraph::from_edges(num_cells, edges);

  for (int m = 0; m < num_cells; ++m) add_regular_users(s, m, 6, 0.5);

  s.validate();
  return s;
}

}  // namespace sixdma
