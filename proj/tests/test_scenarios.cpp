#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "sixdma/scenario.hpp"

using namespace sixdma;

TEST_CASE("high-ICI setup matches the stated geometry") {
  const NetworkScenario sc = build_setup("high_ici");
  REQUIRE(sc.num_cells() == 3);
  CHECK(sc.surfaces_per_bs == 3);
  CHECK(sc.geometry.num_antennas() == 4);
  CHECK(sc.antennas_per_bs() == 12);

  const auto horiz = [&](int a, int b) {
    return (sc.bs_positions[a].head<2>() - sc.bs_positions[b].head<2>()).norm();
  };
  std::multiset<int> dists{(int)std::lround(horiz(0, 1)), (int)std::lround(horiz(0, 2)),
                           (int)std::lround(horiz(1, 2))};
  CHECK(dists.count(300) == 1);
  CHECK(horiz(0, 2) == doctest::Approx(std::sqrt(150.0 * 150 + 280.0 * 280)));
  CHECK(horiz(1, 2) == doctest::Approx(std::sqrt(150.0 * 150 + 280.0 * 280)));
  CHECK(std::sqrt(150.0 * 150 + 280.0 * 280) == doctest::Approx(317.65).epsilon(1e-3));

  // complete K3 adjacency
  CHECK(sc.graph.edges.size() == 3);
  for (int m = 0; m < 3; ++m) CHECK(sc.graph.neighbors[m].size() == 2);

  // six users per cell, paper index sets: 2/4, 4/2, 2/4 edge/regular
  for (int m = 0; m < 3; ++m) CHECK(sc.cell_users(m).size() == 6);
  int edges_per_cell[3] = {0, 0, 0};
  for (const auto& u : sc.users) {
    if (u.edge) {
      edges_per_cell[u.cell]++;
      CHECK(u.weight == 1.0);
      CHECK(u.local_xy.norm() == doctest::Approx(140.0));
    } else {
      CHECK(u.weight == 0.5);
    }
  }
  CHECK(edges_per_cell[0] == 2);
  CHECK(edges_per_cell[1] == 4);
  CHECK(edges_per_cell[2] == 2);
}

TEST_CASE("medium-ICI setup: wider separation, same local layout") {
  const NetworkScenario sc = build_setup("medium_ici");
  const double d01 = (sc.bs_positions[0].head<2>() - sc.bs_positions[1].head<2>()).norm();
  CHECK(d01 == doctest::Approx(400.0));
  double min_sep = 1e9;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      min_sep = std::min(min_sep,
                         (sc.bs_positions[a].head<2>() - sc.bs_positions[b].head<2>()).norm());
    }
  }
  CHECK(min_sep == doctest::Approx(400.0));

  const NetworkScenario hi = build_setup("high_ici");
  REQUIRE(hi.num_users() == sc.num_users());
  for (int k = 0; k < sc.num_users(); ++k) {
    CHECK(sc.users[k].edge == hi.users[k].edge);
    if (sc.users[k].edge) CHECK((sc.users[k].local_xy - hi.users[k].local_xy).norm() == 0.0);
  }
}

TEST_CASE("unknown setup name is rejected") {
  CHECK_THROWS_AS(build_setup("low_ici"), std::invalid_argument);
}

TEST_CASE("lattice layouts: edge lengths, counts, degrees") {
  for (int m : {3, 6, 10, 15}) {
    const NetworkScenario sc = build_lattice(m);
    CHECK(sc.num_cells() == m);
    for (auto [a, b] : sc.graph.edges) {
      const double d = (sc.bs_positions[a].head<2>() - sc.bs_positions[b].head<2>()).norm();
      CHECK(d == doctest::Approx(400.0).epsilon(1e-9));
    }
    int max_deg = 0;
    for (int v = 0; v < m; ++v) max_deg = std::max(max_deg, (int)sc.graph.neighbors[v].size());
    CHECK(max_deg <= 6);
    for (int v = 0; v < m; ++v) CHECK(sc.cell_users(v).size() == 6);
    for (const auto& u : sc.users) CHECK_FALSE(u.edge);

    // connectivity
    std::vector<bool> seen(m, false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int nb : sc.graph.neighbors[v]) {
        if (!seen[nb]) {
          seen[nb] = true;
          stack.push_back(nb);
        }
      }
    }
    for (int v = 0; v < m; ++v) CHECK(seen[v]);
  }
  CHECK(build_lattice(3).graph.edges.size() == 3);
  CHECK(build_lattice(6).graph.edges.size() == 9);
  int deg_m6 = 0;
  const NetworkScenario l6 = build_lattice(6);
  for (int v = 0; v < 6; ++v) deg_m6 = std::max(deg_m6, (int)l6.graph.neighbors[v].size());
  CHECK(deg_m6 == 4);
  CHECK_THROWS_AS(build_lattice(7), std::invalid_argument);
}

TEST_CASE("scenario JSON round trip is lossless") {
  for (const std::string name : {"high_ici", "medium_ici"}) {
    const NetworkScenario sc = build_setup(name);
    const NetworkScenario back = NetworkScenario::from_json(sc.to_json());
    CHECK(back.to_json() == sc.to_json());
    CHECK(back.num_users() == sc.num_users());
    CHECK(back.graph.edges == sc.graph.edges);
  }
  const NetworkScenario lat = build_lattice(10);
  CHECK(NetworkScenario::from_json(lat.to_json()).to_json() == lat.to_json());
}

TEST_CASE("validation rejects structural problems") {
  NetworkScenario sc = build_setup("high_ici");
  sc.users[0].weight = -1.0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  NetworkScenario sc2 = build_setup("high_ici");
  sc2.bs_positions[1] = sc2.bs_positions[0];
  CHECK_THROWS_AS(sc2.validate(), std::invalid_argument);
  CHECK_THROWS_AS(AdjacencyGraph::from_edges(3, {{0, 0}}), std::invalid_argument);
}
