#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sixdma/channel.hpp"
#include "sixdma/rng.hpp"
#include "sixdma/sampling.hpp"

using namespace sixdma;

namespace {

GeometryConfig quarter_wave_geometry() {
  GeometryConfig g;
  g.track_radius = 0.0;
  g.local_antenna_offsets = {{0, 0.03125, 0.03125},
                             {0, 0.03125, -0.03125},
                             {0, -0.03125, 0.03125},
                             {0, -0.03125, -0.03125}};
  return g;
}

Eigen::Vector3d random_unit(StreamRng& rng) {
  Eigen::Vector3d v;
  do {
    v = {rng.normal_pair().first, rng.normal_pair().first, rng.normal_pair().first};
  } while (v.norm() < 1e-9);
  return v.normalized();
}

}  // namespace

TEST_CASE("element gain hand cases against the extended-precision oracle") {
  const GainPattern pat;
  CHECK(element_gain({1, 0, 0}, pat) ==
        doctest::Approx((double)oracle::element_gain_ref(1, 0, 0, 8, 65, 65, 30, 30))
            .epsilon(1e-14));
  CHECK(element_gain({1, 0, 0}, pat) == doctest::Approx(std::pow(10.0, 0.8)).epsilon(1e-12));
  CHECK(element_gain({-1, 0, 0}, pat) ==
        doctest::Approx(std::pow(10.0, (8.0 - 30.0) / 10.0)).epsilon(1e-12));
  const double side = element_gain({0, 1, 0}, pat);
  const double ah = 12.0 * std::pow(90.0 / 65.0, 2);
  CHECK(side == doctest::Approx(std::pow(10.0, (8.0 - ah) / 10.0)).epsilon(1e-12));
  CHECK(ah == doctest::Approx(23.0059).epsilon(1e-4));
}

TEST_CASE("element gain stays within the front-back window") {
  const GainPattern pat;
  StreamRng rng(5);
  const double lo = std::pow(10.0, (pat.max_gain_dbi - pat.front_back_db) / 10.0);
  const double hi = std::pow(10.0, pat.max_gain_dbi / 10.0);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d dir = random_unit(rng);
    const double g = element_gain(dir, pat);
    CHECK(g >= lo * (1 - 1e-12));
    CHECK(g <= hi * (1 + 1e-12));
    CHECK(g == doctest::Approx((double)oracle::element_gain_ref(dir.x(), dir.y(), dir.z(), 8, 65,
                                                                65, 30, 30))
                   .epsilon(1e-12));
  }
}

TEST_CASE("element gain rejects non-unit directions") {
  const GainPattern pat;
  CHECK_THROWS_AS(element_gain({1.0, 1.0, 0.0}, pat), std::invalid_argument);
  CHECK_THROWS_AS(element_gain({0.0, 0.0, 0.0}, pat), std::invalid_argument);
}

TEST_CASE("effective gain: boresight alignment and azimuthal covariance") {
  const GainPattern pat;
  const double peak = std::pow(10.0, 0.8);
  CHECK(effective_gain(SurfaceRotation(0.0, 0.0), {1, 0, 0}, pat) ==
        doctest::Approx(peak).epsilon(1e-12));
  StreamRng rng(6);
  for (int i = 0; i < 500; ++i) {
    const SurfaceRotation z(rng.uniform(0, kTwoPi), rng.uniform(0, 1));
    const Eigen::Vector3d boresight = rotation_matrix(z).col(0);
    CHECK(effective_gain(z, boresight, pat) == doctest::Approx(peak).epsilon(1e-9));

    // rotating both the surface azimuth and the direction about z leaves the
    // gain unchanged
    const Eigen::Vector3d f = random_unit(rng);
    const double alpha = rng.uniform(0, kTwoPi);
    Eigen::Matrix3d rz;
    rz << std::cos(alpha), -std::sin(alpha), 0, std::sin(alpha), std::cos(alpha), 0, 0, 0, 1;
    const SurfaceRotation shifted(z.azimuth + alpha, z.tilt);
    CHECK(effective_gain(shifted, rz * f, pat) ==
          doctest::Approx(effective_gain(z, f, pat)).epsilon(1e-9));
  }
}

TEST_CASE("path gain closed form and power law") {
  CHECK(path_gain(100.0, 0.125, 3.5) ==
        doctest::Approx((double)oracle::path_gain_ref(100.0L, 0.125L, 3.5L)).epsilon(1e-15));
  CHECK(path_gain(100.0, 0.125, 3.5) == doctest::Approx(9.8946e-12).epsilon(1e-4));
  CHECK(path_gain(1.0, 0.125, 3.5) == doctest::Approx(9.8946e-5).epsilon(1e-4));
  StreamRng rng(8);
  for (int i = 0; i < 100; ++i) {
    const double d = rng.uniform(1.0, 500.0);
    CHECK(path_gain(2 * d, 0.125, 3.5) / path_gain(d, 0.125, 3.5) ==
          doctest::Approx(std::pow(2.0, -3.5)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(path_gain(0.0, 0.125, 3.5), std::domain_error);
  CHECK_THROWS_AS(path_gain(-1.0, 0.125, 3.5), std::domain_error);
}

TEST_CASE("steering vector: zero phase, quarter-wave phase, unit modulus") {
  const GeometryConfig g = quarter_wave_geometry();
  const double lambda = 0.125;
  const SurfaceRotation ident(0.0, 0.0);
  const Eigen::VectorXcd along_x = steering_vector(ident, {1, 0, 0}, g, lambda);
  for (int n = 0; n < along_x.size(); ++n) {
    CHECK(std::abs(along_x(n) - std::complex<double>(1, 0)) <= 1e-9);
  }
  const Eigen::VectorXcd along_z = steering_vector(ident, {0, 0, 1}, g, lambda);
  for (int n = 0; n < 4; ++n) {
    const double sign = g.local_antenna_offsets[n].z() > 0 ? 1.0 : -1.0;
    CHECK(std::abs(along_z(n) - std::complex<double>(0, sign)) <= 1e-9);
  }
  StreamRng rng(9);
  GeometryConfig g2 = g;
  g2.track_radius = 0.5;
  for (int i = 0; i < 10000; ++i) {
    const SurfaceRotation z(rng.uniform(0, kTwoPi), rng.uniform(-1, 1));
    const Eigen::VectorXcd a = steering_vector(z, random_unit(rng), g2, lambda);
    for (int n = 0; n < a.size(); ++n) CHECK(std::abs(std::abs(a(n)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("surface channel energy identity and linearity") {
  const GeometryConfig g = quarter_wave_geometry();
  const GainPattern pat;
  StreamRng rng(10);
  for (int i = 0; i < 2000; ++i) {
    const SurfaceRotation z(rng.uniform(0, kTwoPi), rng.uniform(0, 1));
    const Eigen::Vector3d f = random_unit(rng);
    const std::complex<double> xi = rng.cnormal();
    const Eigen::VectorXcd h = surface_channel(z, f, xi, g, pat, 0.125);
    const double expect = 4.0 * effective_gain(z, f, pat) * std::norm(xi);
    CHECK(h.squaredNorm() == doctest::Approx(expect).epsilon(1e-12));
    const Eigen::VectorXcd h3 = surface_channel(z, f, 3.0 * xi, g, pat, 0.125);
    CHECK((h3 - 3.0 * h).norm() <= 1e-12 * h.norm());
  }
  const Eigen::VectorXcd zero =
      surface_channel(SurfaceRotation(1, 0.2), {0, 1, 0}, 0.0, g, pat, 0.125);
  CHECK(zero.norm() == 0.0);
}

TEST_CASE("stacked channel blocks and norm") {
  GeometryConfig g = quarter_wave_geometry();
  const GainPattern pat;
  BsRotation z;
  z.surfaces = {SurfaceRotation(1.1, 0.3), SurfaceRotation(1.1, 0.3), SurfaceRotation(1.1, 0.3)};
  const Eigen::Vector3d bs(0, 0, 10), user(60, 30, 0);
  // with zero track radius identical rotations give identical blocks
  const Eigen::VectorXcd h = stacked_channel(z, bs, user, {0.5, -0.25}, g, pat, 0.125);
  CHECK((h.segment(0, 4) - h.segment(4, 4)).norm() <= 1e-15);
  CHECK((h.segment(0, 4) - h.segment(8, 4)).norm() <= 1e-15);

  StreamRng rng(12);
  g.track_radius = 0.5;
  for (int i = 0; i < 500; ++i) {
    BsRotation zr;
    for (int b = 0; b < 3; ++b) {
      zr.surfaces.emplace_back(rng.uniform(0, kTwoPi), rng.uniform(0, 1));
    }
    const std::complex<double> xi = rng.cnormal();
    const Eigen::Vector3d u(rng.uniform(-200, 200), rng.uniform(-200, 200), 0.0);
    const Eigen::VectorXcd hh = stacked_channel(zr, bs, u, xi, g, pat, 0.125);
    const Eigen::Vector3d f = (u - bs).normalized();
    double expect = 0.0;
    for (const auto& s : zr.surfaces) expect += 4.0 * effective_gain(s, f, pat);
    CHECK(hh.squaredNorm() == doctest::Approx(std::norm(xi) * expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(stacked_channel(z, bs, bs, {1.0, 0.0}, g, pat, 0.125), std::domain_error);
}

TEST_CASE("sample draws are deterministic and rotation independent") {
  const NetworkScenario sc = build_setup("high_ici");
  std::vector<BsRotation> za(3), zb(3);
  StreamRng rng(77);
  for (auto& zm : za) zm = uniform_initial_rotation(3, sc.geometry);
  for (auto& zm : zb) {
    BsRotation r;
    for (int b = 0; b < 3; ++b) {
      r.surfaces.emplace_back(rng.uniform(0, kTwoPi), rng.uniform(0, 1));
    }
    zm = r;
  }
  const ChannelSample a = draw_sample(sc, za, 4, 123);
  const ChannelSample b = draw_sample(sc, zb, 4, 123);
  REQUIRE(a.user_positions.size() == b.user_positions.size());
  for (std::size_t k = 0; k < a.user_positions.size(); ++k) {
    CHECK((a.user_positions[k] - b.user_positions[k]).norm() == 0.0);
  }
  const SampleDraws da = draw_positions_and_fading(sc, 4, 123);
  const SampleDraws db = draw_positions_and_fading(sc, 4, 123);
  for (int m = 0; m < 3; ++m) {
    for (int k = 0; k < sc.num_users(); ++k) {
      CHECK(da.xi[m][k] == db.xi[m][k]);
    }
  }
}

TEST_CASE("regular users stay in the annulus; edge users are pinned") {
  const NetworkScenario sc = build_setup("high_ici");
  for (int s = 0; s < 200; ++s) {
    const SampleDraws d = draw_positions_and_fading(sc, s, 99);
    for (int k = 0; k < sc.num_users(); ++k) {
      const auto& u = sc.users[k];
      const Eigen::Vector2d local =
          d.user_positions[k].head<2>() - sc.bs_positions[u.cell].head<2>();
      if (u.edge) {
        CHECK((local - u.local_xy).norm() <= 1e-12);
      } else {
        CHECK(local.norm() >= 70.0);
        CHECK(local.norm() <= 90.0);
      }
      CHECK(d.user_positions[k].z() == 0.0);
    }
  }
}

TEST_CASE("fading variance matches the path-loss law") {
  const NetworkScenario sc = build_setup("high_ici");
  // edge user 0 of cell 0 sits at local (140, 0, 0) with the BS 10 m up, so
  // its distance (and hence the fading variance) is the same in every draw
  const int m = 0;
  const int k = 0;
  const double beta = path_gain(std::sqrt(140.0 * 140.0 + 100.0), sc.wavelength, 3.5);
  double acc = 0.0;
  const int trials = 10000;
  for (int s = 0; s < trials; ++s) {
    const SampleDraws draw = draw_positions_and_fading(sc, s, 2024);
    acc += std::norm(draw.xi[m][k]);
  }
  const double var = acc / trials;
  CHECK(var == doctest::Approx(beta).epsilon(0.05));
}

TEST_CASE("channel sample dump is self-describing and stable") {
  const NetworkScenario sc = build_setup("medium_ici");
  std::vector<BsRotation> z(3);
  for (auto& zm : z) zm = uniform_initial_rotation(3, sc.geometry);
  const std::string a = draw_sample(sc, z, 0, 5).to_json();
  const std::string b = draw_sample(sc, z, 0, 5).to_json();
  CHECK(a == b);
  CHECK(a.find("sample_index") != std::string::npos);
  CHECK(a.find("user_positions_m") != std::string::npos);
}
