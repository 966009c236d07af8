#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sixdma/geometry.hpp"
#include "sixdma/rng.hpp"

using namespace sixdma;

namespace {
GeometryConfig test_geometry() {
  GeometryConfig g;
  g.local_antenna_offsets = {{0, 0.03125, 0.03125},
                             {0, 0.03125, -0.03125},
                             {0, -0.03125, 0.03125},
                             {0, -0.03125, -0.03125}};
  return g;
}
}  // namespace

TEST_CASE("azimuth wrapping maps into (0, 2pi]") {
  CHECK(wrap_azimuth(0.0) == doctest::Approx(kTwoPi));
  CHECK(wrap_azimuth(kTwoPi) == doctest::Approx(kTwoPi));
  CHECK(wrap_azimuth(-M_PI_2) == doctest::Approx(1.5 * M_PI));
  CHECK(wrap_azimuth(3 * kTwoPi + 0.25) == doctest::Approx(0.25));
  StreamRng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double w = wrap_azimuth(rng.uniform(-50, 50));
    CHECK(w > 0.0);
    CHECK(w <= kTwoPi);
  }
}

TEST_CASE("zero rotation gives the identity matrix") {
  const SurfaceRotation z(0.0, 0.0);  // azimuth 0 wraps to 2pi
  CHECK(z.azimuth == doctest::Approx(kTwoPi));
  const Eigen::Matrix3d r = rotation_matrix(z);
  CHECK((r - Eigen::Matrix3d::Identity()).norm() <= 1e-12);
}

TEST_CASE("quarter-turn azimuth is a pure z-axis rotation") {
  const Eigen::Matrix3d r = rotation_matrix(SurfaceRotation(M_PI_2, 0.0));
  Eigen::Matrix3d expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  CHECK((r - expect).norm() <= 1e-12);
}

TEST_CASE("random rotations are orthonormal with unit determinant") {
  StreamRng rng(7);
  double worst_orth = 0.0, worst_det = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const SurfaceRotation z(rng.uniform(-20, 20), rng.uniform(-2, 2));
    const Eigen::Matrix3d r = rotation_matrix(z);
    double raw[3][3];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) raw[a][b] = r(a, b);
    }
    const auto chk = oracle::check_rotation(z.azimuth, z.tilt, raw);
    worst_orth = std::max(worst_orth, chk.orthonormality_error);
    worst_det = std::max(worst_det, chk.determinant_error);
  }
  CHECK(worst_orth <= 1e-12);
  CHECK(worst_det <= 1e-12);
}

TEST_CASE("boresight column points radially at zero tilt") {
  const SurfaceRotation z(1.234, 0.0);
  const Eigen::Matrix3d r = rotation_matrix(z);
  CHECK(r(0, 0) == doctest::Approx(std::cos(1.234)));
  CHECK(r(1, 0) == doctest::Approx(std::sin(1.234)));
  CHECK(r(2, 0) == doctest::Approx(0.0));
}

TEST_CASE("circular distance hand cases") {
  CHECK(circular_distance(M_PI_2, 1.5 * M_PI) == doctest::Approx(M_PI));
  CHECK(circular_distance(0.1, kTwoPi - 0.1) == doctest::Approx(0.2));
  StreamRng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-10, 10);
    CHECK(circular_distance(x, x) == doctest::Approx(0.0));
  }
}

TEST_CASE("circular distance is a metric on the circle") {
  StreamRng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const double a = rng.uniform(-10, 10), b = rng.uniform(-10, 10), c = rng.uniform(-10, 10);
    const double dab = circular_distance(a, b);
    CHECK(dab == doctest::Approx(circular_distance(b, a)));
    CHECK(dab <= M_PI + 1e-15);
    CHECK(dab <= circular_distance(a, c) + circular_distance(c, b) + 1e-12);
  }
}

TEST_CASE("antenna positions: identity and pure translation") {
  GeometryConfig g = test_geometry();
  g.track_radius = 0.0;
  const auto at_origin = antenna_positions(SurfaceRotation(0.0, 0.0), g);
  for (std::size_t n = 0; n < at_origin.size(); ++n) {
    CHECK((at_origin[n] - g.local_antenna_offsets[n]).norm() <= 1e-12);
  }
  g.track_radius = 0.5;
  const auto translated = antenna_positions(SurfaceRotation(0.0, 0.0), g);
  for (std::size_t n = 0; n < translated.size(); ++n) {
    CHECK((translated[n] - g.local_antenna_offsets[n] - Eigen::Vector3d(0.5, 0, 0)).norm() <=
          1e-12);
  }
}

TEST_CASE("antenna placement is a rigid motion") {
  const GeometryConfig g = test_geometry();
  StreamRng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const SurfaceRotation z(rng.uniform(0, kTwoPi), rng.uniform(-1, 2));
    const auto pos = antenna_positions(z, g);
    for (std::size_t a = 0; a < pos.size(); ++a) {
      for (std::size_t b = a + 1; b < pos.size(); ++b) {
        const double got = (pos[a] - pos[b]).norm();
        const double expect = (g.local_antenna_offsets[a] - g.local_antenna_offsets[b]).norm();
        CHECK(std::abs(got - expect) <= 1e-12);
      }
    }
  }
}

TEST_CASE("rotation penalty hand cases") {
  GeometryConfig g = test_geometry();
  g.guard_angle = 5.0 * M_PI / 180.0;
  g.tilt_min = 0.0;
  g.tilt_max = M_PI / 3.0;

  BsRotation ok;
  ok.surfaces = {SurfaceRotation(0.0, M_PI / 6), SurfaceRotation(2 * M_PI / 3, M_PI / 6),
                 SurfaceRotation(4 * M_PI / 3, M_PI / 6)};
  CHECK(rotation_penalty(ok, g) == 0.0);

  GeometryConfig g2 = g;
  g2.guard_angle = 0.10;
  BsRotation close;
  close.surfaces = {SurfaceRotation(1.00, 0.5), SurfaceRotation(1.05, 0.5)};
  CHECK(rotation_penalty(close, g2) == doctest::Approx(0.05).epsilon(1e-9));

  BsRotation tilted = ok;
  tilted.surfaces[0].tilt = g.tilt_max + 0.2;
  CHECK(rotation_penalty(tilted, g) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("penalty is zero exactly on the feasible set") {
  GeometryConfig g = test_geometry();
  StreamRng rng(13);
  for (int i = 0; i < 2000; ++i) {
    BsRotation z;
    for (int b = 0; b < 3; ++b) {
      z.surfaces.emplace_back(rng.uniform(0, kTwoPi), rng.uniform(-0.3, g.tilt_max + 0.3));
    }
    bool feasible = true;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        feasible = feasible && circular_distance(z.surfaces[a].azimuth, z.surfaces[b].azimuth) >=
                                   g.guard_angle;
      }
      feasible = feasible && z.surfaces[a].tilt >= g.tilt_min && z.surfaces[a].tilt <= g.tilt_max;
    }
    CHECK((rotation_penalty(z, g) == 0.0) == feasible);
  }
}

TEST_CASE("uniform initial rotation is feasible") {
  const GeometryConfig g = test_geometry();
  const BsRotation z = uniform_initial_rotation(3, g);
  CHECK(rotation_penalty(z, g) == 0.0);
  CHECK(z.surfaces[0].tilt == doctest::Approx(M_PI / 6));
}
