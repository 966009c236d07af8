#include "sixdma/geometry.hpp"

#include <cmath>

namespace sixdma {

double wrap_azimuth(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r;
}

double circular_distance(double phi, double psi) {
  const double a = wrap_azimuth(phi);
  const double b = wrap_azimuth(psi);
  const double d = std::abs(a - b);
  return std::min(d, kTwoPi - d);
}

SurfaceRotation::SurfaceRotation(double azimuth_rad, double tilt_rad)
    : azimuth(wrap_azimuth(azimuth_rad)), tilt(tilt_rad) {}

Eigen::Matrix3d rotation_matrix(const SurfaceRotation& z) {
  const double cp = std::cos(z.azimuth), sp = std::sin(z.azimuth);
  const double ct = std::cos(z.tilt), st = std::sin(z.tilt);
  Eigen::Matrix3d r;
  r << cp * ct, -sp, cp * st,  //
      sp * ct, cp, sp * st,    //
      -st, 0.0, ct;
  return r;
}

std::vector<Eigen::Vector3d> antenna_positions(const SurfaceRotation& z,
                                               const GeometryConfig& cfg) {
  const Eigen::Matrix3d r = rotation_matrix(z);
  const Eigen::Vector3d track(cfg.track_radius * std::cos(z.azimuth),
                              cfg.track_radius * std::sin(z.azimuth), 0.0);
  std::vector<Eigen::Vector3d> out;
  out.reserve(cfg.local_antenna_offsets.size());
  for (const auto& offset : cfg.local_antenna_offsets) {
    out.push_back(track + r * offset);
  }
  return out;
}

double rotation_penalty(const BsRotation& z, const GeometryConfig& cfg) {
  double p = 0.0;
  const int b = z.size();
  for (int i = 0; i < b; ++i) {
    for (int j = i + 1; j < b; ++j) {
      const double d = circular_distance(z.surfaces[i].azimuth, z.surfaces[j].azimuth);
      p += std::max(0.0, cfg.guard_angle - d);
    }
  }
  for (const auto& s : z.surfaces) {
    p += std::max(0.0, s.tilt - cfg.tilt_max);
    p += std::max(0.0, cfg.tilt_min - s.tilt);
  }
  return p;
}

BsRotation uniform_initial_rotation(int num_surfaces, const GeometryConfig& cfg) {
  BsRotation z;
  z.surfaces.reserve(num_surfaces);
  const double mid_tilt = 0.5 * (cfg.tilt_min + cfg.tilt_max);
  for (int b = 0; b < num_surfaces; ++b) {
    z.surfaces.emplace_back(kTwoPi * b / num_surfaces + M_PI / num_surfaces, mid_tilt);
  }
  return z;
}

}  // namespace sixdma
