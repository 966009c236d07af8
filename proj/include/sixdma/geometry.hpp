#pragma once

#include <Eigen/Dense>
#include <vector>

namespace sixdma {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Maps an angle to the canonical azimuth interval (0, 2*pi].
double wrap_azimuth(double phi);

// Circular angular distance min(|a-b|, 2*pi - |a-b|), in [0, pi].
double circular_distance(double phi, double psi);

// Rotation of one movable surface: azimuth of the surface normal's x-y
// projection, stored wrapped into (0, 2*pi], plus a (non-periodic) tilt.
struct SurfaceRotation {
  double azimuth = kTwoPi;
  double tilt = 0.0;

  SurfaceRotation() = default;
  SurfaceRotation(double azimuth_rad, double tilt_rad);
};

// Rotations of all B surfaces of one base station. Feasibility (guard-angle
// separation, tilt range) is deliberately not an invariant here: swarm
// candidates may violate it and are charged through rotation_penalty.
struct BsRotation {
  std::vector<SurfaceRotation> surfaces;

  int size() const { return static_cast<int>(surfaces.size()); }
};

struct GeometryConfig {
  double track_radius = 0.5;                           // meters
  std::vector<Eigen::Vector3d> local_antenna_offsets;  // N points, surface frame
  double guard_angle = 5.0 * M_PI / 180.0;             // min azimuth separation
  double tilt_min = 0.0;
  double tilt_max = 60.0 * M_PI / 180.0;

  int num_antennas() const { return static_cast<int>(local_antenna_offsets.size()); }
};

// Z-Y rotation matrix of a surface; orthonormal with det +1. The first
// column is the global boresight direction of the surface normal.
Eigen::Matrix3d rotation_matrix(const SurfaceRotation& z);

// Global positions (base-station frame) of the N antennas of one surface:
// the surface sits on the circular track at its azimuth and carries the
// local offsets rigidly.
std::vector<Eigen::Vector3d> antenna_positions(const SurfaceRotation& z,
                                               const GeometryConfig& cfg);

// Violation measure of the per-BS rotation feasible set: summed guard-angle
// shortfalls over surface pairs plus tilt range excesses, in radians.
// Zero exactly on the feasible set.
double rotation_penalty(const BsRotation& z, const GeometryConfig& cfg);

// Uniformly spaced default rotation: azimuth 2*pi*(b-1)/B + pi/B, mid-range
// tilt. Also the fixed configuration of the non-rotating benchmark schemes.
BsRotation uniform_initial_rotation(int num_surfaces, const GeometryConfig& cfg);

}  // namespace sixdma
