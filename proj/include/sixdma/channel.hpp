#pragma once

#include <Eigen/Dense>
#include <complex>

#include "sixdma/geometry.hpp"

namespace sixdma {

// Directional element pattern (3GPP-style parabolic main lobe with side-lobe
// and front-back floors). Angles in degrees, gains in dB; evaluation returns
// linear power gain.
struct GainPattern {
  double max_gain_dbi = 8.0;
  double vertical_3db_deg = 65.0;
  double horizontal_3db_deg = 65.0;
  double sla_v_db = 30.0;      // vertical side-lobe floor
  double front_back_db = 30.0; // A_m
};

// Linear power gain of one element for a unit direction expressed in the
// surface-local frame (boresight = local +x). Throws std::invalid_argument
// if the direction is not unit-norm within 1e-9.
double element_gain(const Eigen::Vector3d& local_dir, const GainPattern& pattern);

// Gain of a rotated surface toward a global departure direction:
// element_gain(R(z)^T f).
double effective_gain(const SurfaceRotation& z, const Eigen::Vector3d& dod,
                      const GainPattern& pattern);

// Large-scale power gain (lambda/4pi)^2 d^-eta. Throws std::domain_error for
// d <= 0.
double path_gain(double distance_m, double wavelength_m, double exponent);

// Array response of one surface: entry n = exp(j 2pi/lambda f.r_n), unit
// modulus by construction.
Eigen::VectorXcd steering_vector(const SurfaceRotation& z, const Eigen::Vector3d& dod,
                                 const GeometryConfig& cfg, double wavelength_m);

// Channel of one surface toward direction f with path coefficient xi. The
// stored vector h is the one whose conjugate transpose multiplies precoders,
// so entries carry the conjugated steering phase.
Eigen::VectorXcd surface_channel(const SurfaceRotation& z, const Eigen::Vector3d& dod,
                                 std::complex<double> xi, const GeometryConfig& cfg,
                                 const GainPattern& pattern, double wavelength_m);

// Stacked channel over all B surfaces of one BS toward a user position.
// Throws std::domain_error if the positions coincide.
Eigen::VectorXcd stacked_channel(const BsRotation& z, const Eigen::Vector3d& bs_pos,
                                 const Eigen::Vector3d& user_pos, std::complex<double> xi,
                                 const GeometryConfig& cfg, const GainPattern& pattern,
                                 double wavelength_m);

}  // namespace sixdma
