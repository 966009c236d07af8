#include "sixdma/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace sixdma {

double element_gain(const Eigen::Vector3d& local_dir, const GainPattern& pattern) {
  if (std::abs(local_dir.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("element_gain: direction must be unit-norm");
  }
  const double rad2deg = 180.0 / M_PI;
  const double zenith_deg = std::acos(std::clamp(local_dir.z(), -1.0, 1.0)) * rad2deg;
  const double azim_deg = std::atan2(local_dir.y(), local_dir.x()) * rad2deg;

  const double av = -std::min(
      12.0 * std::pow((zenith_deg - 90.0) / pattern.vertical_3db_deg, 2), pattern.sla_v_db);
  const double ah = -std::min(12.0 * std::pow(azim_deg / pattern.horizontal_3db_deg, 2),
                              pattern.front_back_db);
  const double a = -std::min(-(av + ah), pattern.front_back_db);
  return std::pow(10.0, (pattern.max_gain_dbi + a) / 10.0);
}

double effective_gain(const SurfaceRotation& z, const Eigen::Vector3d& dod,
                      const GainPattern& pattern) {
  const Eigen::Vector3d local = rotation_matrix(z).transpose() * dod;
  return element_gain(local, pattern);
}

double path_gain(double distance_m, double wavelength_m, double exponent) {
  if (distance_m <= 0.0) {
    throw std::domain_error("path_gain: distance must be positive");
  }
  const double k = wavelength_m / (4.0 * M_PI);
  return k * k * std::pow(distance_m, -exponent);
}

Eigen::VectorXcd steering_vector(const SurfaceRotation& z, const Eigen::Vector3d& dod,
                                 const GeometryConfig& cfg, double wavelength_m) {
  const auto positions = antenna_positions(z, cfg);
  Eigen::VectorXcd a(positions.size());
  const double wavenumber = kTwoPi / wavelength_m;
  for (std::size_t n = 0; n < positions.size(); ++n) {
    const double phase = wavenumber * dod.dot(positions[n]);
    a(n) = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return a;
}

Eigen::VectorXcd surface_channel(const SurfaceRotation& z, const Eigen::Vector3d& dod,
                                 std::complex<double> xi, const GeometryConfig& cfg,
                                 const GainPattern& pattern, double wavelength_m) {
  const double amp = std::sqrt(effective_gain(z, dod, pattern));
  // h carries the conjugate of the steering phase so that h^H reproduces the
  // forward array response.
  return amp * xi * steering_vector(z, dod, cfg, wavelength_m).conjugate();
}

Eigen::VectorXcd stacked_channel(const BsRotation& z, const Eigen::Vector3d& bs_pos,
                                 const Eigen::Vector3d& user_pos, std::complex<double> xi,
                                 const GeometryConfig& cfg, const GainPattern& pattern,
                                 double wavelength_m) {
  const Eigen::Vector3d diff = user_pos - bs_pos;
  const double dist = diff.norm();
  if (dist <= 0.0) {
    throw std::domain_error("stacked_channel: user position coincides with the BS");
  }
  const Eigen::Vector3d dod = diff / dist;
  const int n = cfg.num_antennas();
  Eigen::VectorXcd h(n * z.size());
  for (int b = 0; b < z.size(); ++b) {
    h.segment(b * n, n) = surface_channel(z.surfaces[b], dod, xi, cfg, pattern, wavelength_m);
  }
  return h;
}

}  // namespace sixdma
