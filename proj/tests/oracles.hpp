// Independent reference implementations used only by tests. These share no
// code with the production paths beyond the domain types: everything here is
// straight-line scalar arithmetic, mostly in extended precision.
#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "sixdma/precoder.hpp"
#include "sixdma/scenario.hpp"

namespace sixdma::oracle {

using cvec = std::vector<std::complex<double>>;

// 3x3 orthonormality / determinant errors computed by manual long double
// arithmetic from the raw angles.
struct RotationCheck {
  double orthonormality_error = 0.0;  // max |R^T R - I| entry
  double determinant_error = 0.0;
};
RotationCheck check_rotation(double azimuth, double tilt, const double r[3][3]);

// 3GPP element pattern evaluated in long double from first principles.
long double element_gain_ref(long double ux, long double uy, long double uz, long double gmax_dbi,
                             long double theta3db_deg, long double phi3db_deg, long double slav_db,
                             long double am_db);

long double path_gain_ref(long double d, long double lambda, long double eta);

// Single-user maximum-ratio rate log2(1 + p ||h||^2 / c).
long double single_user_rate_ref(const cvec& h, long double p, long double c);

// Straight-line SINR evaluation of the actual rate of every user from raw
// channel/precoder scalars (no linear-algebra library involved).
std::vector<double> sinr_rates_ref(
    const std::vector<std::vector<cvec>>& h,      // [bs][user] stacked channels (may be empty)
    const std::vector<std::vector<cvec>>& w,      // [bs][own user index] precoders
    const std::vector<int>& serving_cell,         // per user
    const std::vector<std::vector<int>>& cell_users,
    double noise_power);

// Monte Carlo estimate of E|u* y - s_k|^2 for the surrogate signal model
// (interference bound folded into the noise), with its standard error.
std::pair<double, double> mse_monte_carlo(const cvec& h_k, const std::vector<cvec>& w_all, int k,
                                          std::complex<double> u, double c_k, int trials,
                                          std::uint64_t seed);

// Matching verification by brute force.
bool is_vertex_disjoint(const std::vector<std::pair<int, int>>& edges, int num_vertices);
bool is_maximal_matching(const AdjacencyGraph& graph,
                         const std::vector<std::pair<int, int>>& matching);

// Golden fixture: inputs plus reference outputs produced by a documented
// offline oracle, compared against the production path.
struct GoldenCase {
  std::string provenance;
  CellProblem problem;
  double reference_weighted_sum = 0.0;
  std::vector<double> reference_user_rates;
  double tolerance_rel = 0.01;
};
GoldenCase load_golden_case(const std::string& path);

struct VerifyReport {
  bool pass = false;
  double achieved = 0.0;
  double reference = 0.0;
  double rel_error = 0.0;
};
VerifyReport verify(const GoldenCase& gc, const SolverOptions& opts);

}  // namespace sixdma::oracle
