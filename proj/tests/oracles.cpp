#include "oracles.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sixdma/rng.hpp"

namespace sixdma::oracle {

RotationCheck check_rotation(double azimuth, double tilt, const double r[3][3]) {
  const long double cp = std::cos((long double)azimuth), sp = std::sin((long double)azimuth);
  const long double ct = std::cos((long double)tilt), st = std::sin((long double)tilt);
  const long double ref[3][3] = {{cp * ct, -sp, cp * st}, {sp * ct, cp, sp * st}, {-st, 0.0L, ct}};
  // R^T R in long double from the production entries
  RotationCheck out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      long double dot = 0.0L;
      for (int k = 0; k < 3; ++k) dot += (long double)r[k][i] * (long double)r[k][j];
      const long double expect = (i == j) ? 1.0L : 0.0L;
      out.orthonormality_error =
          std::max(out.orthonormality_error, (double)std::fabs((double)(dot - expect)));
    }
  }
  long double det = 0.0L;
  det += (long double)r[0][0] *
         ((long double)r[1][1] * (long double)r[2][2] - (long double)r[1][2] * (long double)r[2][1]);
  det -= (long double)r[0][1] *
         ((long double)r[1][0] * (long double)r[2][2] - (long double)r[1][2] * (long double)r[2][0]);
  det += (long double)r[0][2] *
         ((long double)r[1][0] * (long double)r[2][1] - (long double)r[1][1] * (long double)r[2][0]);
  out.determinant_error = (double)std::fabs((double)(det - 1.0L));
  // cross-check the production entries against the closed form
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.orthonormality_error = std::max(
          out.orthonormality_error, (double)std::fabs((double)((long double)r[i][j] - ref[i][j])));
    }
  }
  return out;
}

long double element_gain_ref(long double ux, long double uy, long double uz, long double gmax_dbi,
                             long double theta3db_deg, long double phi3db_deg, long double slav_db,
                             long double am_db) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double zenith = std::acos(std::min(1.0L, std::max(-1.0L, uz))) * 180.0L / pi;
  const long double azim = std::atan2(uy, ux) * 180.0L / pi;
  const long double av =
      -std::min(12.0L * ((zenith - 90.0L) / theta3db_deg) * ((zenith - 90.0L) / theta3db_deg),
                slav_db);
  const long double ah = -std::min(12.0L * (azim / phi3db_deg) * (azim / phi3db_deg), am_db);
  const long double a = -std::min(-(av + ah), am_db);
  return std::pow(10.0L, (gmax_dbi + a) / 10.0L);
}

long double path_gain_ref(long double d, long double lambda, long double eta) {
  const long double pi = 3.14159265358979323846264338327950288L;
  const long double k = lambda / (4.0L * pi);
  return k * k * std::pow(d, -eta);
}

long double single_user_rate_ref(const cvec& h, long double p, long double c) {
  long double norm_sq = 0.0L;
  for (const auto& v : h) {
    norm_sq += (long double)v.real() * v.real() + (long double)v.imag() * v.imag();
  }
  return std::log2(1.0L + p * norm_sq / c);
}

std::vector<double> sinr_rates_ref(const std::vector<std::vector<cvec>>& h,
                                   const std::vector<std::vector<cvec>>& w,
                                   const std::vector<int>& serving_cell,
                                   const std::vector<std::vector<int>>& cell_users,
                                   double noise_power) {
  const int num_users = static_cast<int>(serving_cell.size());
  const int num_bs = static_cast<int>(h.size());
  std::vector<double> rates(num_users, 0.0);
  for (int k = 0; k < num_users; ++k) {
    const int m = serving_cell[k];
    long double signal = 0.0L, interference = 0.0L;
    for (int bs = 0; bs < num_bs; ++bs) {
      if (h[bs][k].empty()) continue;
      for (std::size_t j = 0; j < w[bs].size(); ++j) {
        // h^H w, accumulated scalar by scalar
        long double re = 0.0L, im = 0.0L;
        for (std::size_t i = 0; i < h[bs][k].size(); ++i) {
          const long double hr = h[bs][k][i].real(), hi = h[bs][k][i].imag();
          const long double wr = w[bs][j][i].real(), wi = w[bs][j][i].imag();
          re += hr * wr + hi * wi;   // conj(h) * w
          im += hr * wi - hi * wr;
        }
        const long double power = re * re + im * im;
        const bool own = (bs == m) && (cell_users[bs][j] == k);
        if (own) {
          signal = power;
        } else {
          interference += power;
        }
      }
    }
    rates[k] = (double)std::log2(1.0L + signal / (interference + (long double)noise_power));
  }
  return rates;
}

std::pair<double, double> mse_monte_carlo(const cvec& h_k, const std::vector<cvec>& w_all, int k,
                                          std::complex<double> u, double c_k, int trials,
                                          std::uint64_t seed) {
  StreamRng rng(seed);
  double mean = 0.0, m2 = 0.0;
  const int num_streams = static_cast<int>(w_all.size());
  for (int t = 1; t <= trials; ++t) {
    std::complex<double> y = 0.0;
    std::complex<double> s_k = 0.0;
    for (int j = 0; j < num_streams; ++j) {
      const std::complex<double> s = rng.cnormal();
      if (j == k) s_k = s;
      std::complex<double> hw = 0.0;
      for (std::size_t i = 0; i < h_k.size(); ++i) hw += std::conj(h_k[i]) * w_all[j][i];
      y += hw * s;
    }
    y += std::sqrt(c_k) * rng.cnormal();
    const double err = std::norm(std::conj(u) * y - s_k);
    const double delta = err - mean;
    mean += delta / t;
    m2 += delta * (err - mean);
  }
  const double var = m2 / (trials - 1);
  return {mean, std::sqrt(var / trials)};
}

bool is_vertex_disjoint(const std::vector<std::pair<int, int>>& edges, int num_vertices) {
  std::vector<int> deg(num_vertices, 0);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices || a == b) return false;
    deg[a]++;
    deg[b]++;
    if (deg[a] > 1 || deg[b] > 1) return false;
  }
  return true;
}

bool is_maximal_matching(const AdjacencyGraph& graph,
                         const std::vector<std::pair<int, int>>& matching) {
  if (!is_vertex_disjoint(matching, graph.num_vertices)) return false;
  std::vector<bool> used(graph.num_vertices, false);
  for (auto [a, b] : matching) {
    if (!graph.adjacent(a, b)) return false;
    used[a] = used[b] = true;
  }
  for (auto [a, b] : graph.edges) {
    if (!used[a] && !used[b]) return false;
  }
  return true;
}

GoldenCase load_golden_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("golden case: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("golden case: parse error: ") + e.what());
  }
  GoldenCase gc;
  try {
    gc.provenance = j.at("provenance").get<std::string>();
    const auto load_matrix = [&](const nlohmann::json& jm) {
      const int rows = jm.at("rows").get<int>();
      const int cols = jm.at("cols").get<int>();
      Eigen::MatrixXcd m(rows, cols);
      const auto& data = jm.at("re_im");
      int idx = 0;
      for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
          m(r, c) = std::complex<double>(data.at(idx).get<double>(), data.at(idx + 1).get<double>());
          idx += 2;
        }
      }
      return m;
    };
    gc.problem.channels = load_matrix(j.at("channels"));
    gc.problem.victims = load_matrix(j.at("victims"));
    const auto wv = j.at("weights").get<std::vector<double>>();
    gc.problem.weights = Eigen::Map<const Eigen::VectorXd>(wv.data(), wv.size());
    const auto lim = j.at("ipc_limits").get<std::vector<double>>();
    gc.problem.ipc_limits = Eigen::Map<const Eigen::VectorXd>(lim.data(), lim.size());
    gc.problem.c_const = j.at("c_const").get<double>();
    gc.problem.p_max = j.at("p_max").get<double>();
    gc.reference_weighted_sum = j.at("reference_weighted_sum").get<double>();
    gc.reference_user_rates = j.at("reference_user_rates").get<std::vector<double>>();
    gc.tolerance_rel = j.value("tolerance_rel", 0.01);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("golden case: missing field: ") + e.what());
  }
  return gc;
}

VerifyReport verify(const GoldenCase& gc, const SolverOptions& opts) {
  const CellSolveResult res = solve_p4(gc.problem, opts);
  VerifyReport rep;
  rep.achieved = res.weighted_sum;
  rep.reference = gc.reference_weighted_sum;
  rep.rel_error = std::abs(rep.achieved - rep.reference) / std::max(1e-12, std::abs(rep.reference));
  rep.pass = rep.rel_error <= gc.tolerance_rel;
  return rep;
}

}  // namespace sixdma::oracle
