#include "sixdma/precoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sixdma {

IpcThresholds::IpcThresholds(const AdjacencyGraph& graph, double initial, double floor)
    : graph_(&graph), floor_(floor) {
  if (floor <= 0.0) throw std::invalid_argument("IpcThresholds: floor must be positive");
  values_ = Eigen::MatrixXd::Constant(graph.num_vertices, graph.num_vertices,
                                      std::max(initial, floor));
}

double IpcThresholds::get(int m, int n) const {
  if (!graph_->adjacent(m, n)) throw std::out_of_range("IpcThresholds: pair not adjacent");
  return values_(m, n);
}

void IpcThresholds::set(int m, int n, double value) {
  if (!graph_->adjacent(m, n)) throw std::out_of_range("IpcThresholds: pair not adjacent");
  if (value < floor_) throw std::invalid_argument("IpcThresholds: value below floor");
  values_(m, n) = value;
}

double IpcThresholds::incoming_sum(int m) const {
  double s = 0.0;
  for (int n : graph_->neighbors[m]) s += values_(n, m);
  return s;
}

MmseState mmse_step(const Eigen::MatrixXcd& channels, const Eigen::MatrixXcd& precoders,
                    const Eigen::VectorXd& c_per_user) {
  const int k_users = static_cast<int>(channels.cols());
  const Eigen::MatrixXcd g = channels.adjoint() * precoders;  // g(k, j) = h_k^H w_j
  MmseState st;
  st.u.resize(k_users);
  st.v.resize(k_users);
  st.e.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double denom = g.row(k).squaredNorm() + c_per_user(k);
    st.u(k) = g(k, k) / denom;
    st.e(k) = 1.0 - std::norm(g(k, k)) / denom;
    st.v(k) = 1.0 / st.e(k);
  }
  return st;
}

Eigen::VectorXd dual_ascent_step(const Eigen::VectorXd& lambda, const Eigen::VectorXd& leakage,
                                 const Eigen::VectorXd& limits, const Eigen::VectorXd& step) {
  Eigen::VectorXd out(lambda.size());
  for (int q = 0; q < lambda.size(); ++q) {
    out(q) = std::max(0.0, lambda(q) + step(q) * (leakage(q) / limits(q) - 1.0));
  }
  return out;
}

Eigen::VectorXd dual_ascent_step(const Eigen::VectorXd& lambda, const Eigen::VectorXd& leakage,
                                 const Eigen::VectorXd& limits, double step) {
  return dual_ascent_step(lambda, leakage, limits,
                          Eigen::VectorXd::Constant(lambda.size(), step));
}

namespace {

// Quadratic-form data of one transmit update: minimize sum_k ||.|| with
// w_k = (C + mu I)^-1 b_k subject to the power budget. The eigenbasis makes
// the power curve essentially free to evaluate, so the bisection can run to
// tight tolerance.
struct TransmitSystem {
  Eigen::MatrixXcd c;  // Hermitian PSD, without mu
  Eigen::MatrixXcd b;  // NB x K
  double ridge = 0.0;  // applied instead of mu when mu == 0

  // Lazily computed eigen data.
  mutable bool eig_ready = false;
  mutable Eigen::VectorXd d;
  mutable Eigen::MatrixXcd basis;
  mutable Eigen::MatrixXcd b_proj;

  void ensure_eig() const {
    if (eig_ready) return;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
    d = es.eigenvalues().cwiseMax(0.0);
    basis = es.eigenvectors();
    b_proj = basis.adjoint() * b;
    eig_ready = true;
  }

  double power_at(double mu_eff) const {
    ensure_eig();
    double p = 0.0;
    for (int k = 0; k < b_proj.cols(); ++k) {
      for (int i = 0; i < b_proj.rows(); ++i) {
        const double den = d(i) + mu_eff;
        p += std::norm(b_proj(i, k)) / (den * den);
      }
    }
    return p;
  }

  Eigen::MatrixXcd solve_at(double mu_eff) const {
    ensure_eig();
    Eigen::MatrixXcd w(b.rows(), b.cols());
    for (int k = 0; k < b.cols(); ++k) {
      w.col(k) = basis * (b_proj.col(k).array() / (d.array() + mu_eff)).matrix();
    }
    return w;
  }

  // Cheap path: one Cholesky solve at mu_eff; falls back to the eigenbasis
  // when the factorization is unreliable.
  bool try_llt(double mu_eff, Eigen::MatrixXcd* w, double* power) const {
    Eigen::MatrixXcd a = c;
    a.diagonal().array() += mu_eff;
    Eigen::LLT<Eigen::MatrixXcd> llt(a);
    if (llt.info() != Eigen::Success) return false;
    *w = llt.solve(b);
    *power = w->squaredNorm();
    return std::isfinite(*power);
  }
};

struct PowerSolveOutcome {
  Eigen::MatrixXcd w;
  double mu = 0.0;      // reported multiplier (0 when inactive)
  double mu_eff = 0.0;  // multiplier actually used in the solve
  double power = 0.0;
};

PowerSolveOutcome solve_with_power_budget(const TransmitSystem& sys, double p_max,
                                          double tol_rel) {
  PowerSolveOutcome out;
  if (sys.b.squaredNorm() == 0.0) {
    out.w = Eigen::MatrixXcd::Zero(sys.b.rows(), sys.b.cols());
    out.mu_eff = sys.ridge;
    return out;
  }
  if (sys.try_llt(sys.ridge, &out.w, &out.power) && out.power <= p_max) {
    out.mu = 0.0;
    out.mu_eff = sys.ridge;
    return out;
  }
  if (sys.power_at(sys.ridge) <= p_max) {
    // LLT failed but the constraint is inactive; use the eigenbasis solve.
    out.w = sys.solve_at(sys.ridge);
    out.mu = 0.0;
    out.mu_eff = sys.ridge;
    out.power = out.w.squaredNorm();
    return out;
  }
  // Power constraint active: bisection on the strictly decreasing power
  // curve. The asymptote power ~ ||b||^2 / mu^2 gives an upper bracket.
  double lo = sys.ridge;
  double hi = std::max(std::sqrt(sys.b.squaredNorm() / p_max), sys.ridge * 2 + 1e-300);
  while (sys.power_at(hi) > p_max) hi *= 2.0;
  double mu = hi;
  for (int it = 0; it < 500; ++it) {
    mu = 0.5 * (lo + hi);
    const double p = sys.power_at(mu);
    if (std::abs(p - p_max) <= tol_rel * p_max) break;
    (p > p_max ? lo : hi) = mu;
  }
  out.mu = mu;
  out.mu_eff = mu;
  out.w = sys.solve_at(mu);
  out.power = out.w.squaredNorm();
  return out;
}

TransmitSystem build_system(const Eigen::VectorXd& lambda, const CellProblem& pb,
                            const MmseState& st, double ridge_scale) {
  const int nb = static_cast<int>(pb.channels.rows());
  const int k_users = static_cast<int>(pb.channels.cols());
  TransmitSystem sys;
  sys.b.resize(nb, k_users);
  Eigen::MatrixXcd weighted = pb.channels;
  for (int k = 0; k < k_users; ++k) {
    const double chi = pb.weights(k) * st.v(k) * std::norm(st.u(k));
    weighted.col(k) *= std::sqrt(chi);
    sys.b.col(k) = pb.weights(k) * st.v(k) * st.u(k) * pb.channels.col(k);
  }
  sys.c.noalias() = weighted * weighted.adjoint();
  if (lambda.size() > 0) {
    Eigen::MatrixXcd scaled = pb.victims;
    for (int q = 0; q < lambda.size(); ++q) scaled.col(q) *= std::sqrt(lambda(q));
    sys.c.noalias() += scaled * scaled.adjoint();
  }
  sys.ridge = ridge_scale * std::max(sys.c.real().trace(), 0.0) /
              static_cast<double>(nb);
  return sys;
}

Eigen::VectorXd leakage_of(const Eigen::MatrixXcd& victims, const Eigen::MatrixXcd& w) {
  if (victims.cols() == 0) return Eigen::VectorXd();
  return (victims.adjoint() * w).rowwise().squaredNorm();
}

double max_rel_violation(const Eigen::VectorXd& leakage, const Eigen::VectorXd& limits) {
  double v = 0.0;
  for (int q = 0; q < leakage.size(); ++q) {
    v = std::max(v, leakage(q) / limits(q) - 1.0);
  }
  return v;
}

// Uniform scaling making every cap hold exactly; shaved by one epsilon so
// rounding cannot push a constraint past its limit.
double strict_scale(const Eigen::VectorXd& leakage, const Eigen::VectorXd& limits) {
  double s = 1.0;
  for (int q = 0; q < leakage.size(); ++q) {
    if (leakage(q) > limits(q)) {
      s = std::min(s, std::sqrt(limits(q) / leakage(q)) * (1.0 - 1e-12));
    }
  }
  return s;
}

RateReport rates_from_gram(const Eigen::MatrixXcd& g, const Eigen::VectorXd& weights,
                           double c_const, double scale_sq) {
  RateReport r;
  const int k_users = static_cast<int>(g.rows());
  r.user_rates.resize(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double sig = scale_sq * std::norm(g(k, k));
    const double intf = scale_sq * (g.row(k).squaredNorm() - std::norm(g(k, k)));
    r.user_rates(k) = std::log2(1.0 + sig / (intf + c_const));
    r.weighted_sum += weights(k) * r.user_rates(k);
  }
  return r;
}

}  // namespace

Eigen::MatrixXcd beamformer_solve(const Eigen::VectorXd& lambda, double mu,
                                  const CellProblem& problem, const MmseState& state,
                                  double ridge_scale, double* mu_effective) {
  TransmitSystem sys = build_system(lambda, problem, state, ridge_scale);
  const double mu_eff = (mu > 0.0) ? mu : sys.ridge;
  if (mu_effective) *mu_effective = mu_eff;
  Eigen::MatrixXcd w;
  double power = 0.0;
  if (sys.b.squaredNorm() == 0.0) return Eigen::MatrixXcd::Zero(sys.b.rows(), sys.b.cols());
  if (sys.try_llt(mu_eff, &w, &power)) return w;
  return sys.solve_at(mu_eff);
}

double power_bisection(const Eigen::VectorXd& lambda, const CellProblem& problem,
                       const MmseState& state, double tol_rel, double ridge_scale) {
  TransmitSystem sys = build_system(lambda, problem, state, ridge_scale);
  return solve_with_power_budget(sys, problem.p_max, tol_rel).mu;
}

CellSolveResult solve_p4(const CellProblem& pb, const SolverOptions& opts) {
  const int nb = static_cast<int>(pb.channels.rows());
  const int k_users = static_cast<int>(pb.channels.cols());
  const int q_cons = static_cast<int>(pb.victims.cols());
  if (k_users < 1) throw std::invalid_argument("solve_p4: at least one in-cell user required");
  if (pb.c_const <= 0.0) throw std::invalid_argument("solve_p4: c must be positive");

  // MRT initialization at full power, equally split.
  Eigen::MatrixXcd w(nb, k_users);
  for (int k = 0; k < k_users; ++k) {
    const double nrm = pb.channels.col(k).norm();
    w.col(k) = (nrm > 0.0) ? Eigen::VectorXcd(std::sqrt(pb.p_max / k_users) *
                                              pb.channels.col(k) / nrm)
                           : Eigen::VectorXcd::Zero(nb);
  }

  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(q_cons);
  const Eigen::VectorXd c_vec = Eigen::VectorXd::Constant(k_users, pb.c_const);
  Eigen::VectorXd victim_sq(q_cons);
  for (int q = 0; q < q_cons; ++q) victim_sq(q) = pb.victims.col(q).squaredNorm();

  struct Candidate {
    Eigen::MatrixXcd w;
    double srate = -1.0;
    double viol = std::numeric_limits<double>::infinity();
    double scale = 1.0;
    double srate_scaled = -1.0;
    double mu = 0.0;
    bool valid = false;
  };
  Candidate best;
  auto consider = [&](const Eigen::MatrixXcd& cand, double mu) {
    const Eigen::MatrixXcd g = pb.channels.adjoint() * cand;
    const Eigen::VectorXd leak = leakage_of(pb.victims, cand);
    Candidate c;
    c.w = cand;
    c.mu = mu;
    c.viol = (q_cons > 0) ? max_rel_violation(leak, pb.ipc_limits) : 0.0;
    c.srate = rates_from_gram(g, pb.weights, pb.c_const, 1.0).weighted_sum;
    c.scale = (q_cons > 0) ? strict_scale(leak, pb.ipc_limits) : 1.0;
    c.srate_scaled = rates_from_gram(g, pb.weights, pb.c_const, c.scale * c.scale).weighted_sum;
    c.valid = true;
    if (!best.valid) {
      best = std::move(c);
      return;
    }
    if (opts.strict) {
      if (c.srate_scaled > best.srate_scaled) best = std::move(c);
    } else {
      const bool c_ok = c.viol <= opts.feas_rel_tol;
      const bool b_ok = best.viol <= opts.feas_rel_tol;
      if ((c_ok && (!b_ok || c.srate > best.srate)) || (!c_ok && !b_ok && c.viol < best.viol)) {
        best = std::move(c);
      }
    }
  };

  SolverDiagnostics diag;
  double prev_obj = -std::numeric_limits<double>::infinity();
  bool stopped = false;
  for (int t = 0; t < opts.t_wmmse && !stopped; ++t) {
    diag.iterations = t + 1;
    const MmseState st = mmse_step(pb.channels, w, c_vec);
    TransmitSystem base = build_system(Eigen::VectorXd::Zero(0), pb, st, opts.ridge_scale);
    const double trace_c = base.c.real().trace();

    const int inner = (q_cons > 0) ? opts.t_dual : 1;
    for (int it = 1; it <= inner; ++it) {
      if (q_cons > 0) {
        const Eigen::VectorXd leak = leakage_of(pb.victims, w);
        Eigen::VectorXd step(q_cons);
        for (int q = 0; q < q_cons; ++q) {
          step(q) = (victim_sq(q) > 0.0)
                        ? opts.dual_step0 * trace_c / (nb * victim_sq(q) * std::sqrt(double(it)))
                        : 0.0;
        }
        lambda = dual_ascent_step(lambda, leak, pb.ipc_limits, step);
      }
      TransmitSystem sys = base;
      if (q_cons > 0) {
        Eigen::MatrixXcd scaled = pb.victims;
        for (int q = 0; q < q_cons; ++q) scaled.col(q) *= std::sqrt(lambda(q));
        sys.c.noalias() += scaled * scaled.adjoint();
        sys.eig_ready = false;
      }
      const PowerSolveOutcome sol = solve_with_power_budget(sys, pb.p_max, opts.bisect_tol);
      w = sol.w;
      diag.mu = sol.mu;
      consider(w, sol.mu);
    }

    const double obj =
        rates_from_gram(pb.channels.adjoint() * w, pb.weights, pb.c_const, 1.0).weighted_sum;
    if (opts.record_trace) diag.objective_trace.push_back(obj);
    if (t >= 3 && std::abs(obj - prev_obj) < opts.early_stop_rel * std::max(1.0, std::abs(obj))) {
      diag.converged = true;
      stopped = true;
    }
    prev_obj = obj;
  }

  CellSolveResult res;
  res.diag = diag;
  res.diag.lambda = lambda;
  if (!best.valid) {
    res.precoders = Eigen::MatrixXcd::Zero(nb, k_users);
    res.user_rates = Eigen::VectorXd::Zero(k_users);
    return res;
  }
  const double scale = opts.strict ? best.scale : 1.0;
  res.precoders = scale * best.w;
  const Eigen::MatrixXcd g = pb.channels.adjoint() * best.w;
  const RateReport rep = rates_from_gram(g, pb.weights, pb.c_const, scale * scale);
  res.user_rates = rep.user_rates;
  res.weighted_sum = rep.weighted_sum;
  res.transmit_power = res.precoders.squaredNorm();
  res.diag.scale_factor = scale;
  if (q_cons > 0) {
    const Eigen::VectorXd leak = leakage_of(pb.victims, res.precoders);
    res.diag.max_ipc_residual = max_rel_violation(leak, pb.ipc_limits);
  }
  res.diag.feasible = res.diag.max_ipc_residual <= opts.feas_rel_tol;
  return res;
}

CellSolveResult solve_p3(const Eigen::MatrixXcd& channels, const Eigen::VectorXd& weights,
                         double p_max, double c, const SolverOptions& opts) {
  CellProblem pb;
  pb.channels = channels;
  pb.weights = weights;
  pb.victims = Eigen::MatrixXcd(channels.rows(), 0);
  pb.ipc_limits = Eigen::VectorXd(0);
  pb.c_const = c;
  pb.p_max = p_max;
  return solve_p4(pb, opts);
}

NetworkSolveResult solve_network_wsr(const NetworkScenario& sc, const ChannelSample& sample,
                                     const SolverOptions& opts) {
  const int m_cells = sc.num_cells();
  const int nb = sc.antennas_per_bs();
  const int k_all = sc.num_users();

  // Per BS: channels toward every relevant user, in-cell columns flagged.
  struct BsData {
    std::vector<int> relevant;  // global user ids
    std::vector<int> in_cell;   // positions within `relevant` of own users
    Eigen::MatrixXcd h;         // NB x |relevant|
  };
  std::vector<BsData> bs(m_cells);
  for (int m = 0; m < m_cells; ++m) {
    for (int k = 0; k < k_all; ++k) {
      if (sample.relevant(m, k)) bs[m].relevant.push_back(k);
    }
    bs[m].h.resize(nb, static_cast<int>(bs[m].relevant.size()));
    for (std::size_t i = 0; i < bs[m].relevant.size(); ++i) {
      const int k = bs[m].relevant[i];
      bs[m].h.col(i) = sample.h[m][k];
      if (sc.users[k].cell == m) bs[m].in_cell.push_back(static_cast<int>(i));
    }
  }

  std::vector<Eigen::MatrixXcd> w(m_cells);
  for (int m = 0; m < m_cells; ++m) {
    const int k_m = static_cast<int>(bs[m].in_cell.size());
    w[m].resize(nb, k_m);
    for (int j = 0; j < k_m; ++j) {
      const Eigen::VectorXcd h = bs[m].h.col(bs[m].in_cell[j]);
      const double nrm = h.norm();
      w[m].col(j) = (nrm > 0.0) ? Eigen::VectorXcd(std::sqrt(sc.p_max / k_m) * h / nrm)
                                : Eigen::VectorXcd::Zero(nb);
    }
  }

  // signal / total received power per user under the current precoders
  auto evaluate = [&](Eigen::VectorXd* signal, Eigen::VectorXd* total,
                      Eigen::VectorXcd* direct) {
    signal->setZero(k_all);
    total->setZero(k_all);
    direct->setZero(k_all);
    for (int m = 0; m < m_cells; ++m) {
      const Eigen::MatrixXcd g = bs[m].h.adjoint() * w[m];
      for (std::size_t i = 0; i < bs[m].relevant.size(); ++i) {
        const int k = bs[m].relevant[i];
        (*total)(k) += g.row(static_cast<int>(i)).squaredNorm();
        if (sc.users[k].cell == m) {
          // locate k's own column
          for (std::size_t j = 0; j < bs[m].in_cell.size(); ++j) {
            if (bs[m].relevant[bs[m].in_cell[j]] == k) {
              (*signal)(k) = std::norm(g(static_cast<int>(i), static_cast<int>(j)));
              (*direct)(k) = g(static_cast<int>(i), static_cast<int>(j));
              break;
            }
          }
        }
      }
    }
  };

  auto wsr_of = [&](const Eigen::VectorXd& signal, const Eigen::VectorXd& total) {
    double s = 0.0;
    for (int k = 0; k < k_all; ++k) {
      const double gamma = signal(k) / (total(k) - signal(k) + sc.noise_power);
      s += sc.users[k].weight * std::log2(1.0 + gamma);
    }
    return s;
  };

  NetworkSolveResult res;
  Eigen::VectorXd signal(k_all), total(k_all);
  Eigen::VectorXcd direct(k_all);
  double prev = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < opts.t_wmmse; ++t) {
    res.iterations = t + 1;
    evaluate(&signal, &total, &direct);
    Eigen::VectorXcd u(k_all);
    Eigen::VectorXd v(k_all);
    for (int k = 0; k < k_all; ++k) {
      const double denom = total(k) + sc.noise_power;
      u(k) = direct(k) / denom;
      v(k) = 1.0 / (1.0 - signal(k) / denom);
    }
    for (int m = 0; m < m_cells; ++m) {
      const int k_m = static_cast<int>(bs[m].in_cell.size());
      TransmitSystem sys;
      Eigen::MatrixXcd weighted = bs[m].h;
      for (std::size_t i = 0; i < bs[m].relevant.size(); ++i) {
        const int k = bs[m].relevant[i];
        weighted.col(i) *= std::sqrt(sc.users[k].weight * v(k) * std::norm(u(k)));
      }
      sys.c.noalias() = weighted * weighted.adjoint();
      sys.b.resize(nb, k_m);
      for (int j = 0; j < k_m; ++j) {
        const int k = bs[m].relevant[bs[m].in_cell[j]];
        sys.b.col(j) = sc.users[k].weight * v(k) * u(k) * bs[m].h.col(bs[m].in_cell[j]);
      }
      sys.ridge = opts.ridge_scale * std::max(sys.c.real().trace(), 0.0) / nb;
      w[m] = solve_with_power_budget(sys, sc.p_max, opts.bisect_tol).w;
    }
    evaluate(&signal, &total, &direct);
    const double obj = wsr_of(signal, total);
    if (opts.record_trace) res.trace.push_back(obj);
    if (t >= 3 && std::abs(obj - prev) < opts.early_stop_rel * std::max(1.0, std::abs(obj))) {
      res.converged = true;
      break;
    }
    prev = obj;
  }

  evaluate(&signal, &total, &direct);
  res.user_rates.resize(k_all);
  for (int k = 0; k < k_all; ++k) {
    const double gamma = signal(k) / (total(k) - signal(k) + sc.noise_power);
    res.user_rates(k) = std::log2(1.0 + gamma);
    res.weighted_sum += sc.users[k].weight * res.user_rates(k);
  }
  res.precoders.per_bs = w;
  res.precoders.power.resize(m_cells);
  for (int m = 0; m < m_cells; ++m) res.precoders.power[m] = w[m].squaredNorm();
  return res;
}

RateReport actual_rates(const PrecoderSet& precoders, const ChannelSample& sample,
                        const NetworkScenario& sc) {
  const int k_all = sc.num_users();
  RateReport r;
  r.user_rates.resize(k_all);
  for (int k = 0; k < k_all; ++k) {
    const int m = sc.users[k].cell;
    const auto own = sc.cell_users(m);
    const Eigen::VectorXcd g_own = precoders.per_bs[m].adjoint() * sample.h[m][k];
    int col = 0;
    while (own[col] != k) ++col;
    const double sig = std::norm(g_own(col));
    double intf = g_own.squaredNorm() - sig;
    for (int n = 0; n < sc.num_cells(); ++n) {
      if (n == m || !sample.relevant(n, k)) continue;
      intf += (precoders.per_bs[n].adjoint() * sample.h[n][k]).squaredNorm();
    }
    r.user_rates(k) = std::log2(1.0 + sig / (intf + sc.noise_power));
    r.weighted_sum += sc.users[k].weight * r.user_rates(k);
  }
  return r;
}

RateReport surrogate_rates(const Eigen::MatrixXcd& precoders, const Eigen::MatrixXcd& channels,
                           const Eigen::VectorXd& weights, double c_const) {
  return rates_from_gram(channels.adjoint() * precoders, weights, c_const, 1.0);
}

}  // namespace sixdma
