#include "sixdma/pso.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sixdma/rng.hpp"

namespace sixdma {

namespace {

double wrap_periodic(double x, const PsoDimension& d) {
  const double range = d.hi - d.lo;
  double r = std::fmod(x - d.lo, range);
  if (r <= 0.0) r += range;
  return d.lo + r;
}

double reflect(double x, double* velocity, const PsoDimension& d) {
  // A couple of passes suffice because velocities are clamped to a fraction
  // of the range.
  for (int guard = 0; guard < 8 && (x < d.lo || x > d.hi); ++guard) {
    if (x < d.lo) x = 2.0 * d.lo - x;
    if (x > d.hi) x = 2.0 * d.hi - x;
    *velocity = -*velocity;
  }
  return std::clamp(x, d.lo, d.hi);
}

}  // namespace

PsoResult pso_minimize(const BatchObjective& objective,
                       const std::function<double(const Eigen::VectorXd&)>& penalty,
                       const std::vector<PsoDimension>& dims, const Eigen::VectorXd& warm_start,
                       const PsoParams& params, std::uint64_t seed) {
  const int dim = static_cast<int>(dims.size());
  const int n = params.swarm_size;
  if (n < 2) throw std::invalid_argument("pso_minimize: swarm_size must be >= 2");
  if (warm_start.size() != dim) throw std::invalid_argument("pso_minimize: warm start dimension");

  StreamRng rng(StreamRng::derive(seed, stream_tag::kPso));
  std::vector<Eigen::VectorXd> x(n, Eigen::VectorXd(dim));
  std::vector<Eigen::VectorXd> vel(n, Eigen::VectorXd(dim));
  Eigen::VectorXd vmax(dim);
  for (int d = 0; d < dim; ++d) vmax(d) = params.velocity_clamp * (dims[d].hi - dims[d].lo);

  for (int d = 0; d < dim; ++d) {
    x[0](d) = dims[d].periodic ? wrap_periodic(warm_start(d), dims[d])
                               : std::clamp(warm_start(d), dims[d].lo, dims[d].hi);
  }
  for (int i = 1; i < n; ++i) {
    for (int d = 0; d < dim; ++d) {
      x[i](d) = dims[d].periodic ? dims[d].lo + (dims[d].hi - dims[d].lo) * (1.0 - rng.uniform())
                                 : rng.uniform(dims[d].lo, dims[d].hi);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) vel[i](d) = rng.uniform(-vmax(d), vmax(d));
  }

  std::vector<Eigen::VectorXd> pbest = x;
  std::vector<double> pbest_val(n, std::numeric_limits<double>::infinity());
  Eigen::VectorXd gbest = x[0];
  double gbest_val = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_feas = x[0];
  double best_feas_val = std::numeric_limits<double>::infinity();
  bool feas_found = false;

  PsoResult res;
  auto evaluate_swarm = [&]() {
    const std::vector<double> vals = objective(x);
    res.evaluations += n;
    for (int i = 0; i < n; ++i) {
      if (vals[i] < pbest_val[i]) {
        pbest_val[i] = vals[i];
        pbest[i] = x[i];
      }
      if (vals[i] < gbest_val) {
        gbest_val = vals[i];
        gbest = x[i];
      }
      if (penalty && penalty(x[i]) == 0.0) {
        if (!feas_found || vals[i] < best_feas_val) {
          best_feas_val = vals[i];
          best_feas = x[i];
          feas_found = true;
        }
      }
    }
  };

  evaluate_swarm();
  res.trace.push_back(gbest_val);

  for (int iter = 0; iter < params.max_iters; ++iter) {
    for (int i = 0; i < n; ++i) {
      for (int d = 0; d < dim; ++d) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double dp = pbest[i](d) - x[i](d);
        double dg = gbest(d) - x[i](d);
        if (dims[d].periodic) {
          const double range = dims[d].hi - dims[d].lo;
          dp = std::remainder(dp, range);
          dg = std::remainder(dg, range);
        }
        double v = params.inertia * vel[i](d) + params.cognitive * r1 * dp + params.social * r2 * dg;
        v = std::clamp(v, -vmax(d), vmax(d));
        double nx = x[i](d) + v;
        if (dims[d].periodic) {
          nx = wrap_periodic(nx, dims[d]);
        } else {
          nx = reflect(nx, &v, dims[d]);
        }
        x[i](d) = nx;
        vel[i](d) = v;
      }
    }
    evaluate_swarm();
    res.trace.push_back(gbest_val);
  }

  if (!penalty) {
    res.best_point = gbest;
    res.best_value = gbest_val;
    res.feasible = true;
  } else if (feas_found) {
    res.best_point = best_feas;
    res.best_value = best_feas_val;
    res.feasible = true;
  } else {
    res.best_point = gbest;
    res.best_value = gbest_val;
    res.feasible = false;
  }
  return res;
}

}  // namespace sixdma
