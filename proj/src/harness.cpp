#include "sixdma/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "sixdma/parallel.hpp"
#include "sixdma/rng.hpp"

namespace sixdma {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const std::set<std::string>& allowed_override_keys() {
  static const std::set<std::string> keys = {
      "S",          "eval_samples", "T_max",     "T_ipc",     "N_g",
      "eps_tol",    "sigma_floor",  "N_sw",      "T_pso",     "kappa",
      "T_wmmse",    "T_dual",       "bisect_tol", "dual_step0", "feas_rel_tol",
      "inertia",    "cognitive",    "social",    "velocity_clamp", "threads"};
  return keys;
}

void apply_overrides(ExperimentConfig& cfg, const json& ov) {
  for (const auto& [key, value] : ov.items()) {
    if (!allowed_override_keys().count(key)) {
      std::string allowed;
      for (const auto& k : allowed_override_keys()) allowed += k + " ";
      throw std::invalid_argument("config: unknown override key '" + key +
                                  "'; allowed keys: " + allowed);
    }
    try {
      if (key == "S") cfg.saa_samples = value.get<int>();
      else if (key == "eval_samples") cfg.eval_samples = value.get<int>();
      else if (key == "T_max") cfg.t_max = value.get<int>();
      else if (key == "T_ipc") cfg.t_ipc = value.get<int>();
      else if (key == "N_g") cfg.n_grid = value.get<int>();
      else if (key == "eps_tol") cfg.eps_tol = value.get<double>();
      else if (key == "sigma_floor") cfg.sigma_floor = value.get<double>();
      else if (key == "N_sw") cfg.n_sw = value.get<int>();
      else if (key == "T_pso") cfg.t_pso = value.get<int>();
      else if (key == "kappa") cfg.kappa = value.get<double>();
      else if (key == "T_wmmse") cfg.t_wmmse = value.get<int>();
      else if (key == "T_dual") cfg.t_dual = value.get<int>();
      else if (key == "bisect_tol") cfg.bisect_tol = value.get<double>();
      else if (key == "dual_step0") cfg.dual_step0 = value.get<double>();
      else if (key == "feas_rel_tol") cfg.feas_rel_tol = value.get<double>();
      else if (key == "inertia") cfg.inertia = value.get<double>();
      else if (key == "cognitive") cfg.cognitive = value.get<double>();
      else if (key == "social") cfg.social = value.get<double>();
      else if (key == "velocity_clamp") cfg.velocity_clamp = value.get<double>();
      else if (key == "threads") cfg.threads = value.get<int>();
    } catch (const json::exception& e) {
      throw std::invalid_argument("config: override '" + key + "' has the wrong type: " +
                                  e.what());
    }
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig cfg;
  if (j.contains("scenario")) {
    if (j["scenario"].is_string()) {
      cfg.scenario_ref = j["scenario"].get<std::string>();
    } else {
      cfg.scenario_inline = j["scenario"].dump();
    }
  }
  if (j.contains("scheme")) cfg.scheme = scheme_from_name(j["scheme"].get<std::string>());
  if (j.contains("seeds")) {
    cfg.seeds.clear();
    for (const auto& s : j["seeds"]) cfg.seeds.push_back(s.get<int>());
  }
  if (cfg.seeds.empty()) throw std::invalid_argument("config: at least one seed required");
  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("strict")) cfg.strict = j["strict"].get<bool>();
  if (j.contains("full_scale")) cfg.full_scale = j["full_scale"].get<bool>();
  if (j.contains("sigma_const")) cfg.sigma_const = j["sigma_const"].get<double>();
  if (cfg.full_scale) {
    cfg.saa_samples = 100;
    cfg.eval_samples = 100;
    cfg.t_pso = 60;
    cfg.t_max = 5;
  }
  if (j.contains("overrides")) apply_overrides(cfg, j["overrides"]);
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> top = {"scenario", "scheme", "seeds",       "out_dir",
                                              "strict",   "full_scale", "sigma_const", "overrides"};
    if (!top.count(key)) throw std::invalid_argument("config: unknown top-level key '" + key + "'");
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["scenario"] = scenario_inline.empty() ? json(scenario_ref) : json::parse(scenario_inline);
  j["scheme"] = scheme_name(scheme);
  j["seeds"] = seeds;
  j["out_dir"] = out_dir;
  j["strict"] = strict;
  j["full_scale"] = full_scale;
  j["sigma_const"] = sigma_const;
  j["overrides"] = {
      {"S", saa_samples},   {"eval_samples", eval_samples},
      {"T_max", t_max},     {"T_ipc", t_ipc},
      {"N_g", n_grid},      {"eps_tol", eps_tol},
      {"sigma_floor", sigma_floor}, {"N_sw", n_sw},
      {"T_pso", t_pso},     {"kappa", kappa},
      {"T_wmmse", t_wmmse}, {"T_dual", t_dual},
      {"bisect_tol", bisect_tol}, {"dual_step0", dual_step0},
      {"feas_rel_tol", feas_rel_tol}, {"inertia", inertia},
      {"cognitive", cognitive}, {"social", social},
      {"velocity_clamp", velocity_clamp}, {"threads", threads}};
  return j.dump(2);
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string text = to_json();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

NetworkScenario ExperimentConfig::resolve_scenario() const {
  if (!scenario_inline.empty()) return NetworkScenario::from_json(scenario_inline);
  if (scenario_ref == "high_ici" || scenario_ref == "medium_ici") return build_setup(scenario_ref);
  if (scenario_ref.rfind("lattice_", 0) == 0) {
    return build_lattice(std::stoi(scenario_ref.substr(8)));
  }
  return NetworkScenario::load(scenario_ref);
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions s;
  s.t_wmmse = t_wmmse;
  s.t_dual = t_dual;
  s.bisect_tol = bisect_tol;
  s.dual_step0 = dual_step0;
  s.feas_rel_tol = feas_rel_tol;
  s.strict = strict;
  return s;
}

PsoParams ExperimentConfig::pso_params() const {
  PsoParams p;
  p.swarm_size = n_sw;
  p.max_iters = t_pso;
  p.inertia = inertia;
  p.cognitive = cognitive;
  p.social = social;
  p.velocity_clamp = velocity_clamp;
  p.kappa = kappa;
  return p;
}

AoOptions ExperimentConfig::ao_options() const {
  AoOptions ao;
  ao.t_max = t_max;
  ao.t_ipc = t_ipc;
  ao.n_grid = n_grid;
  ao.eps_tol = eps_tol;
  ao.sigma_floor = sigma_floor;
  ao.saa_samples = saa_samples;
  ao.eval_samples = eval_samples;
  ao.pso = pso_params();
  ao.solver = solver_options();
  ao.eval_solver = solver_options();
  ao.eval_solver.strict = true;  // reported numbers are feasibility-clean
  return ao;
}

CentralizedOptions ExperimentConfig::central_options() const {
  CentralizedOptions c;
  c.saa_samples = saa_samples;
  c.pso = pso_params();
  c.kappa = kappa;
  c.solver = solver_options();
  return c;
}

SchemeOptions ExperimentConfig::scheme_options() const {
  SchemeOptions o;
  o.scheme = scheme;
  o.ao = ao_options();
  o.central = central_options();
  o.sigma_const = sigma_const;
  return o;
}

std::string summary_csv_text(const std::vector<SummaryRow>& rows, int num_cells) {
  std::ostringstream out;
  out << "iteration,surrogate_sum,actual_sum";
  for (int m = 0; m < num_cells; ++m) out << ",cell" << m + 1 << "_actual";
  for (int m = 0; m < num_cells; ++m) out << ",cell" << m + 1 << "_surrogate";
  out << ",messages,scalars\n";
  for (const auto& r : rows) {
    out << r.iteration << "," << fmt_double(r.surrogate_sum) << "," << fmt_double(r.actual_sum);
    for (int m = 0; m < num_cells; ++m) {
      out << "," << (m < (int)r.cell_actual.size() ? fmt_double(r.cell_actual[m]) : "");
    }
    for (int m = 0; m < num_cells; ++m) {
      out << "," << (m < (int)r.cell_surrogate.size() ? fmt_double(r.cell_surrogate[m]) : "");
    }
    out << "," << r.messages << "," << r.scalars << "\n";
  }
  return out.str();
}

namespace {

json pairwise_to_json(const PairwiseRecord& p) {
  return json{{"event", "ipc_pairwise"},
              {"t", p.t},
              {"tau", p.tau},
              {"pair", {p.m, p.n}},
              {"stage1_candidates", p.stage1_candidates},
              {"stage1_utilities", p.stage1_utilities},
              {"stage2_candidates", p.stage2_candidates},
              {"stage2_utilities", p.stage2_utilities},
              {"phi_cur", p.phi_cur},
              {"phi_new", p.phi_new},
              {"accepted", p.accepted},
              {"sigma_mn_before", p.sigma_mn_before},
              {"sigma_nm_before", p.sigma_nm_before},
              {"sigma_mn_after", p.sigma_mn_after},
              {"sigma_nm_after", p.sigma_nm_after}};
}

json matching_to_json(const MatchingRecord& m) {
  json edges = json::array();
  for (auto [a, b] : m.edges) edges.push_back({a, b});
  return json{{"event", "matching"}, {"t", m.t}, {"tau", m.tau}, {"edges", edges}};
}

json rotation_to_json(const RotationRecord& r) {
  return json{{"event", "rotation"},      {"t", r.t},
              {"cell", r.cell},           {"rhat_before", r.rhat_before},
              {"rhat_after", r.rhat_after}, {"z_after", r.z_after}};
}

json eval_to_json(const EvalRecord& e) {
  return json{{"event", "evaluation"},
              {"t", e.t},
              {"surrogate_sum", e.surrogate_sum},
              {"actual_sum", e.actual_sum},
              {"cell_actual", e.cell_actual},
              {"cell_surrogate", e.cell_surrogate},
              {"messages", e.messages},
              {"scalars", e.scalars}};
}

json bus_to_json(const BusMessage& b) {
  const char* kind = b.kind == BusMessage::Kind::CandidateThreshold ? "candidate-threshold"
                     : b.kind == BusMessage::Kind::UtilityScalar    ? "utility-scalar"
                                                                    : "decision";
  return json{{"event", "msg"}, {"t", b.t},       {"tau", b.tau},      {"from", b.from},
              {"to", b.to},     {"kind", kind},   {"scalars", b.scalars}};
}

}  // namespace

std::string trace_jsonl_text(const CoordinationTrace& trace) {
  std::ostringstream out;
  for (const auto& m : trace.matchings) out << matching_to_json(m) << "\n";
  for (const auto& p : trace.pairwise) out << pairwise_to_json(p) << "\n";
  for (const auto& r : trace.rotations) out << rotation_to_json(r) << "\n";
  for (const auto& e : trace.evals) out << eval_to_json(e) << "\n";
  for (const auto& b : trace.bus.ledger()) out << bus_to_json(b) << "\n";
  return out.str();
}

std::vector<CheckResult> validate_trace(const NetworkScenario& scenario,
                                        const CoordinationTrace& trace,
                                        const IpcThresholds& final_sigma, double sigma_initial,
                                        double eps_tol, double sigma_floor) {
  std::vector<CheckResult> checks;
  auto add = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({name, pass, detail});
  };

  bool rot_ok = true;
  std::string rot_detail;
  for (const auto& r : trace.rotations) {
    if (r.rhat_after < r.rhat_before - 1e-9) {
      rot_ok = false;
      rot_detail = "t=" + std::to_string(r.t) + " cell=" + std::to_string(r.cell) +
                   " before=" + fmt_double(r.rhat_before) + " after=" + fmt_double(r.rhat_after);
      break;
    }
  }
  add("rotation_steps_nondecreasing", rot_ok, rot_detail);

  bool gain_ok = true;
  std::string gain_detail;
  for (const auto& p : trace.pairwise) {
    if (p.accepted && !(p.phi_new > p.phi_cur + eps_tol)) {
      gain_ok = false;
      gain_detail = "t=" + std::to_string(p.t) + " tau=" + std::to_string(p.tau);
      break;
    }
  }
  add("accepted_updates_exceed_tolerance", gain_ok, gain_detail);

  // Replay the accepted updates: thresholds must stay at/above the floor and
  // unmatched entries must be bit-identical round to round.
  bool replay_ok = true, floor_ok = true;
  std::string replay_detail;
  std::map<std::pair<int, int>, double> state;
  for (auto [a, b] : scenario.graph.edges) {
    state[{a, b}] = sigma_initial;
    state[{b, a}] = sigma_initial;
  }
  for (const auto& p : trace.pairwise) {
    if (std::abs(state[{p.m, p.n}] - p.sigma_mn_before) > 0 ||
        std::abs(state[{p.n, p.m}] - p.sigma_nm_before) > 0) {
      replay_ok = false;
      replay_detail = "pairwise record does not match replayed state";
      break;
    }
    state[{p.m, p.n}] = p.sigma_mn_after;
    state[{p.n, p.m}] = p.sigma_nm_after;
    if (p.sigma_mn_after < sigma_floor || p.sigma_nm_after < sigma_floor) floor_ok = false;
  }
  if (replay_ok) {
    for (auto& [pair, value] : state) {
      if (value != final_sigma.get(pair.first, pair.second)) {
        replay_ok = false;
        replay_detail = "final thresholds do not match replayed state";
        break;
      }
    }
  }
  add("threshold_replay_consistent", replay_ok, replay_detail);
  add("thresholds_respect_floor", floor_ok, "");

  // Bus discipline: per pairwise search the ledger must contain exactly the
  // candidate/utility/decision scalars of the two stages and nothing else.
  long expected_msgs = 0, expected_scalars = 0;
  for (const auto& p : trace.pairwise) {
    const long c1 = static_cast<long>(p.stage1_candidates.size());
    const long c2 = static_cast<long>(p.stage2_candidates.size());
    expected_msgs += 3 * (c1 + c2) + 2;
    expected_scalars += 3 * (c1 + c2) + 2;
  }
  const bool bus_ok = trace.bus.total_messages() == expected_msgs &&
                      trace.bus.total_scalars() == expected_scalars;
  add("bus_ledger_matches_grid_sizes", bus_ok,
      "messages=" + std::to_string(trace.bus.total_messages()) +
          " expected=" + std::to_string(expected_msgs));

  return checks;
}

namespace {

json checkpoint_json(const AoResult& partial, int t_completed,
                     const NetworkScenario& scenario, std::uint64_t config_hash) {
  json j;
  j["t_completed"] = t_completed;
  j["config_hash"] = config_hash;
  json sigma = json::array();
  for (auto [a, b] : scenario.graph.edges) {
    sigma.push_back({a, b, partial.sigma.get(a, b)});
    sigma.push_back({b, a, partial.sigma.get(b, a)});
  }
  j["sigma"] = sigma;
  json z = json::array();
  for (const auto& zm : partial.rotations) {
    const Eigen::VectorXd enc = encode_rotation(zm);
    z.push_back(std::vector<double>(enc.data(), enc.data() + enc.size()));
  }
  j["z"] = z;
  return j;
}

struct IncrementalWriter {
  std::ofstream trace, summary, timings;
  std::size_t matchings = 0, pairwise = 0, rotations = 0, evals = 0, bus = 0;
  int num_cells = 0;

  void flush_new(const CoordinationTrace& tr) {
    for (; matchings < tr.matchings.size(); ++matchings) {
      trace << matching_to_json(tr.matchings[matchings]) << "\n";
    }
    for (; pairwise < tr.pairwise.size(); ++pairwise) {
      trace << pairwise_to_json(tr.pairwise[pairwise]) << "\n";
      timings << "ipc," << tr.pairwise[pairwise].t << "," << tr.pairwise[pairwise].m << ","
              << fmt_double(tr.pairwise[pairwise].wall_seconds) << "\n";
    }
    for (; rotations < tr.rotations.size(); ++rotations) {
      trace << rotation_to_json(tr.rotations[rotations]) << "\n";
      timings << "rotation," << tr.rotations[rotations].t << "," << tr.rotations[rotations].cell
              << "," << fmt_double(tr.rotations[rotations].wall_seconds) << "\n";
    }
    for (; bus < tr.bus.ledger().size(); ++bus) {
      trace << bus_to_json(tr.bus.ledger()[bus]) << "\n";
    }
    for (; evals < tr.evals.size(); ++evals) {
      const auto& e = tr.evals[evals];
      trace << eval_to_json(e) << "\n";
      SummaryRow row{e.t,           e.surrogate_sum, e.actual_sum, e.cell_actual,
                     e.cell_surrogate, e.messages,   e.scalars};
      std::string text = summary_csv_text({row}, num_cells);
      summary << text.substr(text.find('\n') + 1);  // strip header
      timings << "evaluation," << e.t << ",-1," << fmt_double(e.wall_seconds) << "\n";
    }
    trace.flush();
    summary.flush();
    timings.flush();
  }
};

}  // namespace

RunPaths run_experiment(const ExperimentConfig& config, int seed) {
  const NetworkScenario scenario = config.resolve_scenario();
  set_parallel_threads(config.threads);

  RunPaths paths;
  const fs::path dir = fs::path(config.out_dir) / scheme_name(config.scheme) /
                       ("seed_" + std::to_string(seed));
  fs::create_directories(dir);
  paths.dir = dir.string();
  paths.config_json = (dir / "config.json").string();
  paths.trace_jsonl = (dir / "trace.jsonl").string();
  paths.summary_csv = (dir / "summary.csv").string();
  paths.timings_csv = (dir / "timings.csv").string();
  paths.checkpoint_json = (dir / "checkpoint.json").string();
  paths.report_json = (dir / "report.json").string();

  {
    std::ofstream out(paths.config_json);
    json snap = json::parse(config.to_json());
    snap["seed"] = seed;
    snap["scenario_name"] = scenario.name;
    out << snap.dump(2) << "\n";
  }

  SchemeOptions opts = config.scheme_options();
  const std::uint64_t cfg_hash = config.hash();

  if (config.scheme == Scheme::Centralized || config.scheme == Scheme::CentralizedFpa) {
    const SchemeResult res = run_scheme(scenario, opts, static_cast<std::uint64_t>(seed));
    std::ofstream trace(paths.trace_jsonl);
    for (std::size_t i = 0; i < res.central.trace.size(); ++i) {
      trace << json{{"event", "pso_iteration"},
                    {"iteration", i},
                    {"best_objective", res.central.trace[i]}}
            << "\n";
    }
    trace << json{{"event", "final"},
                  {"jhat", res.central.jhat},
                  {"eval_set_value", res.final_actual}}
          << "\n";
    std::ofstream summary(paths.summary_csv);
    summary << summary_csv_text(res.rows, scenario.num_cells());
    std::ofstream timings(paths.timings_csv);
    timings << "kind,t,cell,seconds\n";
    for (std::size_t i = 0; i < res.central.eval_seconds.size(); ++i) {
      timings << "central_eval," << i << ",-1," << fmt_double(res.central.eval_seconds[i])
              << "\n";
    }
    std::ofstream report(paths.report_json);
    json rep;
    rep["checks"] = json::array();
    bool monotone = true;
    for (std::size_t i = 1; i < res.central.trace.size(); ++i) {
      if (res.central.trace[i] > res.central.trace[i - 1] + 1e-12) monotone = false;
    }
    rep["checks"].push_back(
        {{"name", "pso_best_trace_nonincreasing"}, {"pass", monotone}, {"detail", ""}});
    rep["final_actual"] = res.final_actual;
    report << rep.dump(2) << "\n";
    return paths;
  }

  // AO-style schemes run through ao_run with incremental persistence.
  AoOptions ao = opts.ao;
  double sigma_init = std::max(scenario.noise_power, ao.sigma_floor);
  switch (config.scheme) {
    case Scheme::RotationOnly: ao.coordinate_ipc = false; ao.use_ipc = false; break;
    case Scheme::IpcOnly: ao.optimize_rotation = false; break;
    case Scheme::Fpa:
      ao.coordinate_ipc = false;
      ao.optimize_rotation = false;
      ao.use_ipc = false;
      ao.t_max = 0;
      break;
    case Scheme::FixedIpc:
      ao.coordinate_ipc = false;
      ao.sigma_floor = std::min(ao.sigma_floor, config.sigma_const);
      sigma_init = config.sigma_const;
      break;
    default: break;
  }

  std::vector<BsRotation> z0(scenario.num_cells());
  for (auto& zm : z0) zm = uniform_initial_rotation(scenario.surfaces_per_bs, scenario.geometry);
  IpcThresholds sigma0(scenario.graph, sigma_init, ao.sigma_floor);

  bool resumed = false;
  if (fs::exists(paths.checkpoint_json)) {
    std::ifstream in(paths.checkpoint_json);
    json ck = json::parse(in);
    if (ck.value("config_hash", std::uint64_t(0)) == cfg_hash &&
        ck.value("t_completed", -1) >= 0) {
      ao.start_iteration = ck["t_completed"].get<int>();
      for (const auto& entry : ck["sigma"]) {
        sigma0.set(entry.at(0).get<int>(), entry.at(1).get<int>(), entry.at(2).get<double>());
      }
      for (int m = 0; m < scenario.num_cells(); ++m) {
        const auto vals = ck["z"][m].get<std::vector<double>>();
        z0[m] = decode_rotation(Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size()));
      }
      resumed = true;
    }
  }

  IncrementalWriter writer;
  writer.num_cells = scenario.num_cells();
  const auto mode = resumed ? std::ios::app : std::ios::trunc;
  writer.trace.open(paths.trace_jsonl, mode);
  writer.summary.open(paths.summary_csv, mode);
  writer.timings.open(paths.timings_csv, mode);
  if (!resumed) {
    const std::string header = summary_csv_text({}, scenario.num_cells());
    writer.summary << header;
    writer.timings << "kind,t,cell,seconds\n";
  }

  ao.on_iteration = [&](const AoResult& partial, int t_completed) {
    writer.flush_new(partial.trace);
    std::ofstream ck(paths.checkpoint_json);
    ck << checkpoint_json(partial, t_completed, scenario, cfg_hash).dump() << "\n";
  };

  const AoResult result =
      ao_run(scenario, z0, sigma0, ao, static_cast<std::uint64_t>(seed));
  writer.flush_new(result.trace);

  {
    std::ofstream ck(paths.checkpoint_json);
    ck << checkpoint_json(result, ao.t_max, scenario, cfg_hash).dump() << "\n";
  }
  {
    const auto checks =
        validate_trace(scenario, result.trace, result.sigma, sigma_init, ao.eps_tol,
                       ao.sigma_floor);
    json rep;
    rep["checks"] = json::array();
    bool all = true;
    for (const auto& c : checks) {
      rep["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
      all = all && c.pass;
    }
    rep["all_pass"] = all;
    if (!result.trace.evals.empty()) {
      rep["final_actual"] = result.trace.evals.back().actual_sum;
    }
    std::ofstream report(paths.report_json);
    report << rep.dump(2) << "\n";
  }
  return paths;
}

std::vector<RunPaths> run_experiment_all_seeds(const ExperimentConfig& config) {
  std::vector<RunPaths> out;
  for (int seed : config.seeds) out.push_back(run_experiment(config, seed));
  return out;
}

std::vector<SweepPoint> sweep_fixed_ipc(const ExperimentConfig& config,
                                        const std::vector<double>& sigma_values) {
  const NetworkScenario scenario = config.resolve_scenario();
  set_parallel_threads(config.threads);
  std::vector<SweepPoint> points;
  for (double sigma : sigma_values) {
    for (int seed : config.seeds) {
      SchemeOptions opts = config.scheme_options();
      opts.scheme = Scheme::FixedIpc;
      opts.sigma_const = sigma;
      const SchemeResult res = run_scheme(scenario, opts, static_cast<std::uint64_t>(seed));
      SweepPoint p;
      p.sigma_const = sigma;
      p.seed = seed;
      p.utility = res.final_actual;
      p.messages = res.rows.empty() ? 0 : res.rows.back().messages;
      points.push_back(p);
    }
  }
  fs::create_directories(config.out_dir);
  std::ofstream out(fs::path(config.out_dir) / "sweep_fixed_ipc.csv");
  out << "sigma_const,seed,utility,messages\n";
  for (const auto& p : points) {
    out << fmt_double(p.sigma_const) << "," << p.seed << "," << fmt_double(p.utility) << ","
        << p.messages << "\n";
  }
  return points;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<ScalabilityPoint> scalability_run(const ExperimentConfig& config,
                                              const std::vector<int>& cell_counts) {
  set_parallel_threads(config.threads);
  std::vector<ScalabilityPoint> points;
  for (int m : cell_counts) {
    const NetworkScenario scenario = build_lattice(m);
    for (int seed : config.seeds) {
      {
        SchemeOptions opts = config.scheme_options();
        opts.scheme = Scheme::Proposed;
        const SchemeResult res = run_scheme(scenario, opts, static_cast<std::uint64_t>(seed));
        ScalabilityPoint p;
        p.num_cells = m;
        p.scheme = "proposed";
        p.seed = seed;
        p.value = res.final_actual;
        p.per_bs_iter_median_s = median(res.per_bs_iteration_seconds);
        points.push_back(p);
      }
      {
        SchemeOptions opts = config.scheme_options();
        opts.scheme = Scheme::Centralized;
        const SchemeResult res = run_scheme(scenario, opts, static_cast<std::uint64_t>(seed));
        ScalabilityPoint p;
        p.num_cells = m;
        p.scheme = "centralized";
        p.seed = seed;
        p.value = res.final_actual;
        p.central_eval_median_s = median(res.central.eval_seconds);
        points.push_back(p);
      }
    }
  }
  fs::create_directories(config.out_dir);
  std::ofstream out(fs::path(config.out_dir) / "scalability.csv");
  out << "cells,scheme,seed,value,per_bs_iter_median_s,central_eval_median_s\n";
  for (const auto& p : points) {
    out << p.num_cells << "," << p.scheme << "," << p.seed << "," << fmt_double(p.value) << ","
        << fmt_double(p.per_bs_iter_median_s) << "," << fmt_double(p.central_eval_median_s)
        << "\n";
  }
  return points;
}

}  // namespace sixdma
