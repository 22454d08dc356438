#include "rcurc_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcurc/rcurc.hpp"

namespace rcurc_cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

/// Pipeline stage named in error diagnostics ("error: stage=<stage>: ...").
std::string g_stage = "startup";
void set_stage(const char* s) { g_stage = s; }

// ---------------------------------------------------------------------------
// Experiment configuration

struct ProblemSpec {
  bool synthetic = true;
  std::size_t n1 = 100, n2 = 100, rank = 3;
  double alpha = 0.1;
  double amp = 10.0;
  std::string y_path;       ///< input matrix when not synthetic
  std::string x_true_path;  ///< optional ground truth for metrics
};

struct SamplingSpec {
  double row_frac = 0.3, col_frac = 0.3, p_row = 0.25, p_col = 0.25;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t repeats = 1;
  ProblemSpec problem;
  SamplingSpec sampling;
  rcurc::SolverConfig solver;  ///< solver.rank == 0 means "use problem.rank"
  std::string out_dir = ".";
  std::optional<double> peak;  ///< PSNR peak; empty = auto
  bool strict = false;
};

std::optional<double> parse_peak(const std::string& s) {
  if (s == "auto") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !(v > 0.0)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw rcurc::ArgumentError("peak must be a positive number or 'auto'");
  }
}

void apply_config_file(const fs::path& path, RunConfig& rc) {
  set_stage("config");
  std::ifstream is(path);
  if (!is) throw rcurc::IoError("cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw rcurc::FormatError(path.string() + ": " + e.what());
  }
  try {
    if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("repeats")) rc.repeats = j["repeats"].get<std::size_t>();
    if (j.contains("outputs")) rc.out_dir = j["outputs"].get<std::string>();
    if (j.contains("strict")) rc.strict = j["strict"].get<bool>();
    if (j.contains("peak")) {
      if (j["peak"].is_string())
        rc.peak = parse_peak(j["peak"].get<std::string>());
      else
        rc.peak = j["peak"].get<double>();
    }
    if (j.contains("problem")) {
      const json& p = j["problem"];
      if (p.contains("y")) {
        rc.problem.synthetic = false;
        rc.problem.y_path = p["y"].get<std::string>();
        if (p.contains("x_true"))
          rc.problem.x_true_path = p["x_true"].get<std::string>();
      }
      if (p.contains("n1")) rc.problem.n1 = p["n1"].get<std::size_t>();
      if (p.contains("n2")) rc.problem.n2 = p["n2"].get<std::size_t>();
      if (p.contains("rank")) rc.problem.rank = p["rank"].get<std::size_t>();
      if (p.contains("alpha")) rc.problem.alpha = p["alpha"].get<double>();
      if (p.contains("amp")) rc.problem.amp = p["amp"].get<double>();
    }
    if (j.contains("sampling")) {
      const json& s = j["sampling"];
      if (s.contains("row_frac")) rc.sampling.row_frac = s["row_frac"].get<double>();
      if (s.contains("col_frac")) rc.sampling.col_frac = s["col_frac"].get<double>();
      if (s.contains("p_row")) rc.sampling.p_row = s["p_row"].get<double>();
      if (s.contains("p_col")) rc.sampling.p_col = s["p_col"].get<double>();
    }
    if (j.contains("solver")) {
      const json& s = j["solver"];
      if (s.contains("rank")) rc.solver.rank = s["rank"].get<std::size_t>();
      if (s.contains("gamma")) rc.solver.gamma = s["gamma"].get<double>();
      if (s.contains("eps")) rc.solver.eps = s["eps"].get<double>();
      if (s.contains("max_iters"))
        rc.solver.max_iters = s["max_iters"].get<std::size_t>();
      if (s.contains("eta_r")) rc.solver.eta_r = s["eta_r"].get<double>();
      if (s.contains("eta_c")) rc.solver.eta_c = s["eta_c"].get<double>();
      if (s.contains("zeta0")) rc.solver.zeta0 = s["zeta0"].get<double>();
    }
  } catch (const json::exception& e) {
    throw rcurc::FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// JSON summary helpers

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

json fit_json(const rcurc::ConvergenceFit& f) {
  json j;
  j["slope"] = f.slope;
  j["r2"] = f.r2;
  j["iters_used"] = f.iters_used;
  return j;
}

json resolved_json(const rcurc::SolverConfig& c) {
  json j;
  j["rank"] = c.rank;
  j["gamma"] = c.gamma;
  j["eps"] = c.eps;
  j["max_iters"] = c.max_iters;
  if (c.eta_r) j["eta_r"] = *c.eta_r;
  if (c.eta_c) j["eta_c"] = *c.eta_c;
  if (c.zeta0) j["zeta0"] = *c.zeta0;
  return j;
}

void write_json(const fs::path& path, const json& j) {
  set_stage("io");
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw rcurc::IoError("cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
  os.flush();
  if (!os) throw rcurc::IoError("I/O failure writing " + path.string());
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_synth(std::uint64_t seed, std::size_t n1, std::size_t n2,
              std::size_t rank, double alpha, double amp,
              const std::string& out_dir) {
  set_stage("synth");
  rcurc::Rng rng(seed);
  rcurc::SyntheticProblem prob =
      rcurc::make_synthetic_problem(n1, n2, rank, alpha, amp, rng);
  set_stage("io");
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  rcurc::write_matrix(dir / "x_true.rcurcmat", prob.x_true);
  rcurc::write_matrix(dir / "s_true.rcurcmat", prob.s_true);
  rcurc::write_matrix(dir / "y.rcurcmat", prob.y);
  std::cout << "wrote " << (dir / "x_true.rcurcmat").string() << ", "
            << (dir / "s_true.rcurcmat").string() << ", "
            << (dir / "y.rcurcmat").string() << '\n';
  return 0;
}

int cmd_sample(const std::string& in, const SamplingSpec& sp,
               std::uint64_t seed, const std::string& out) {
  set_stage("io");
  const rcurc::DenseMatrix y = rcurc::read_matrix(in);
  set_stage("sample");
  rcurc::Rng rng(seed);
  const rcurc::CcsObservation obs = rcurc::ccs_sample(
      y, sp.row_frac, sp.col_frac, sp.p_row, sp.p_col, rng);
  set_stage("io");
  if (fs::path(out).has_parent_path())
    fs::create_directories(fs::path(out).parent_path());
  rcurc::write_observation(out, obs);
  std::cout << "wrote " << out << " (" << obs.union_size()
            << " observed entries)\n";
  return 0;
}

int cmd_solve(const std::string& in, const rcurc::SolverConfig& scfg,
              const std::string& out_dir, const std::string& estimate_path,
              bool strict) {
  set_stage("io");
  const rcurc::CcsObservation obs = rcurc::read_observation(in);
  set_stage("solve");
  const auto t0 = std::chrono::steady_clock::now();
  const rcurc::SolveReport rep = rcurc::solve(obs, scfg);
  const double runtime_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();

  set_stage("io");
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  rcurc::write_trace(dir / "trace.csv", rep);

  json summary;
  summary["schema"] = 1;
  summary["command"] = "solve";
  summary["termination"] = rcurc::to_string(rep.termination);
  summary["iterations"] = rep.trace.size();
  summary["final_e"] = rep.trace.back().e_k;
  summary["final_zeta"] = rep.trace.back().zeta_k;
  summary["rank_deficiency_events"] = rep.rank_deficiency_events;
  summary["resolved"] = resolved_json(rep.resolved);
  summary["runtime_ms"] = runtime_ms;
  try {
    summary["fit"] = fit_json(rcurc::fit_linear_rate(
        {rep.trace.data(), rep.trace.size()}));
  } catch (const rcurc::ArgumentError&) {
    // Trace too short or not in the log domain; the fit is simply omitted.
  }
  write_json(dir / "summary.json", summary);

  if (!estimate_path.empty()) {
    set_stage("eval");
    const rcurc::DenseMatrix est = rcurc::materialize(rep.factors);
    set_stage("io");
    rcurc::write_matrix(estimate_path, est);
  }
  std::cout << "termination=" << rcurc::to_string(rep.termination)
            << " iterations=" << rep.trace.size()
            << " final_e=" << rep.trace.back().e_k << '\n';
  if (strict && rep.termination != rcurc::Termination::converged) return 1;
  return 0;
}

int cmd_eval(const std::string& ref_path, const std::string& est_path,
             const std::string& peak_str, const std::string& out) {
  std::optional<double> peak = parse_peak(peak_str);
  set_stage("io");
  const rcurc::DenseMatrix ref = rcurc::read_matrix(ref_path);
  const rcurc::DenseMatrix est = rcurc::read_matrix(est_path);
  set_stage("eval");
  json j;
  j["schema"] = 1;
  j["command"] = "eval";
  j["recovery_error"] = rcurc::recovery_error(est, ref);
  j["psnr"] = number_or_inf(rcurc::psnr(ref, est, peak));
  std::cout << j.dump() << '\n';
  if (!out.empty()) write_json(out, j);
  return 0;
}

struct RepeatOutcome {
  std::uint64_t seed = 0;
  rcurc::Termination term = rcurc::Termination::max_iters;
  std::size_t iterations = 0;
  double final_e = 0.0, final_zeta = 0.0;
  std::size_t rank_events = 0;
  double runtime_ms = 0.0;
  std::optional<double> rec_err;
  std::optional<double> psnr_db;
  std::optional<rcurc::ConvergenceFit> fit;
};

json repeat_json(const RepeatOutcome& r) {
  json j;
  j["seed"] = r.seed;
  j["termination"] = rcurc::to_string(r.term);
  j["iterations"] = r.iterations;
  j["final_e"] = r.final_e;
  j["final_zeta"] = r.final_zeta;
  j["rank_deficiency_events"] = r.rank_events;
  j["runtime_ms"] = r.runtime_ms;
  if (r.rec_err) j["recovery_error"] = *r.rec_err;
  if (r.psnr_db) j["psnr"] = number_or_inf(*r.psnr_db);
  if (r.fit) j["fit"] = fit_json(*r.fit);
  return j;
}

/// One repeat of the full pipeline: generate (or load), sample, solve,
/// evaluate, write per-repeat artifacts. A single generator seeded with the
/// repeat seed drives generation and sampling, in that order.
RepeatOutcome run_one(const RunConfig& rc, std::uint64_t seed,
                      const std::string& suffix) {
  RepeatOutcome out;
  out.seed = seed;
  rcurc::Rng rng(seed);

  rcurc::DenseMatrix y, x_true;
  bool have_truth = false;
  if (rc.problem.synthetic) {
    set_stage("synth");
    rcurc::SyntheticProblem prob = rcurc::make_synthetic_problem(
        rc.problem.n1, rc.problem.n2, rc.problem.rank, rc.problem.alpha,
        rc.problem.amp, rng);
    y = std::move(prob.y);
    x_true = std::move(prob.x_true);
    have_truth = true;
  } else {
    set_stage("io");
    y = rcurc::read_matrix(rc.problem.y_path);
    if (!rc.problem.x_true_path.empty()) {
      x_true = rcurc::read_matrix(rc.problem.x_true_path);
      have_truth = true;
    }
  }

  set_stage("sample");
  const rcurc::CcsObservation obs =
      rcurc::ccs_sample(y, rc.sampling.row_frac, rc.sampling.col_frac,
                        rc.sampling.p_row, rc.sampling.p_col, rng);
  set_stage("io");
  fs::create_directories(rc.out_dir);
  const fs::path dir(rc.out_dir);
  rcurc::write_observation(dir / ("observation" + suffix + ".json"), obs);

  set_stage("solve");
  const auto t0 = std::chrono::steady_clock::now();
  const rcurc::SolveReport rep = rcurc::solve(obs, rc.solver);
  out.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  out.term = rep.termination;
  out.iterations = rep.trace.size();
  out.final_e = rep.trace.back().e_k;
  out.final_zeta = rep.trace.back().zeta_k;
  out.rank_events = rep.rank_deficiency_events;
  try {
    out.fit = rcurc::fit_linear_rate({rep.trace.data(), rep.trace.size()});
  } catch (const rcurc::ArgumentError&) {
  }

  set_stage("io");
  rcurc::write_trace(dir / ("trace" + suffix + ".csv"), rep);

  if (have_truth) {
    set_stage("eval");
    const rcurc::DenseMatrix est = rcurc::materialize(rep.factors);
    out.rec_err = rcurc::recovery_error(est, x_true);
    out.psnr_db = rcurc::psnr(x_true, est, rc.peak);
  }
  return out;
}

int cmd_run(RunConfig rc) {
  if (rc.solver.rank == 0) rc.solver.rank = rc.problem.rank;
  if (rc.repeats == 0) throw rcurc::ArgumentError("repeats must be >= 1");

  std::vector<RepeatOutcome> outcomes;
  outcomes.reserve(rc.repeats);
  for (std::size_t i = 0; i < rc.repeats; ++i) {
    const std::string suffix =
        rc.repeats == 1 ? std::string{} : "_" + std::to_string(i);
    outcomes.push_back(run_one(rc, rc.seed + i, suffix));
  }

  json summary;
  summary["schema"] = 1;
  summary["command"] = "run";
  summary["seed"] = rc.seed;
  summary["repeats"] = rc.repeats;
  json runs = json::array();
  for (const RepeatOutcome& r : outcomes) runs.push_back(repeat_json(r));
  summary["runs"] = std::move(runs);

  json agg;
  double mean_e = 0.0, mean_rt = 0.0;
  std::size_t converged = 0;
  for (const RepeatOutcome& r : outcomes) {
    mean_e += r.final_e;
    mean_rt += r.runtime_ms;
    if (r.term == rcurc::Termination::converged) ++converged;
  }
  const auto n = static_cast<double>(outcomes.size());
  agg["mean_final_e"] = mean_e / n;
  agg["mean_runtime_ms"] = mean_rt / n;
  agg["converged_count"] = converged;
  double mean_rec = 0.0;
  std::size_t n_rec = 0;
  for (const RepeatOutcome& r : outcomes)
    if (r.rec_err) {
      mean_rec += *r.rec_err;
      ++n_rec;
    }
  if (n_rec > 0) agg["mean_recovery_error"] = mean_rec / static_cast<double>(n_rec);
  summary["aggregate"] = std::move(agg);

  write_json(fs::path(rc.out_dir) / "summary.json", summary);
  std::cout << "converged " << converged << "/" << rc.repeats
            << ", summary: " << (fs::path(rc.out_dir) / "summary.json").string()
            << '\n';
  if (rc.strict && converged != rc.repeats) return 1;
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "rcurc - robust matrix completion from cross-concentrated samples"};
  app.require_subcommand(1);

  // --- synth ---
  auto* synth = app.add_subcommand(
      "synth", "Generate a synthetic low-rank + sparse-outlier problem");
  std::uint64_t sy_seed = 0;
  std::size_t sy_n1 = 100, sy_n2 = 100, sy_rank = 3;
  double sy_alpha = 0.1, sy_amp = 10.0;
  std::string sy_out = ".";
  synth->add_option("--seed", sy_seed, "Generator seed");
  synth->add_option("--n1", sy_n1, "Rows");
  synth->add_option("--n2", sy_n2, "Columns");
  synth->add_option("--rank", sy_rank, "Target rank");
  synth->add_option("--alpha", sy_alpha, "Outlier row/column density in [0, 0.5)");
  synth->add_option("--amp", sy_amp, "Outlier amplitude multiplier");
  synth->add_option("--out", sy_out, "Output directory");

  // --- sample ---
  auto* sample = app.add_subcommand(
      "sample", "Draw a cross-concentrated observation from a matrix file");
  std::string sa_in, sa_out = "observation.json";
  SamplingSpec sa_spec;
  std::uint64_t sa_seed = 0;
  sample->add_option("--in", sa_in, "Input .rcurcmat matrix")->required();
  sample->add_option("--seed", sa_seed, "Generator seed");
  sample->add_option("--row-frac", sa_spec.row_frac, "Row panel fraction (0,1]");
  sample->add_option("--col-frac", sa_spec.col_frac, "Column panel fraction (0,1]");
  sample->add_option("--p-row", sa_spec.p_row, "Row panel observation rate (0,1]");
  sample->add_option("--p-col", sa_spec.p_col, "Column panel observation rate (0,1]");
  sample->add_option("--out", sa_out, "Output observation JSON path");

  // --- solve ---
  auto* solve_cmd = app.add_subcommand(
      "solve", "Run the solver on an observation file");
  std::string so_in, so_out = ".", so_estimate;
  rcurc::SolverConfig so_cfg;
  bool so_strict = false;
  double so_eta_r = 0, so_eta_c = 0, so_zeta0 = -1;
  solve_cmd->add_option("--in", so_in, "Observation JSON")->required();
  solve_cmd->add_option("--rank", so_cfg.rank, "Target rank")->required();
  solve_cmd->add_option("--gamma", so_cfg.gamma, "Threshold decay in (0,1)");
  solve_cmd->add_option("--eps", so_cfg.eps, "Convergence tolerance on e_k");
  solve_cmd->add_option("--max-iters", so_cfg.max_iters, "Iteration cap");
  auto* so_er = solve_cmd->add_option("--eta-r", so_eta_r,
                                      "Row step size (default 1/p_row)");
  auto* so_ec = solve_cmd->add_option("--eta-c", so_eta_c,
                                      "Column step size (default 1/p_col)");
  auto* so_z0 = solve_cmd->add_option(
      "--zeta0", so_zeta0, "Initial threshold (default max |observed value|)");
  solve_cmd->add_option("--out", so_out, "Output directory");
  solve_cmd->add_option("--estimate", so_estimate,
                        "Also write the dense estimate to this path");
  solve_cmd->add_flag("--strict", so_strict,
                      "Exit 1 unless the solver converged");

  // --- eval ---
  auto* eval_cmd = app.add_subcommand(
      "eval", "Recovery error and PSNR between two matrix files");
  std::string ev_ref, ev_est, ev_peak = "auto", ev_out;
  eval_cmd->add_option("--ref", ev_ref, "Reference .rcurcmat")->required();
  eval_cmd->add_option("--est", ev_est, "Estimate .rcurcmat")->required();
  eval_cmd->add_option("--peak", ev_peak, "PSNR peak value or 'auto'");
  eval_cmd->add_option("--out", ev_out, "Also write the metrics JSON here");

  // --- run ---
  auto* run_cmd = app.add_subcommand(
      "run", "Full pipeline: generate/load, sample, solve, evaluate");
  std::string ru_config;
  RunConfig ru;
  std::uint64_t ru_seed = 0;
  std::size_t ru_repeats = 0;
  std::string ru_out, ru_y, ru_x_true, ru_peak;
  std::size_t ru_n1 = 0, ru_n2 = 0, ru_rank = 0;
  double ru_alpha = -1, ru_amp = -1;
  double ru_row_frac = -1, ru_col_frac = -1, ru_p_row = -1, ru_p_col = -1;
  double ru_gamma = -1, ru_eps = -1, ru_eta_r = 0, ru_eta_c = 0, ru_zeta0 = -1;
  std::size_t ru_max_iters = 0;
  bool ru_strict = false;
  run_cmd->add_option("--config", ru_config, "Experiment config JSON");
  auto* o_seed = run_cmd->add_option("--seed", ru_seed, "Base seed");
  auto* o_rep = run_cmd->add_option("--repeats", ru_repeats,
                                    "Repeat count (seeds seed+0..seed+N-1)");
  auto* o_out = run_cmd->add_option("--out", ru_out, "Output directory");
  auto* o_n1 = run_cmd->add_option("--n1", ru_n1, "Rows (synthetic)");
  auto* o_n2 = run_cmd->add_option("--n2", ru_n2, "Columns (synthetic)");
  auto* o_rank = run_cmd->add_option("--rank", ru_rank, "Rank");
  auto* o_alpha = run_cmd->add_option("--alpha", ru_alpha, "Outlier density");
  auto* o_amp = run_cmd->add_option("--amp", ru_amp, "Outlier amplitude");
  auto* o_y = run_cmd->add_option("--y", ru_y, "Input matrix instead of synthetic");
  auto* o_xt = run_cmd->add_option("--x-true", ru_x_true, "Ground truth matrix");
  auto* o_rf = run_cmd->add_option("--row-frac", ru_row_frac, "Row panel fraction");
  auto* o_cf = run_cmd->add_option("--col-frac", ru_col_frac, "Column panel fraction");
  auto* o_pr = run_cmd->add_option("--p-row", ru_p_row, "Row panel rate");
  auto* o_pc = run_cmd->add_option("--p-col", ru_p_col, "Column panel rate");
  auto* o_gamma = run_cmd->add_option("--gamma", ru_gamma, "Threshold decay");
  auto* o_eps = run_cmd->add_option("--eps", ru_eps, "Convergence tolerance");
  auto* o_mi = run_cmd->add_option("--max-iters", ru_max_iters, "Iteration cap");
  auto* o_er = run_cmd->add_option("--eta-r", ru_eta_r, "Row step size");
  auto* o_ec = run_cmd->add_option("--eta-c", ru_eta_c, "Column step size");
  auto* o_z0 = run_cmd->add_option("--zeta0", ru_zeta0, "Initial threshold");
  auto* o_peak = run_cmd->add_option("--peak", ru_peak, "PSNR peak or 'auto'");
  run_cmd->add_flag("--strict", ru_strict, "Exit 1 unless every repeat converged");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: stage=usage: " << e.what() << '\n';
    return 2;
  }

  try {
    if (synth->parsed())
      return cmd_synth(sy_seed, sy_n1, sy_n2, sy_rank, sy_alpha, sy_amp, sy_out);
    if (sample->parsed()) return cmd_sample(sa_in, sa_spec, sa_seed, sa_out);
    if (solve_cmd->parsed()) {
      if (so_er->count() > 0) so_cfg.eta_r = so_eta_r;
      if (so_ec->count() > 0) so_cfg.eta_c = so_eta_c;
      if (so_z0->count() > 0) so_cfg.zeta0 = so_zeta0;
      return cmd_solve(so_in, so_cfg, so_out, so_estimate, so_strict);
    }
    if (eval_cmd->parsed()) return cmd_eval(ev_ref, ev_est, ev_peak, ev_out);
    if (run_cmd->parsed()) {
      if (!ru_config.empty()) apply_config_file(ru_config, ru);
      set_stage("config");
      if (o_seed->count()) ru.seed = ru_seed;
      if (o_rep->count()) ru.repeats = ru_repeats;
      if (o_out->count()) ru.out_dir = ru_out;
      if (o_n1->count()) ru.problem.n1 = ru_n1;
      if (o_n2->count()) ru.problem.n2 = ru_n2;
      if (o_rank->count()) {
        ru.problem.rank = ru_rank;
        ru.solver.rank = ru_rank;
      }
      if (o_alpha->count()) ru.problem.alpha = ru_alpha;
      if (o_amp->count()) ru.problem.amp = ru_amp;
      if (o_y->count()) {
        ru.problem.synthetic = false;
        ru.problem.y_path = ru_y;
      }
      if (o_xt->count()) ru.problem.x_true_path = ru_x_true;
      if (o_rf->count()) ru.sampling.row_frac = ru_row_frac;
      if (o_cf->count()) ru.sampling.col_frac = ru_col_frac;
      if (o_pr->count()) ru.sampling.p_row = ru_p_row;
      if (o_pc->count()) ru.sampling.p_col = ru_p_col;
      if (o_gamma->count()) ru.solver.gamma = ru_gamma;
      if (o_eps->count()) ru.solver.eps = ru_eps;
      if (o_mi->count()) ru.solver.max_iters = ru_max_iters;
      if (o_er->count()) ru.solver.eta_r = ru_eta_r;
      if (o_ec->count()) ru.solver.eta_c = ru_eta_c;
      if (o_z0->count()) ru.solver.zeta0 = ru_zeta0;
      if (o_peak->count()) ru.peak = parse_peak(ru_peak);
      if (ru_strict) ru.strict = true;
      return cmd_run(std::move(ru));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: stage=" << g_stage << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace rcurc_cli
