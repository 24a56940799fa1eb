#include "ltrb/config.hpp"
#include "ltrb/io.hpp"
#include "ltrb/metrics.hpp"
#include "ltrb/spectral.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <thread>

namespace {

using namespace ltrb;
namespace fs = std::filesystem;

class Stopwatch {
public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Problem {
  Mesh mesh;
  OperatorSet ops;
  NodalField u0h, u1h;
  std::optional<SeparableForcing> forcing;
  double assemble_seconds = 0.0;
};

ScalarField field_from_config(const Config& cfg, const std::string& prefix) {
  const std::string kind = cfg.get_string(prefix, "zero");
  if (kind == "zero") return {};
  if (kind == "gaussian") {
    const Point2 x0 = cfg.get_point(prefix == "ic.u0" ? "ic.x0" : prefix + "_x0");
    const double zeta = cfg.get_double(prefix == "ic.u0" ? "ic.zeta" : prefix + "_zeta");
    return gaussian_field(x0, zeta);
  }
  throw ConfigError("key " + prefix + ": unknown field kind `" + kind + "`");
}

Problem build_problem(const Config& cfg) {
  Problem prob;
  Stopwatch clock;
  if (cfg.has("mesh.file")) {
    prob.mesh = read_mesh_text(cfg.get_string("mesh.file"));
  } else {
    Rect domain;
    domain.x_min = cfg.get_double("mesh.x_min", -0.5);
    domain.x_max = cfg.get_double("mesh.x_max", 0.5);
    domain.y_min = cfg.get_double("mesh.y_min", -0.5);
    domain.y_max = cfg.get_double("mesh.y_max", 0.5);
    prob.mesh = build_structured_mesh(cfg.get_int("mesh.n"), domain);
  }
  prob.ops = assemble_operators(prob.mesh, cfg.get_double("physics.c"));

  const ScalarField u0_field = field_from_config(cfg, "ic.u0");
  const ScalarField u1_field = field_from_config(cfg, "ic.u1");
  prob.u0h = u0_field ? l2_project(prob.ops, prob.mesh, u0_field)
                      : Vec::Zero(prob.ops.n_dofs);
  prob.u1h = u1_field ? l2_project(prob.ops, prob.mesh, u1_field)
                      : Vec::Zero(prob.ops.n_dofs);

  const std::string forcing_kind = cfg.get_string("forcing.kind", "zero");
  if (forcing_kind != "zero") {
    SeparableForcing f;
    if (forcing_kind == "exp_decay") {
      f.signal.kind = TimeSignal::Kind::exp_decay;
      f.signal.rate = cfg.get_double("forcing.rate", 1.0);
    } else if (forcing_kind == "sine") {
      f.signal.kind = TimeSignal::Kind::sine;
      f.signal.omega = cfg.get_double("forcing.omega", 1.0);
    } else if (forcing_kind == "constant") {
      f.signal.kind = TimeSignal::Kind::constant;
    } else {
      throw ConfigError("key forcing.kind: unknown kind `" + forcing_kind + "`");
    }
    const ScalarField g =
        gaussian_field(cfg.get_point("forcing.x0"), cfg.get_double("forcing.zeta"));
    const double scale = cfg.get_double("forcing.scale", 1.0);
    f.g_load = scale * load_vector(prob.mesh, g);
    prob.forcing = std::move(f);
  }
  prob.assemble_seconds = clock.lap();
  return prob;
}

NewmarkConfig time_config(const Config& cfg) {
  NewmarkConfig tc;
  tc.t_final = cfg.get_double("time.t_final");
  tc.n_steps = cfg.get_int("time.n_steps");
  tc.gamma = cfg.get_double("time.gamma", 0.5);
  tc.beta_n = cfg.get_double("time.beta_n", 0.25);
  tc.store_every = cfg.get_int("run.store_every", 1);
  return tc;
}

LoadFn forcing_load(const Problem& prob) {
  if (!prob.forcing || prob.forcing->is_zero()) return {};
  const Vec g = prob.forcing->g_load;
  const TimeSignal signal = prob.forcing->signal;
  return [g, signal](double t, Vec& out) { out = signal(t) * g; };
}

/// Resolves laplace.beta, running the eigenvalue estimate for "auto".
double resolve_beta(const Config& cfg, const Problem& prob, double alpha) {
  const std::string spec = cfg.get_string("laplace.beta", "auto");
  if (spec != "auto") {
    const double beta = cfg.get_double("laplace.beta");
    if (!(beta > 0.0)) throw ConfigError("key laplace.beta: must be positive or `auto`");
    return beta;
  }
  const auto est = max_generalized_eigenvalue(prob.ops);
  const auto sel = optimal_beta(alpha, est.lambda_max);
  std::printf("beta auto: lambda_max = %.6g (%d iterations%s), beta_opt = %.6g, eta = %.6g\n",
              est.lambda_max, est.iterations, est.converged ? "" : ", NOT converged",
              sel.beta_opt, sel.eta);
  return sel.beta_opt;
}

int snapshot_threads(const Config& cfg, bool parallel_flag) {
  const bool parallel = parallel_flag || cfg.get_bool("run.parallel_snapshots", false);
  if (!parallel) return 1;
  return std::max(2u, std::thread::hardware_concurrency());
}

struct OfflineResult {
  QuadratureRule rule;
  SnapshotSet snaps;
  ReducedBasis basis;
  double laplace_seconds = 0.0;
  double build_seconds = 0.0;
};

OfflineResult run_offline_stage(const Config& cfg, const Problem& prob, int m, int pod_r,
                                int threads, double beta) {
  OfflineResult res;
  Stopwatch clock;
  const double alpha = cfg.get_double("laplace.alpha", 5.0);
  res.rule = make_quadrature(alpha, beta, m);
  res.snaps = compute_snapshots(prob.ops, res.rule, prob.u0h, prob.u1h,
                                prob.forcing ? &*prob.forcing : nullptr, threads);
  res.laplace_seconds = clock.lap();
  const GramCholesky chol(prob.ops);
  res.basis = build_reduced_basis(res.snaps, chol, pod_r);
  res.build_seconds = clock.lap();
  std::printf("offline: M = %d (%d effective solves), rank = %d, retained R = %d\n", m,
              res.snaps.effective_solves, res.basis.r, res.basis.R);
  return res;
}

ArtifactMeta meta_for(const Problem& prob, const QuadratureRule& rule) {
  ArtifactMeta meta;
  meta.alpha = rule.alpha;
  meta.beta = rule.beta;
  meta.m = rule.m;
  meta.c = prob.ops.c;
  meta.mesh_hash = prob.mesh.hash;
  return meta;
}

std::string out_dir(const Config& cfg, const std::string& override_dir) {
  const std::string dir = override_dir.empty() ? cfg.get_string("output.dir", "out") : override_dir;
  fs::create_directories(dir);
  return dir;
}

int cmd_quality(const Config& cfg) {
  const Problem prob = build_problem(cfg);
  const auto q = mesh_quality(prob.mesh);
  std::printf("vertices     %d\n", prob.mesh.n_vertices());
  std::printf("triangles    %d\n", q.n_triangles);
  std::printf("dofs         %d\n", q.n_dofs);
  std::printf("h            %.6g\n", q.h);
  std::printf("gamma        %.6g\n", q.gamma);
  std::printf("c_qu         %.6g\n", q.c_qu);
  std::printf("mesh_hash    %016" PRIx64 "\n", prob.mesh.hash);
  return 0;
}

int cmd_beta(const Config& cfg) {
  const Problem prob = build_problem(cfg);
  const double alpha = cfg.get_double("laplace.alpha", 5.0);
  const auto est = max_generalized_eigenvalue(prob.ops);
  const auto sel = optimal_beta(alpha, est.lambda_max);
  std::printf("alpha        %.6g\n", sel.alpha);
  std::printf("lambda_max   %.6g\n", sel.lambda_max);
  std::printf("iterations   %d%s\n", est.iterations, est.converged ? "" : " (not converged)");
  std::printf("beta_opt     %.6g\n", sel.beta_opt);
  std::printf("eta          %.6g\n", sel.eta);
  return 0;
}

int cmd_full(const Config& cfg, const std::string& dir_flag, bool export_operators) {
  const Problem prob = build_problem(cfg);
  const std::string dir = out_dir(cfg, dir_flag);
  const NewmarkConfig tc = time_config(cfg);

  if (export_operators) {
    write_matrix_market(dir + "/mass.mtx", prob.ops.mass);
    write_matrix_market(dir + "/stiffness.mtx", prob.ops.stiffness);
    write_matrix_market(dir + "/gram_h10.mtx", prob.ops.gram_h10);
  }

  Stopwatch clock;
  const Trajectory traj = newmark_solve(prob.ops.mass, prob.ops.stiffness, forcing_load(prob),
                                        prob.u0h, prob.u1h, tc);
  TimingReport timings;
  timings.solve_td_hf = clock.lap();
  timings.assemble_fem = prob.assemble_seconds;
  timings.n_steps = tc.n_steps;
  timings.n_dofs = prob.ops.n_dofs;

  write_trajectory_csv(dir + "/full.csv", traj);
  write_timings_csv(dir + "/timings.csv", timings);
  std::printf("full: %d dofs, %d steps, solve td-hf %.3f s -> %s/full.csv\n", prob.ops.n_dofs,
              tc.n_steps, *timings.solve_td_hf, dir.c_str());
  return 0;
}

int cmd_offline(const Config& cfg, const std::string& dir_flag, bool parallel,
                bool save_snaps) {
  const Problem prob = build_problem(cfg);
  const std::string dir = out_dir(cfg, dir_flag);
  const double beta = resolve_beta(cfg, prob, cfg.get_double("laplace.alpha", 5.0));
  const auto res = run_offline_stage(cfg, prob, cfg.get_int("laplace.m"), cfg.get_int("pod.r"),
                                     snapshot_threads(cfg, parallel), beta);

  save_basis(dir + "/basis.mtx", res.basis, meta_for(prob, res.rule));
  if (save_snaps) save_snapshots(dir + "/snapshots.mtx", res.snaps, meta_for(prob, res.rule));
  write_singular_values_csv(dir + "/singular_values.csv", singular_value_report(res.basis));
  TimingReport timings;
  timings.assemble_fem = prob.assemble_seconds;
  timings.laplace_hf = res.laplace_seconds;
  timings.build_rb = res.build_seconds;
  timings.effective_solves = res.snaps.effective_solves;
  timings.R = res.basis.R;
  timings.n_dofs = prob.ops.n_dofs;
  write_timings_csv(dir + "/timings.csv", timings);
  std::printf("offline: basis -> %s/basis.mtx (R = %d)\n", dir.c_str(), res.basis.R);
  return 0;
}

int cmd_online(const Config& cfg, const std::string& basis_path, const std::string& dir_flag,
               bool lift_flag) {
  const Problem prob = build_problem(cfg);
  const std::string dir = out_dir(cfg, dir_flag);
  auto [basis, meta] = load_basis(basis_path);
  if (meta.mesh_hash != prob.mesh.hash)
    throw IncompatibleBasisError("basis was built for a different mesh");
  if (meta.c != prob.ops.c)
    throw IncompatibleBasisError("basis was built for a different wave speed");
  basis.b_gram_hash = prob.ops.fingerprint();

  const NewmarkConfig tc = time_config(cfg);
  const ReducedSystem sys = reduce_system(prob.ops, basis, prob.u0h, prob.u1h,
                                          prob.forcing ? &*prob.forcing : nullptr);
  Stopwatch clock;
  const Trajectory reduced =
      newmark_solve(sys.mass_r, sys.stiffness_r, sys.load_r, sys.u0_r, sys.u1_r, tc);
  TimingReport timings;
  timings.solve_td_rb = clock.lap();
  timings.assemble_fem = prob.assemble_seconds;
  timings.n_steps = tc.n_steps;
  timings.R = basis.R;
  timings.n_dofs = prob.ops.n_dofs;

  write_trajectory_csv(dir + "/reduced.csv", reduced);
  if (lift_flag) write_trajectory_csv(dir + "/lifted.csv", lift(basis, reduced));
  write_timings_csv(dir + "/timings.csv", timings);
  std::printf("online: R = %d, %d steps, solve td-rb %.3f s -> %s/reduced.csv\n", basis.R,
              tc.n_steps, *timings.solve_td_rb, dir.c_str());
  return 0;
}

int cmd_compare(const Config& cfg, const std::string& dir_flag, bool parallel) {
  const Problem prob = build_problem(cfg);
  const std::string dir = out_dir(cfg, dir_flag);
  const NewmarkConfig tc = time_config(cfg);
  const std::vector<int> m_values = cfg.get_int_list("compare.m_values");
  std::vector<int> r_values = cfg.get_int_list("compare.r_values");
  std::sort(r_values.begin(), r_values.end());
  const int threads = snapshot_threads(cfg, parallel);

  Stopwatch clock;
  const Trajectory hf = newmark_solve(prob.ops.mass, prob.ops.stiffness, forcing_load(prob),
                                      prob.u0h, prob.u1h, tc);
  const double hf_seconds = clock.lap();
  std::printf("compare: full-order run %.3f s (%d dofs, %d steps)\n", hf_seconds,
              prob.ops.n_dofs, tc.n_steps);

  const double beta = resolve_beta(cfg, prob, cfg.get_double("laplace.alpha", 5.0));
  const int r_max = *std::max_element(r_values.begin(), r_values.end());
  std::vector<ErrorRow> summary;
  for (const int m : m_values) {
    const auto off = run_offline_stage(cfg, prob, m, r_max, threads, beta);
    write_singular_values_csv(dir + "/singular_values_M" + std::to_string(m) + ".csv",
                              singular_value_report(off.basis));

    std::vector<ErrorRow> rows;
    double solve_rb_seconds = 0.0;
    for (const int r : r_values) {
      if (r > off.basis.R) continue;  // beyond rank
      ReducedBasis view = off.basis;
      view.phi = off.basis.phi.leftCols(r);
      view.R = r;
      const ReducedSystem sys = reduce_system(prob.ops, view, prob.u0h, prob.u1h,
                                              prob.forcing ? &*prob.forcing : nullptr);
      clock.lap();
      const Trajectory reduced =
          newmark_solve(sys.mass_r, sys.stiffness_r, sys.load_r, sys.u0_r, sys.u1_r, tc);
      solve_rb_seconds = clock.lap();
      const Trajectory lifted = lift(view, reduced);
      ErrorRow row;
      row.m = m;
      row.r = r;
      row.err_l2 = relative_error(hf, lifted, prob.ops, ErrorNorm::L2).value_or(-1.0);
      row.err_h10 = relative_error(hf, lifted, prob.ops, ErrorNorm::H10).value_or(-1.0);
      rows.push_back(row);
    }
    write_error_vs_r_csv(dir + "/error_vs_R_M" + std::to_string(m) + ".csv", rows);
    if (!rows.empty()) summary.push_back(rows.back());

    TimingReport timings;
    timings.assemble_fem = prob.assemble_seconds;
    timings.laplace_hf = off.laplace_seconds;
    timings.build_rb = off.build_seconds;
    timings.solve_td_rb = solve_rb_seconds;  // largest R run
    timings.solve_td_hf = hf_seconds;
    timings.effective_solves = off.snaps.effective_solves;
    timings.n_steps = tc.n_steps;
    timings.R = off.basis.R;
    timings.n_dofs = prob.ops.n_dofs;
    write_timings_csv(dir + "/timings_M" + std::to_string(m) + ".csv", timings);
    if (const auto s = timings.speedup())
      std::printf("compare: M = %d speedup %.2fx (lt-rb %.3f s vs hf %.3f s)\n", m, *s,
                  *timings.lt_rb_total(), *timings.hf_total());
  }
  write_error_vs_m_csv(dir + "/error_vs_M.csv", summary);
  std::printf("compare: tables -> %s\n", dir.c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"LT-RB solver for the 2D wave equation: Laplace-domain sampling, "
               "POD reduction, Newmark time stepping"};
  app.require_subcommand(1);

  std::string config_path, basis_path, dir_flag;
  bool parallel = false, lift_flag = false, export_operators = false, save_snaps = false;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", dir_flag, "output directory (overrides output.dir)");
  };

  auto* full = app.add_subcommand("full", "full-order Newmark run");
  add_config(full);
  full->add_flag("--export-operators", export_operators, "write operators in Matrix Market");
  auto* offline = app.add_subcommand("offline", "snapshots + reduced basis");
  add_config(offline);
  offline->add_flag("--parallel", parallel, "parallel snapshot solves");
  offline->add_flag("--save-snapshots", save_snaps, "persist the snapshot matrix");
  auto* online = app.add_subcommand("online", "reduced Newmark run from a saved basis");
  add_config(online);
  online->add_option("--basis", basis_path, "basis file (.mtx)")->required();
  online->add_flag("--lift", lift_flag, "also write the lifted trajectory");
  auto* compare = app.add_subcommand("compare", "full vs reduced sweep with error tables");
  add_config(compare);
  compare->add_flag("--parallel", parallel, "parallel snapshot solves");
  auto* quality = app.add_subcommand("quality", "mesh quality report");
  add_config(quality);
  auto* beta = app.add_subcommand("beta", "optimal Laplace sampling parameter");
  add_config(beta);

  CLI11_PARSE(app, argc, argv);

  try {
    const Config cfg = Config::parse_file(config_path);
    if (full->parsed()) return cmd_full(cfg, dir_flag, export_operators);
    if (offline->parsed()) return cmd_offline(cfg, dir_flag, parallel, save_snaps);
    if (online->parsed()) return cmd_online(cfg, basis_path, dir_flag, lift_flag);
    if (compare->parsed()) return cmd_compare(cfg, dir_flag, parallel);
    if (quality->parsed()) return cmd_quality(cfg);
    if (beta->parsed()) return cmd_beta(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const IncompatibleBasisError& e) {
    std::fprintf(stderr, "incompatible: %s\n", e.what());
    return 4;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
