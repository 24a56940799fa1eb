#include "ltrb/newmark.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

namespace ltrb {

namespace {

void check_config(const NewmarkConfig& cfg) {
  if (!(cfg.t_final > 0.0)) throw std::invalid_argument("newmark: t_final must be positive");
  if (cfg.n_steps < 1) throw std::invalid_argument("newmark: n_steps must be >= 1");
  if (cfg.store_every < 1) throw std::invalid_argument("newmark: store_every must be >= 1");
}

struct SparseBackend {
  Eigen::SimplicialLLT<SpMat> mass_llt, eff_llt;
  void prepare(const SpMat& mass, const SpMat& stiffness, double coef) {
    mass_llt.compute(mass);
    if (mass_llt.info() != Eigen::Success)
      throw NumericalError("newmark: mass factorization failed");
    const SpMat eff = mass + coef * stiffness;
    eff_llt.compute(eff);
    if (eff_llt.info() != Eigen::Success)
      throw NumericalError("newmark: effective matrix factorization failed");
  }
  Vec solve_mass(const Vec& b) const { return mass_llt.solve(b); }
  Vec solve_eff(const Vec& b) const { return eff_llt.solve(b); }
};

struct DenseBackend {
  Eigen::LLT<Mat> mass_llt, eff_llt;
  void prepare(const Mat& mass, const Mat& stiffness, double coef) {
    mass_llt.compute(mass);
    if (mass_llt.info() != Eigen::Success)
      throw NumericalError("newmark: mass factorization failed");
    eff_llt.compute(mass + coef * stiffness);
    if (eff_llt.info() != Eigen::Success)
      throw NumericalError("newmark: effective matrix factorization failed");
  }
  Vec solve_mass(const Vec& b) const { return mass_llt.solve(b); }
  Vec solve_eff(const Vec& b) const { return eff_llt.solve(b); }
};

template <class MatrixT, class Backend>
void run_impl(const MatrixT& mass, const MatrixT& stiffness, const LoadFn& load, const Vec& u0,
              const Vec& v0, const NewmarkConfig& cfg, const StepObserver& observe) {
  check_config(cfg);
  const auto n = mass.rows();
  if (stiffness.rows() != n || u0.size() != n || v0.size() != n)
    throw std::invalid_argument("newmark: dimension mismatch");

  const double dt = cfg.t_final / cfg.n_steps;
  Backend backend;
  backend.prepare(mass, stiffness, cfg.beta_n * dt * dt);

  Vec f = Vec::Zero(n);
  Vec u = u0, v = v0;
  if (load) load(0.0, f);
  Vec a = backend.solve_mass(f - stiffness * u);
  if (observe) observe(0, 0.0, u, v, a);

  Vec u_pred(n), v_pred(n), rhs(n);
  for (int j = 1; j <= cfg.n_steps; ++j) {
    const double t = dt * j;
    u_pred.noalias() = u + dt * v + (dt * dt * (0.5 - cfg.beta_n)) * a;
    v_pred.noalias() = v + (dt * (1.0 - cfg.gamma)) * a;
    if (load) load(t, f);
    rhs.noalias() = f - stiffness * u_pred;
    a = backend.solve_eff(rhs);
    u.noalias() = u_pred + (cfg.beta_n * dt * dt) * a;
    v.noalias() = v_pred + (cfg.gamma * dt) * a;
    if (observe) observe(j, t, u, v, a);
  }
}

Trajectory record(int n_steps, int store_every, CoordinateSpace space,
                  const std::function<void(const StepObserver&)>& run) {
  Trajectory traj;
  traj.space = space;
  traj.times.reserve(n_steps / store_every + 2);
  run([&](int j, double t, const Vec& u, const Vec& v, const Vec& a) {
    if (j % store_every != 0 && j != n_steps) return;
    traj.times.push_back(t);
    traj.displacements.push_back(u);
    traj.velocities.push_back(v);
    traj.accelerations.push_back(a);
  });
  return traj;
}

} // namespace

void newmark_run(const SpMat& mass, const SpMat& stiffness, const LoadFn& load, const Vec& u0,
                 const Vec& v0, const NewmarkConfig& cfg, const StepObserver& observe) {
  run_impl<SpMat, SparseBackend>(mass, stiffness, load, u0, v0, cfg, observe);
}

void newmark_run(const Mat& mass, const Mat& stiffness, const LoadFn& load, const Vec& u0,
                 const Vec& v0, const NewmarkConfig& cfg, const StepObserver& observe) {
  run_impl<Mat, DenseBackend>(mass, stiffness, load, u0, v0, cfg, observe);
}

Trajectory newmark_solve(const SpMat& mass, const SpMat& stiffness, const LoadFn& load,
                         const Vec& u0, const Vec& v0, const NewmarkConfig& cfg) {
  return record(cfg.n_steps, cfg.store_every, CoordinateSpace::full,
                [&](const StepObserver& obs) { newmark_run(mass, stiffness, load, u0, v0, cfg, obs); });
}

Trajectory newmark_solve(const Mat& mass, const Mat& stiffness, const LoadFn& load, const Vec& u0,
                         const Vec& v0, const NewmarkConfig& cfg) {
  return record(cfg.n_steps, cfg.store_every, CoordinateSpace::reduced,
                [&](const StepObserver& obs) { newmark_run(mass, stiffness, load, u0, v0, cfg, obs); });
}

ReducedSystem reduce_system(const OperatorSet& ops, const ReducedBasis& basis,
                            const NodalField& u0h, const NodalField& u1h,
                            const SeparableForcing* forcing) {
  if (basis.b_gram_hash != ops.fingerprint())
    throw IncompatibleBasisError("reduce_system: basis built for a different discretization");
  if (u0h.size() != ops.n_dofs || u1h.size() != ops.n_dofs)
    throw std::invalid_argument("reduce_system: initial data size mismatch");

  ReducedSystem sys;
  sys.R = basis.R;
  sys.c = ops.c;
  sys.mass_r.noalias() = basis.phi.transpose() * (ops.mass * basis.phi);
  sys.stiffness_r = (ops.c * ops.c) * Mat::Identity(basis.R, basis.R);
  sys.u0_r.noalias() = basis.phi.transpose() * (ops.gram_h10 * u0h);
  sys.u1_r.noalias() = basis.phi.transpose() * (ops.gram_h10 * u1h);
  if (forcing && !forcing->is_zero()) {
    Vec projected = basis.phi.transpose() * forcing->g_load;
    TimeSignal signal = forcing->signal;
    sys.load_r = [projected = std::move(projected), signal](double t, Vec& out) {
      out = signal(t) * projected;
    };
  }
  return sys;
}

Trajectory lift(const ReducedBasis& basis, const Trajectory& reduced) {
  if (!reduced.displacements.empty() &&
      reduced.displacements.front().size() != basis.phi.cols())
    throw std::invalid_argument("lift: reduced dimension does not match basis");

  Trajectory full;
  full.space = CoordinateSpace::full;
  full.times = reduced.times;
  const int n = reduced.n_states();
  full.displacements.resize(n);
  full.velocities.resize(n);
  full.accelerations.resize(n);
  for (int j = 0; j < n; ++j) {
    full.displacements[j].noalias() = basis.phi * reduced.displacements[j];
    full.velocities[j].noalias() = basis.phi * reduced.velocities[j];
    full.accelerations[j].noalias() = basis.phi * reduced.accelerations[j];
  }
  return full;
}

double newmark_energy(const SpMat& mass, const SpMat& stiffness, const Vec& u, const Vec& v) {
  return 0.5 * v.dot(mass * v) + 0.5 * u.dot(stiffness * u);
}

double newmark_energy(const Mat& mass, const Mat& stiffness, const Vec& u, const Vec& v) {
  return 0.5 * v.dot(mass * v) + 0.5 * u.dot(stiffness * u);
}

} // namespace ltrb
