#pragma once

#include "ltrb/pod.hpp"

namespace ltrb {

struct NewmarkConfig {
  double t_final = 1.0;
  int n_steps = 1;
  double gamma = 0.5;   // velocity weight
  double beta_n = 0.25; // displacement weight (average acceleration)
  int store_every = 1;  // trajectory recording stride; final state always kept
};

enum class CoordinateSpace { full, reduced };

/// Uniform-grid time series of (u, u_dot, u_ddot) coefficient vectors.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> displacements;
  std::vector<Vec> velocities;
  std::vector<Vec> accelerations;
  CoordinateSpace space = CoordinateSpace::full;

  int n_states() const { return static_cast<int>(times.size()); }
};

/// Time-dependent load; writes f(t) into out (sized by caller). Null = zero.
using LoadFn = std::function<void(double t, Vec& out)>;

/// Per-step hook, called with j = 0..n_steps and the current states.
using StepObserver = std::function<void(int j, double t, const Vec& u, const Vec& v, const Vec& a)>;

/// Implicit Newmark for M u'' + K u = f(t). The initial acceleration solves
/// M a0 = f(0) - K u0, and the effective matrix M + beta_n dt^2 K is factored
/// once. Sparse overload uses a sparse Cholesky, dense overload a dense one.
void newmark_run(const SpMat& mass, const SpMat& stiffness, const LoadFn& load, const Vec& u0,
                 const Vec& v0, const NewmarkConfig& cfg, const StepObserver& observe);
void newmark_run(const Mat& mass, const Mat& stiffness, const LoadFn& load, const Vec& u0,
                 const Vec& v0, const NewmarkConfig& cfg, const StepObserver& observe);

Trajectory newmark_solve(const SpMat& mass, const SpMat& stiffness, const LoadFn& load,
                         const Vec& u0, const Vec& v0, const NewmarkConfig& cfg);
Trajectory newmark_solve(const Mat& mass, const Mat& stiffness, const LoadFn& load, const Vec& u0,
                         const Vec& v0, const NewmarkConfig& cfg);

/// Galerkin reduction of operators, initial data and load onto span(Phi):
/// mass_r = Phi^T M Phi, stiffness_r = c^2 I (exact for a B-orthonormal basis),
/// u0_r = Phi^T B u0h, load_r(t) = Phi^T f_h(t).
struct ReducedSystem {
  Mat mass_r;
  Mat stiffness_r;
  Vec u0_r, u1_r;
  LoadFn load_r;  // null when the forcing vanishes
  int R = 0;
  double c = 1.0;
};

ReducedSystem reduce_system(const OperatorSet& ops, const ReducedBasis& basis,
                            const NodalField& u0h, const NodalField& u1h,
                            const SeparableForcing* forcing = nullptr);

/// Maps a reduced trajectory back to dof coordinates through Phi.
Trajectory lift(const ReducedBasis& basis, const Trajectory& reduced);

/// Discrete energy 0.5 v^T M v + 0.5 u^T K u (conserved by the average
/// acceleration scheme when f = 0).
double newmark_energy(const SpMat& mass, const SpMat& stiffness, const Vec& u, const Vec& v);
double newmark_energy(const Mat& mass, const Mat& stiffness, const Vec& u, const Vec& v);

} // namespace ltrb
