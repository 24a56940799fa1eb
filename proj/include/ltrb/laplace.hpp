#pragma once

#include "ltrb/fem.hpp"

#include <optional>
#include <vector>

namespace ltrb {

/// Trapezoid-in-angle sampling of the vertical line Re{s} = alpha through the
/// Moebius map: s_i = alpha + i*beta*cot(theta_i/2), omega_i = pi*beta/(M sin^2(theta_i/2)),
/// theta_i = 2*pi*i/M. The node at theta = 2*pi is unusable and is replaced by
/// the initial datum with weight pi/(M*beta).
struct QuadratureRule {
  double alpha = 0.0;
  double beta = 0.0;
  int m = 0;
  std::vector<Complex> nodes;    // s_1..s_M; the replaced slot holds alpha - i*inf
  std::vector<double> weights;   // omega_1..omega_M
  std::vector<double> thetas;    // 2*pi*i/M
  bool replaced_last = true;
};

QuadratureRule make_quadrature(double alpha, double beta, int m);

/// Time signals with closed-form Laplace transforms, for separable forcing
/// f(x,t) = g(x) q(t).
struct TimeSignal {
  enum class Kind { zero, exp_decay, sine, constant };
  Kind kind = Kind::zero;
  double rate = 1.0;   // exp_decay: q(t) = exp(-rate t)
  double omega = 1.0;  // sine: q(t) = sin(omega t)

  double operator()(double t) const;
  Complex laplace(Complex s) const;
};

struct SeparableForcing {
  NodalField g_load;  // load vector of the spatial profile
  TimeSignal signal;
  bool is_zero() const { return signal.kind == TimeSignal::Kind::zero; }
};

/// Sparse direct factorization of the shifted family s^2 M + A. The matrices
/// are complex symmetric with positive-definite imaginary part whenever
/// Im{s^2} != 0, so an unpivoted LDL^T is well defined; the AMD ordering and
/// elimination structure are computed once and shared across all shifts.
class ShiftedOperatorSolver {
public:
  explicit ShiftedOperatorSolver(const OperatorSet& ops);

  struct Workspace {
    std::vector<Complex> c_lx, c_d, c_y;
    std::vector<double> r_lx, r_d, r_y;
  };

  CVec solve(Complex s, const CVec& rhs, Workspace& ws) const;
  Vec solve_real(double s, const Vec& rhs, Workspace& ws) const;
  CVec solve(Complex s, const CVec& rhs) const;

  int dim() const { return n_; }
  long factor_nnz() const { return static_cast<long>(li_.size()); }

private:
  template <class Scalar>
  void factor_and_solve(Complex s2, const Scalar* rhs, Scalar* out, Workspace& ws) const;

  int n_ = 0;
  std::vector<int> new_of_;          // old index -> AMD position
  std::vector<int> up_, ui_;         // permuted upper-triangular pattern (CSC)
  std::vector<double> m_up_, a_up_;  // mass/stiffness values aligned with ui_
  std::vector<int> lp_;              // factor column pointers
  std::vector<int> li_;              // factor row indices (shift independent)
  // per-row elimination schedule, topological order: visited columns and the
  // storage slot of L(row, column); replaces the etree walk in every numeric pass
  std::vector<int> rp_ptr_, rp_col_, rp_pos_;
};

/// Solves (s^2 M + A) u = f_hat + s M u0h + M u1h (Laplace-domain problem).
CVec solve_laplace(const OperatorSet& ops, Complex s, const CVec* f_hat, const NodalField& u0h,
                   const NodalField& u1h);

struct SnapshotSet {
  Mat columns;   // N_h x M; column j = Re{u_hat(s_{j+1})}, last column = u0h
  Vec weights;
  QuadratureRule rule;
  int effective_solves = 0;
  std::uint64_t ops_fingerprint = 0;
};

/// Computes all M snapshot columns from M/2 linear solves: nodes i and M-i are
/// complex conjugates and share their real part, and the node at theta = pi is
/// real and solved in real arithmetic.
SnapshotSet compute_snapshots(const OperatorSet& ops, const QuadratureRule& rule,
                              const NodalField& u0h, const NodalField& u1h,
                              const SeparableForcing* forcing = nullptr, int n_threads = 1);

} // namespace ltrb
