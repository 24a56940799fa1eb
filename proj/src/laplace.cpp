#include "ltrb/laplace.hpp"

#include <Eigen/OrderingMethods>

#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <type_traits>

namespace ltrb {

namespace {
constexpr double kPi = std::numbers::pi;
}

QuadratureRule make_quadrature(double alpha, double beta, int m) {
  if (!(alpha > 0.0)) throw std::invalid_argument("make_quadrature: alpha must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("make_quadrature: beta must be positive");
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("make_quadrature: node count must be even and >= 2");

  QuadratureRule rule;
  rule.alpha = alpha;
  rule.beta = beta;
  rule.m = m;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.thetas.resize(m);
  for (int i = 1; i <= m; ++i) rule.thetas[i - 1] = 2.0 * kPi * i / m;

  const int half = m / 2;
  for (int i = 1; i < half; ++i) {
    const double th2 = kPi * i / m;  // theta_i / 2
    const double sn = std::sin(th2);
    rule.nodes[i - 1] = Complex(alpha, beta * std::cos(th2) / sn);
    rule.weights[i - 1] = kPi * beta / (m * sn * sn);
  }
  // theta = pi: cot vanishes, the node is real
  rule.nodes[half - 1] = Complex(alpha, 0.0);
  rule.weights[half - 1] = kPi * beta / m;
  // mirrored half: s_{M-i} = conj(s_i), identical weight
  for (int i = half + 1; i < m; ++i) {
    rule.nodes[i - 1] = std::conj(rule.nodes[m - i - 1]);
    rule.weights[i - 1] = rule.weights[m - i - 1];
  }
  // theta = 2*pi is singular; the slot is replaced by the initial datum
  rule.nodes[m - 1] = Complex(alpha, -std::numeric_limits<double>::infinity());
  rule.weights[m - 1] = kPi / (m * beta);
  rule.replaced_last = true;
  return rule;
}

double TimeSignal::operator()(double t) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::exp_decay: return std::exp(-rate * t);
    case Kind::sine: return std::sin(omega * t);
    case Kind::constant: return 1.0;
  }
  return 0.0;
}

Complex TimeSignal::laplace(Complex s) const {
  switch (kind) {
    case Kind::zero: return 0.0;
    case Kind::exp_decay: return 1.0 / (s + rate);
    case Kind::sine: return omega / (s * s + omega * omega);
    case Kind::constant: return 1.0 / s;
  }
  return 0.0;
}

ShiftedOperatorSolver::ShiftedOperatorSolver(const OperatorSet& ops) : n_(ops.n_dofs) {
  // fill-reducing ordering, same convention as Eigen's simplicial solvers
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> pinv;
  {
    SpMat pattern = ops.mass;
    Eigen::AMDOrdering<int> amd;
    amd(pattern, pinv);
  }
  const Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p = pinv.inverse();
  new_of_.resize(n_);
  for (int i = 0; i < n_; ++i) new_of_[i] = p.indices()[i];

  // permuted upper-triangular pattern with mass/stiffness values; mass and
  // stiffness share one pattern by assembly
  const SpMat& m = ops.mass;
  const SpMat& a = ops.stiffness;
  std::vector<int> count(n_ + 1, 0);
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      const int pi = new_of_[static_cast<int>(it.row())], pj = new_of_[col];
      if (pi <= pj) ++count[pj + 1];
    }
  up_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) up_[j + 1] = up_[j] + count[j + 1];
  const int nnz_up = up_[n_];
  ui_.resize(nnz_up);
  m_up_.resize(nnz_up);
  a_up_.resize(nnz_up);
  std::vector<int> fill = up_;
  for (int col = 0; col < m.outerSize(); ++col) {
    SpMat::InnerIterator itm(m, col);
    SpMat::InnerIterator ita(a, col);
    for (; itm; ++itm, ++ita) {
      const int pi = new_of_[static_cast<int>(itm.row())], pj = new_of_[col];
      if (pi > pj) continue;
      const int slot = fill[pj]++;
      ui_[slot] = pi;
      m_up_[slot] = itm.value();
      a_up_[slot] = ita.value();
    }
  }

  // elimination tree and column counts on the permuted pattern
  std::vector<int> parent(n_, -1), lnz(n_, 0), flag(n_, -1);
  for (int k = 0; k < n_; ++k) {
    parent[k] = -1;
    flag[k] = k;
    for (int ptr = up_[k]; ptr < up_[k + 1]; ++ptr) {
      int i = ui_[ptr];
      if (i >= k) continue;
      for (; flag[i] != k; i = parent[i]) {
        if (parent[i] == -1) parent[i] = k;
        ++lnz[i];
        flag[i] = k;
      }
    }
  }
  lp_.assign(n_ + 1, 0);
  for (int k = 0; k < n_; ++k) lp_[k + 1] = lp_[k] + lnz[k];

  // the factor pattern is shift independent, so one structural pass fixes the
  // row indices and the per-row topological schedule used by every numeric pass
  const int lnnz = lp_[n_];
  li_.resize(lnnz);
  rp_ptr_.assign(n_ + 1, 0);
  rp_col_.resize(lnnz);
  rp_pos_.resize(lnnz);
  std::vector<int> pattern(n_), stack(n_), done(n_, 0);
  std::fill(flag.begin(), flag.end(), -1);
  int rp_fill = 0;
  for (int k = 0; k < n_; ++k) {
    int top = n_;
    flag[k] = k;
    for (int ptr = up_[k]; ptr < up_[k + 1]; ++ptr) {
      int i = ui_[ptr];
      if (i > k) continue;
      int len = 0;
      for (; flag[i] != k; i = parent[i]) {
        pattern[len++] = i;
        flag[i] = k;
      }
      while (len > 0) stack[--top] = pattern[--len];
    }
    for (; top < n_; ++top) {
      const int i = stack[top];
      const int pos = lp_[i] + done[i]++;
      li_[pos] = k;
      rp_col_[rp_fill] = i;
      rp_pos_[rp_fill] = pos;
      ++rp_fill;
    }
    rp_ptr_[k + 1] = rp_fill;
  }
}

// Up-looking unpivoted LDL^T on the permuted upper pattern, one shift.
// No conjugation: the factorization is of the complex-symmetric matrix itself.
template <class Scalar>
void ShiftedOperatorSolver::factor_and_solve(Complex s2, const Scalar* rhs, Scalar* out,
                                             Workspace& ws) const {
  auto shift_value = [&](int slot) {
    if constexpr (std::is_same_v<Scalar, double>)
      return s2.real() * m_up_[slot] + a_up_[slot];
    else
      return s2 * m_up_[slot] + a_up_[slot];
  };
  auto& lx = [&]() -> std::vector<Scalar>& {
    if constexpr (std::is_same_v<Scalar, double>) return ws.r_lx; else return ws.c_lx;
  }();
  auto& d = [&]() -> std::vector<Scalar>& {
    if constexpr (std::is_same_v<Scalar, double>) return ws.r_d; else return ws.c_d;
  }();
  auto& y = [&]() -> std::vector<Scalar>& {
    if constexpr (std::is_same_v<Scalar, double>) return ws.r_y; else return ws.c_y;
  }();
  lx.resize(li_.size());
  d.resize(n_);
  y.assign(n_, Scalar(0));

  for (int k = 0; k < n_; ++k) {
    for (int ptr = up_[k]; ptr < up_[k + 1]; ++ptr) y[ui_[ptr]] += shift_value(ptr);
    d[k] = y[k];
    y[k] = Scalar(0);
    for (int rp = rp_ptr_[k]; rp < rp_ptr_[k + 1]; ++rp) {
      const int i = rp_col_[rp];
      const int pos = rp_pos_[rp];
      const Scalar yi = y[i];
      y[i] = Scalar(0);
      for (int ptr = lp_[i]; ptr < pos; ++ptr) y[li_[ptr]] -= lx[ptr] * yi;
      const Scalar lki = yi / d[i];
      d[k] -= lki * yi;
      lx[pos] = lki;
    }
    if (d[k] == Scalar(0))
      throw NumericalError("shifted solve: zero pivot at column " + std::to_string(k));
  }

  // permute, L z = b, D z, L^T x = z, permute back
  std::vector<Scalar>& z = y;
  for (int i = 0; i < n_; ++i) z[new_of_[i]] = rhs[i];
  for (int j = 0; j < n_; ++j) {
    const Scalar zj = z[j];
    for (int ptr = lp_[j]; ptr < lp_[j + 1]; ++ptr) z[li_[ptr]] -= lx[ptr] * zj;
  }
  for (int j = 0; j < n_; ++j) z[j] /= d[j];
  for (int j = n_ - 1; j >= 0; --j) {
    Scalar zj = z[j];
    for (int ptr = lp_[j]; ptr < lp_[j + 1]; ++ptr) zj -= lx[ptr] * z[li_[ptr]];
    z[j] = zj;
  }
  for (int i = 0; i < n_; ++i) out[i] = z[new_of_[i]];
}

CVec ShiftedOperatorSolver::solve(Complex s, const CVec& rhs, Workspace& ws) const {
  if (!(s.real() > 0.0))
    throw std::invalid_argument("shifted solve: need Re{s} > 0");
  CVec x(n_);
  factor_and_solve<Complex>(s * s, rhs.data(), x.data(), ws);
  return x;
}

Vec ShiftedOperatorSolver::solve_real(double s, const Vec& rhs, Workspace& ws) const {
  if (!(s > 0.0)) throw std::invalid_argument("shifted solve: need Re{s} > 0");
  Vec x(n_);
  factor_and_solve<double>(Complex(s * s, 0.0), rhs.data(), x.data(), ws);
  return x;
}

CVec ShiftedOperatorSolver::solve(Complex s, const CVec& rhs) const {
  Workspace ws;
  return solve(s, rhs, ws);
}

CVec solve_laplace(const OperatorSet& ops, Complex s, const CVec* f_hat, const NodalField& u0h,
                   const NodalField& u1h) {
  if (!(s.real() > 0.0)) throw std::invalid_argument("solve_laplace: need Re{s} > 0");
  if (u0h.size() != ops.n_dofs || u1h.size() != ops.n_dofs)
    throw std::invalid_argument("solve_laplace: initial data size mismatch");

  const Vec mu0 = ops.mass * u0h;
  const Vec mu1 = ops.mass * u1h;
  CVec rhs = (s * mu0.cast<Complex>() + mu1.cast<Complex>());
  if (f_hat) {
    if (f_hat->size() != ops.n_dofs)
      throw std::invalid_argument("solve_laplace: load size mismatch");
    rhs += *f_hat;
  }
  ShiftedOperatorSolver solver(ops);
  return solver.solve(s, rhs);
}

SnapshotSet compute_snapshots(const OperatorSet& ops, const QuadratureRule& rule,
                              const NodalField& u0h, const NodalField& u1h,
                              const SeparableForcing* forcing, int n_threads) {
  const int n = ops.n_dofs;
  const int m = rule.m;
  if (u0h.size() != n || u1h.size() != n)
    throw std::invalid_argument("compute_snapshots: initial data size mismatch");
  if (forcing && !forcing->is_zero() && forcing->g_load.size() != n)
    throw std::invalid_argument("compute_snapshots: forcing load size mismatch");

  SnapshotSet snaps;
  snaps.rule = rule;
  snaps.weights = Eigen::Map<const Vec>(rule.weights.data(), m);
  snaps.columns.resize(n, m);
  snaps.ops_fingerprint = ops.fingerprint();
  snaps.effective_solves = m / 2;

  const ShiftedOperatorSolver solver(ops);
  const Vec mu0 = ops.mass * u0h;
  const Vec mu1 = ops.mass * u1h;
  const bool forced = forcing && !forcing->is_zero();
  const int half = m / 2;

  auto run_node = [&](int i, ShiftedOperatorSolver::Workspace& ws) {
    const Complex s = rule.nodes[i - 1];
    try {
      if (i == half) {  // theta = pi: real node
        Vec rhs = s.real() * mu0 + mu1;
        // the catalog transforms are real on the real axis
        if (forced) rhs += forcing->signal.laplace(Complex(s.real(), 0.0)).real() * forcing->g_load;
        snaps.columns.col(i - 1) = solver.solve_real(s.real(), rhs, ws);
      } else {
        CVec rhs = s * mu0.cast<Complex>() + mu1.cast<Complex>();
        if (forced) rhs += forcing->signal.laplace(s) * forcing->g_load.cast<Complex>();
        const CVec u = solver.solve(s, rhs, ws);
        snaps.columns.col(i - 1) = u.real();
        snaps.columns.col(m - i - 1) = u.real();  // conjugate node shares its real part
      }
    } catch (const std::exception& e) {
      throw NumericalError("snapshot node " + std::to_string(i) + ": " + e.what());
    }
  };

  if (n_threads <= 1 || half < 2) {
    ShiftedOperatorSolver::Workspace ws;
    for (int i = 1; i <= half; ++i) run_node(i, ws);
  } else {
    const int workers = std::min(n_threads, half);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        ShiftedOperatorSolver::Workspace ws;
        try {
          for (int i = 1 + w; i <= half; i += workers) run_node(i, ws);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  snaps.columns.col(m - 1) = u0h;  // replaced slot
  return snaps;
}

} // namespace ltrb
