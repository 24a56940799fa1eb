#pragma once

#include "ltrb/newmark.hpp"

#include <optional>

namespace ltrb {

enum class ErrorNorm { L2, H10 };

/// Discrete-in-time relative error over the common grid:
/// sqrt(sum_j |u_h(t_j) - u_R(t_j)|_X^2) / sqrt(sum_j |u_h(t_j)|_X^2)
/// with X the mass (L2) or gram (H10) inner product. Returns nullopt when the
/// reference trajectory has zero norm.
std::optional<double> relative_error(const Trajectory& hf, const Trajectory& rb_lifted,
                                     const OperatorSet& ops, ErrorNorm norm);

struct SingularValueRow {
  int index;     // 1-based
  double sigma;
  double ratio;  // sigma_j / sigma_1
};

/// Singular values up to the numerical rank, for CSV/plot emission.
std::vector<SingularValueRow> singular_value_report(const ReducedBasis& basis);

/// Wall-clock phase breakdown. The four offline/online phases form the
/// LT-RB total; the full-order baseline is assembly plus its time stepping.
struct TimingReport {
  std::optional<double> assemble_fem;
  std::optional<double> laplace_hf;
  std::optional<double> build_rb;
  std::optional<double> solve_td_rb;
  std::optional<double> solve_td_hf;
  int effective_solves = 0;
  int n_steps = 0;
  int R = 0;
  int n_dofs = 0;

  std::optional<double> lt_rb_total() const;
  std::optional<double> hf_total() const;
  std::optional<double> speedup() const;  // hf_total / lt_rb_total, omitted when unmeasured
};

} // namespace ltrb
