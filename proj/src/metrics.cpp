#include "ltrb/metrics.hpp"

#include <cmath>

namespace ltrb {

std::optional<double> relative_error(const Trajectory& hf, const Trajectory& rb_lifted,
                                     const OperatorSet& ops, ErrorNorm norm) {
  if (hf.n_states() != rb_lifted.n_states() || hf.times != rb_lifted.times)
    throw std::invalid_argument("relative_error: trajectories live on different time grids");
  if (hf.n_states() == 0) throw std::invalid_argument("relative_error: empty trajectories");

  const SpMat& gram = norm == ErrorNorm::L2 ? ops.mass : ops.gram_h10;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < hf.n_states(); ++j) {
    const Vec& u = hf.displacements[j];
    const Vec d = u - rb_lifted.displacements[j];
    num += d.dot(gram * d);
    den += u.dot(gram * u);
  }
  if (den <= 0.0) return std::nullopt;
  return std::sqrt(num / den);
}

std::vector<SingularValueRow> singular_value_report(const ReducedBasis& basis) {
  if (basis.r < 1) throw std::invalid_argument("singular_value_report: empty basis");
  std::vector<SingularValueRow> rows;
  rows.reserve(basis.r);
  const double sigma1 = basis.singular_values[0];
  for (int j = 0; j < basis.r; ++j)
    rows.push_back({j + 1, basis.singular_values[j], basis.singular_values[j] / sigma1});
  return rows;
}

std::optional<double> TimingReport::lt_rb_total() const {
  if (!assemble_fem || !laplace_hf || !build_rb || !solve_td_rb) return std::nullopt;
  return *assemble_fem + *laplace_hf + *build_rb + *solve_td_rb;
}

std::optional<double> TimingReport::hf_total() const {
  if (!assemble_fem || !solve_td_hf) return std::nullopt;
  return *assemble_fem + *solve_td_hf;
}

std::optional<double> TimingReport::speedup() const {
  const auto hf = hf_total();
  const auto rb = lt_rb_total();
  if (!hf || !rb || !(*rb > 0.0)) return std::nullopt;
  return *hf / *rb;
}

} // namespace ltrb
