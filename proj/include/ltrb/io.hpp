#pragma once

#include "ltrb/metrics.hpp"

#include <map>
#include <string>

namespace ltrb {

// --- Matrix Market ----------------------------------------------------------

/// Coordinate format; symmetric matrices store the lower triangle.
void write_matrix_market(const std::string& path, const SpMat& m, bool symmetric = true);
SpMat read_matrix_market(const std::string& path);

/// Dense array format (column major).
void write_matrix_market_dense(const std::string& path, const Mat& m);
Mat read_matrix_market_dense(const std::string& path);

// --- basis / snapshot persistence -------------------------------------------

/// Sidecar metadata binding a persisted artifact to its discretization.
struct ArtifactMeta {
  double alpha = 0.0;
  double beta = 0.0;
  int m = 0;
  double c = 0.0;
  std::uint64_t mesh_hash = 0;
};

/// Writes `<path>` (dense array Phi) and `<path>.meta`.
void save_basis(const std::string& path, const ReducedBasis& basis, const ArtifactMeta& meta);
std::pair<ReducedBasis, ArtifactMeta> load_basis(const std::string& path);

void save_snapshots(const std::string& path, const SnapshotSet& snaps, const ArtifactMeta& meta);

// --- CSV emissions -----------------------------------------------------------

void write_singular_values_csv(const std::string& path,
                               const std::vector<SingularValueRow>& rows);

struct ErrorRow {
  int m = 0;
  int r = 0;
  double err_l2 = 0.0;
  double err_h10 = 0.0;
};
void write_error_vs_r_csv(const std::string& path, const std::vector<ErrorRow>& rows);
void write_error_vs_m_csv(const std::string& path, const std::vector<ErrorRow>& rows);

void write_timings_csv(const std::string& path, const TimingReport& t);

/// Columns `t,dof_0,...` (full) or `t,q_0,...` (reduced).
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Raw binary dump (header + doubles), for lossless round trips.
void write_trajectory_binary(const std::string& path, const Trajectory& traj);
Trajectory read_trajectory_binary(const std::string& path);

/// 17-significant-digit formatting used by every emitter, so identical runs
/// produce identical bytes.
std::string format_double(double v);

} // namespace ltrb
