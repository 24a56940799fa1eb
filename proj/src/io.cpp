#include "ltrb/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace ltrb {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

void skip_comments(std::istream& in) {
  while (in.peek() == '%') in.ignore(4096, '\n');
}

} // namespace

void write_matrix_market(const std::string& path, const SpMat& m, bool symmetric) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general")
      << '\n';
  long nnz = 0;
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it)
      if (!symmetric || it.row() >= it.col()) ++nnz;
  out << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (int col = 0; col < m.outerSize(); ++col)
    for (SpMat::InnerIterator it(m, col); it; ++it) {
      if (symmetric && it.row() < it.col()) continue;
      out << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << format_double(it.value()) << '\n';
    }
}

SpMat read_matrix_market(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error(path + ": not a Matrix Market file");
  const bool symmetric = line.find("symmetric") != std::string::npos;
  if (line.find("coordinate") == std::string::npos)
    throw std::runtime_error(path + ": expected coordinate format");
  skip_comments(in);
  long rows, cols, nnz;
  if (!(in >> rows >> cols >> nnz)) throw std::runtime_error(path + ": bad size line");
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(symmetric ? 2 * nnz : nnz);
  for (long k = 0; k < nnz; ++k) {
    long i, j;
    double v;
    if (!(in >> i >> j >> v)) throw std::runtime_error(path + ": truncated entry list");
    trip.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) trip.emplace_back(j - 1, i - 1, v);
  }
  SpMat m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

void write_matrix_market_dense(const std::string& path, const Mat& m) {
  auto out = open_out(path);
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << ' ' << m.cols() << '\n';
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) out << format_double(m(i, j)) << '\n';
}

Mat read_matrix_market_dense(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw std::runtime_error(path + ": not a Matrix Market file");
  if (line.find("array") == std::string::npos)
    throw std::runtime_error(path + ": expected dense array format");
  skip_comments(in);
  long rows, cols;
  if (!(in >> rows >> cols)) throw std::runtime_error(path + ": bad size line");
  Mat m(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i)
      if (!(in >> m(i, j))) throw std::runtime_error(path + ": truncated value list");
  return m;
}

void save_basis(const std::string& path, const ReducedBasis& basis, const ArtifactMeta& meta) {
  write_matrix_market_dense(path, basis.phi);
  auto out = open_out(path + ".meta");
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, meta.mesh_hash);
  out << "alpha = " << format_double(meta.alpha) << '\n';
  out << "beta = " << format_double(meta.beta) << '\n';
  out << "m = " << meta.m << '\n';
  out << "c = " << format_double(meta.c) << '\n';
  out << "mesh_hash = " << hash << '\n';
  out << "r = " << basis.r << '\n';
  out << "R = " << basis.R << '\n';
  out << "sigmas =";
  for (int j = 0; j < basis.singular_values.size(); ++j)
    out << ' ' << format_double(basis.singular_values[j]);
  out << '\n';
}

std::pair<ReducedBasis, ArtifactMeta> load_basis(const std::string& path) {
  ReducedBasis basis;
  basis.phi = read_matrix_market_dense(path);

  auto in = open_in(path + ".meta");
  ArtifactMeta meta;
  std::string key, eq;
  std::vector<double> sigmas;
  while (in >> key) {
    if (!(in >> eq) || eq != "=") throw std::runtime_error(path + ".meta: malformed line");
    if (key == "alpha") in >> meta.alpha;
    else if (key == "beta") in >> meta.beta;
    else if (key == "m") in >> meta.m;
    else if (key == "c") in >> meta.c;
    else if (key == "mesh_hash") in >> std::hex >> meta.mesh_hash >> std::dec;
    else if (key == "r") in >> basis.r;
    else if (key == "R") in >> basis.R;
    else if (key == "sigmas") {
      std::string rest;
      std::getline(in, rest);
      std::istringstream values(rest);
      double v;
      while (values >> v) sigmas.push_back(v);
    } else {
      std::string skip;
      std::getline(in, skip);
    }
    if (in.fail() && !in.eof()) throw std::runtime_error(path + ".meta: malformed value for " + key);
  }
  basis.singular_values = Eigen::Map<const Vec>(sigmas.data(), sigmas.size());
  if (basis.R != basis.phi.cols())
    throw std::runtime_error(path + ": basis width disagrees with metadata");
  return {basis, meta};
}

void save_snapshots(const std::string& path, const SnapshotSet& snaps, const ArtifactMeta& meta) {
  write_matrix_market_dense(path, snaps.columns);
  auto out = open_out(path + ".meta");
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, meta.mesh_hash);
  out << "alpha = " << format_double(meta.alpha) << '\n';
  out << "beta = " << format_double(meta.beta) << '\n';
  out << "m = " << meta.m << '\n';
  out << "c = " << format_double(meta.c) << '\n';
  out << "mesh_hash = " << hash << '\n';
  out << "weights =";
  for (int j = 0; j < snaps.weights.size(); ++j) out << ' ' << format_double(snaps.weights[j]);
  out << '\n';
}

void write_singular_values_csv(const std::string& path,
                               const std::vector<SingularValueRow>& rows) {
  auto out = open_out(path);
  out << "j,sigma,ratio\n";
  for (const auto& row : rows)
    out << row.index << ',' << format_double(row.sigma) << ',' << format_double(row.ratio)
        << '\n';
}

void write_error_vs_r_csv(const std::string& path, const std::vector<ErrorRow>& rows) {
  auto out = open_out(path);
  out << "R,err_L2,err_H10\n";
  for (const auto& row : rows)
    out << row.r << ',' << format_double(row.err_l2) << ',' << format_double(row.err_h10)
        << '\n';
}

void write_error_vs_m_csv(const std::string& path, const std::vector<ErrorRow>& rows) {
  auto out = open_out(path);
  out << "M,R,err_L2,err_H10\n";
  for (const auto& row : rows)
    out << row.m << ',' << row.r << ',' << format_double(row.err_l2) << ','
        << format_double(row.err_h10) << '\n';
}

void write_timings_csv(const std::string& path, const TimingReport& t) {
  auto out = open_out(path);
  out << "phase,seconds\n";
  auto emit = [&](const char* name, const std::optional<double>& v) {
    if (v) out << name << ',' << format_double(*v) << '\n';
  };
  emit("assemble_fem", t.assemble_fem);
  emit("laplace_hf", t.laplace_hf);
  emit("build_rb", t.build_rb);
  emit("solve_td_rb", t.solve_td_rb);
  emit("solve_td_hf", t.solve_td_hf);
  emit("lt_rb_total", t.lt_rb_total());
  emit("hf_total", t.hf_total());
  emit("speedup", t.speedup());
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  const char* prefix = traj.space == CoordinateSpace::full ? "dof_" : "q_";
  const long n = traj.n_states() > 0 ? traj.displacements.front().size() : 0;
  out << 't';
  for (long i = 0; i < n; ++i) out << ',' << prefix << i;
  out << '\n';
  for (int j = 0; j < traj.n_states(); ++j) {
    out << format_double(traj.times[j]);
    for (long i = 0; i < n; ++i) out << ',' << format_double(traj.displacements[j][i]);
    out << '\n';
  }
}

void write_trajectory_binary(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const std::int64_t n_states = traj.n_states();
  const std::int64_t dim = n_states > 0 ? traj.displacements.front().size() : 0;
  const std::int64_t space = traj.space == CoordinateSpace::full ? 0 : 1;
  out.write("LTRBTRAJ", 8);
  out.write(reinterpret_cast<const char*>(&n_states), 8);
  out.write(reinterpret_cast<const char*>(&dim), 8);
  out.write(reinterpret_cast<const char*>(&space), 8);
  out.write(reinterpret_cast<const char*>(traj.times.data()), 8 * n_states);
  for (const auto* seq : {&traj.displacements, &traj.velocities, &traj.accelerations})
    for (const auto& v : *seq) out.write(reinterpret_cast<const char*>(v.data()), 8 * dim);
}

Trajectory read_trajectory_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "LTRBTRAJ", 8) != 0)
    throw std::runtime_error(path + ": not a trajectory dump");
  std::int64_t n_states, dim, space;
  in.read(reinterpret_cast<char*>(&n_states), 8);
  in.read(reinterpret_cast<char*>(&dim), 8);
  in.read(reinterpret_cast<char*>(&space), 8);
  Trajectory traj;
  traj.space = space == 0 ? CoordinateSpace::full : CoordinateSpace::reduced;
  traj.times.resize(n_states);
  in.read(reinterpret_cast<char*>(traj.times.data()), 8 * n_states);
  for (auto* seq : {&traj.displacements, &traj.velocities, &traj.accelerations}) {
    seq->resize(n_states);
    for (auto& v : *seq) {
      v.resize(dim);
      in.read(reinterpret_cast<char*>(v.data()), 8 * dim);
    }
  }
  if (!in) throw std::runtime_error(path + ": truncated trajectory dump");
  return traj;
}

} // namespace ltrb
