#ifndef AICOG_INTERPRET_HPP
#define AICOG_INTERPRET_HPP

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "aicog/compgeo.hpp"
#include "aicog/errors.hpp"
#include "aicog/graphio.hpp"
#include "aicog/linalg.hpp"
#include "aicog/model.hpp"

// Interpretability exports: balance loadings, 2D PCA projections, and
// paired log-ratio trajectory paths, all serialized as CSV for external
// plotting.

namespace aicog {

// Shortest round-trip decimal for doubles, so CSV exports are byte-stable.
inline std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

struct BalanceLoadings {
  BasisKind basis_kind = BasisKind::Helmert;
  Matrix loadings;  // K x (K-1), column b is the contrast v_b
};

inline BalanceLoadings export_loadings(const ModelState& state, bool rotate_varimax) {
  IlrBasis basis = current_basis(state);
  if (rotate_varimax) basis = varimax_rotate(basis);
  BalanceLoadings out;
  out.basis_kind = basis.kind;
  out.loadings = basis.columns;
  return out;
}

struct Pca2d {
  Matrix projection;                    // N x 2
  std::array<double, 2> explained{};    // variance fractions
  std::vector<double> mean;             // d
  Matrix axes;                          // d x 2, column per principal axis
  bool degenerate = false;              // covariance rank < 2
};

// Top-2 eigenvectors of the covariance via Jacobi rotations; the sign of each
// axis is fixed so its largest-magnitude loading is positive.
inline Pca2d pca_2d(const Matrix& points) {
  const std::size_t n = points.rows, d = points.cols;
  if (n < 3) raise(ErrorCode::DimMismatch, "pca_2d needs at least 3 points");
  if (d < 2) raise(ErrorCode::DimMismatch, "pca_2d needs at least 2 dimensions");

  Pca2d out;
  out.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out.mean[j] += points(i, j);
  for (double& m : out.mean) m /= static_cast<double>(n);

  Matrix cov(d, d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < d; ++a) {
      const double va = points(i, a) - out.mean[a];
      for (std::size_t b = a; b < d; ++b)
        cov(a, b) += va * (points(i, b) - out.mean[b]);
    }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      cov(a, b) /= static_cast<double>(n - 1);
      cov(b, a) = cov(a, b);
    }

  const EigenResult eig = jacobi_eigen(cov);
  double trace = 0.0;
  for (double v : eig.values) trace += std::max(v, 0.0);

  out.axes = Matrix(d, 2, 0.0);
  for (int comp = 0; comp < 2; ++comp) {
    std::size_t arg_max = 0;
    for (std::size_t j = 1; j < d; ++j)
      if (std::abs(eig.vectors(j, comp)) > std::abs(eig.vectors(arg_max, comp))) arg_max = j;
    const double sign = eig.vectors(arg_max, comp) < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < d; ++j) out.axes(j, comp) = sign * eig.vectors(j, comp);
  }

  const double lambda1 = std::max(eig.values[0], 0.0);
  const double lambda2 = std::max(eig.values[1], 0.0);
  if (lambda2 <= 1e-12 * std::max(lambda1, 1e-300)) {
    out.degenerate = true;
    std::cerr << "warning: covariance rank < 2, second PCA coordinate set to zero\n";
    for (std::size_t j = 0; j < d; ++j) out.axes(j, 1) = 0.0;
  }
  if (trace > 0.0) {
    out.explained[0] = lambda1 / trace;
    out.explained[1] = out.degenerate ? 0.0 : lambda2 / trace;
  }

  out.projection = Matrix(n, 2, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int comp = 0; comp < 2; ++comp) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j)
        s += (points(i, j) - out.mean[j]) * out.axes(j, comp);
      out.projection(i, comp) = s;
    }
  return out;
}

inline std::array<double, 2> pca_project(const Pca2d& pca, const std::vector<double>& point) {
  std::array<double, 2> out{0.0, 0.0};
  for (int comp = 0; comp < 2; ++comp)
    for (std::size_t j = 0; j < point.size(); ++j)
      out[comp] += (point[j] - pca.mean[j]) * pca.axes(j, comp);
  return out;
}

struct TrajectoryPath {
  int node = 0;
  std::size_t component_a = 0, component_b = 0;
  std::vector<double> s_grid;
  std::vector<Composition> compositions;
  std::vector<IlrPoint> ilr_points;
  std::vector<std::array<double, 2>> pca_points;
};

// Applies the paired log-ratio intervention to the node's composition and
// maps every point through the current basis and a PCA fitted on all node
// embeddings.
inline TrajectoryPath export_trajectory(const ModelState& state, int node, std::size_t a,
                                        std::size_t b, const std::vector<double>& s_grid) {
  if (node < 0 || node >= state.num_nodes())
    raise(ErrorCode::BadIndices, "node out of range");
  const IlrBasis basis = current_basis(state);
  const Matrix embedding = embed_all(state, basis);
  const Pca2d pca = pca_2d(embedding);

  TrajectoryPath path;
  path.node = node;
  path.component_a = a;
  path.component_b = b;
  path.s_grid = s_grid;
  path.compositions = tradeoff_trajectory(node_composition(state, node), a, b, s_grid);
  path.ilr_points.reserve(s_grid.size());
  path.pca_points.reserve(s_grid.size());
  for (const Composition& z : path.compositions) {
    IlrPoint x = ilr(z, basis);
    path.pca_points.push_back(pca_project(pca, x.coords));
    path.ilr_points.push_back(std::move(x));
  }
  return path;
}

// --- CSV exports ------------------------------------------------------------

inline void write_loadings_csv(const BalanceLoadings& loadings, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path);
  out << "component";
  for (std::size_t b = 0; b < loadings.loadings.cols; ++b) out << ",balance_" << b;
  out << "\n";
  for (std::size_t k = 0; k < loadings.loadings.rows; ++k) {
    out << k;
    for (std::size_t b = 0; b < loadings.loadings.cols; ++b)
      out << "," << format_double(loadings.loadings(k, b));
    out << "\n";
  }
}

inline void write_trajectory_csv(const TrajectoryPath& path, const std::string& file_path) {
  std::ofstream out(file_path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + file_path);
  const std::size_t num_parts = path.compositions.empty() ? 0 : path.compositions[0].size();
  out << "s";
  for (std::size_t k = 0; k < num_parts; ++k) out << ",comp_" << k;
  for (std::size_t d = 0; d + 1 < num_parts; ++d) out << ",ilr_" << d;
  out << ",pc1,pc2\n";
  for (std::size_t row = 0; row < path.s_grid.size(); ++row) {
    out << format_double(path.s_grid[row]);
    for (std::size_t k = 0; k < num_parts; ++k)
      out << "," << format_double(path.compositions[row][k]);
    for (std::size_t d = 0; d + 1 < num_parts; ++d)
      out << "," << format_double(path.ilr_points[row][d]);
    out << "," << format_double(path.pca_points[row][0]) << ","
        << format_double(path.pca_points[row][1]) << "\n";
  }
}

// (node, coordinate value, label) triples for label-wise distribution plots.
inline void write_coordinate_by_label_csv(const Matrix& embedding, std::size_t coordinate,
                                          const LabelTable& labels,
                                          const std::vector<std::string>& node_names,
                                          const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot write " + path);
  out << "node,coordinate_value,label\n";
  for (int node : labels.labeled_nodes()) {
    if (node_names.empty())
      out << node;
    else
      out << node_names[node];
    out << "," << format_double(embedding(node, coordinate)) << ","
        << labels.class_names[labels.labels[node]] << "\n";
  }
}

}  // namespace aicog

#endif  // AICOG_INTERPRET_HPP
