#ifndef AICOG_COMPGEO_HPP
#define AICOG_COMPGEO_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "aicog/errors.hpp"
#include "aicog/linalg.hpp"

// Aitchison geometry on the open simplex: closure, ILR bases and transforms,
// distances, subcomposition projections, varimax rotation, and paired
// log-ratio trade-off trajectories.

namespace aicog {

// Strictly positive proportions summing to one.
struct Composition {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

enum class BasisKind { Helmert, Learned, VarimaxRotated };

inline const char* basis_kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::Helmert: return "helmert";
    case BasisKind::Learned: return "learned";
    case BasisKind::VarimaxRotated: return "varimax_rotated";
  }
  return "unknown";
}

// K x (K-1) matrix whose columns are an orthonormal basis of the contrast
// space {v : v^T 1 = 0}.
struct IlrBasis {
  Matrix columns;  // K x (K-1)
  BasisKind kind = BasisKind::Helmert;

  std::size_t num_parts() const { return columns.rows; }
  std::size_t dim() const { return columns.cols; }
};

// Unconstrained ILR coordinates in R^{K-1}.
struct IlrPoint {
  std::vector<double> coords;

  std::size_t size() const { return coords.size(); }
  double operator[](std::size_t d) const { return coords[d]; }
};

// Row-orthonormal map carrying full-space ILR differences onto the ILR
// coordinates of the re-closed subcomposition.
struct SubcompProjection {
  std::vector<std::size_t> keep_set;  // ordered, 0-based
  Matrix matrix;                      // (|S|-1) x (K-1)
};

inline Composition closure(const std::vector<double>& raw) {
  if (raw.size() < 2) raise(ErrorCode::TooShort, "composition needs at least 2 parts");
  double total = 0.0;
  for (double v : raw) {
    if (!(v > 0.0)) raise(ErrorCode::NonPositiveEntry, "entry " + std::to_string(v));
    total += v;
  }
  Composition z;
  z.values.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) z.values[k] = raw[k] / total;
  return z;
}

// Stable softmax; output lands strictly inside the simplex.
inline Composition softmax(const std::vector<double>& logits) {
  if (logits.size() < 2) raise(ErrorCode::TooShort, "softmax needs at least 2 logits");
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  std::vector<double> e(logits.size());
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    e[k] = std::exp(logits[k] - mx);
    total += e[k];
  }
  Composition z;
  z.values.resize(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) z.values[k] = e[k] / total;
  return z;
}

// Normalized sequential contrasts: column b weighs the first b parts at
// 1/sqrt(b(b+1)) against part b+1 at -b/sqrt(b(b+1)).
inline IlrBasis helmert_basis(std::size_t num_parts) {
  if (num_parts < 2) raise(ErrorCode::KTooSmall, "need K >= 2");
  IlrBasis basis;
  basis.kind = BasisKind::Helmert;
  basis.columns = Matrix(num_parts, num_parts - 1, 0.0);
  for (std::size_t b = 1; b < num_parts; ++b) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(b) * (b + 1));
    for (std::size_t i = 0; i < b; ++i) basis.columns(i, b - 1) = scale;
    basis.columns(b, b - 1) = -static_cast<double>(b) * scale;
  }
  return basis;
}

// Column-center, then orthonormalize by QR with diag(R) > 0. Exposed
// separately because the learned-basis gradient needs R as well.
inline QrResult centered_qr_of_params(const Matrix& params) {
  if (params.cols + 1 != params.rows)
    raise(ErrorCode::ShapeMismatch, "basis params must be K x (K-1)");
  const std::size_t num_parts = params.rows;
  Matrix centered = params;
  for (std::size_t j = 0; j < centered.cols; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < num_parts; ++i) mean += centered(i, j);
    mean /= static_cast<double>(num_parts);
    for (std::size_t i = 0; i < num_parts; ++i) centered(i, j) -= mean;
  }
  QrResult qr = householder_qr(centered);
  for (std::size_t k = 0; k < qr.r.rows; ++k) {
    if (std::abs(qr.r(k, k)) < 1e-10)
      raise(ErrorCode::RankDeficient, "centered basis params have rank < K-1");
  }
  return qr;
}

// Any unconstrained K x (K-1) matrix induces a valid basis: columns of Q are
// linear combinations of the centered (sum-zero) columns of W, hence
// orthonormal and in the contrast space. Deterministic in W by the sign
// convention above.
inline IlrBasis learned_basis_from_params(const Matrix& params) {
  QrResult qr = centered_qr_of_params(params);
  IlrBasis basis;
  basis.kind = BasisKind::Learned;
  basis.columns = std::move(qr.q);
  return basis;
}

inline IlrPoint ilr(const Composition& z, const IlrBasis& basis) {
  if (z.size() != basis.num_parts())
    raise(ErrorCode::DimMismatch, "composition/basis size disagree");
  IlrPoint x;
  x.coords.assign(basis.dim(), 0.0);
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double lz = std::log(z.values[k]);
    for (std::size_t d = 0; d < basis.dim(); ++d) x.coords[d] += basis.columns(k, d) * lz;
  }
  return x;
}

inline Composition ilr_inverse(const IlrPoint& x, const IlrBasis& basis) {
  if (x.size() != basis.dim())
    raise(ErrorCode::DimMismatch, "point/basis dimension disagree");
  std::vector<double> logits(basis.num_parts(), 0.0);
  for (std::size_t k = 0; k < basis.num_parts(); ++k)
    for (std::size_t d = 0; d < basis.dim(); ++d)
      logits[k] += basis.columns(k, d) * x.coords[d];
  return softmax(logits);
}

inline double aitchison_distance(const Composition& a, const Composition& b,
                                 const IlrBasis& basis) {
  if (a.size() != b.size()) raise(ErrorCode::DimMismatch, "compositions differ in size");
  const IlrPoint xa = ilr(a, basis);
  const IlrPoint xb = ilr(b, basis);
  double s = 0.0;
  for (std::size_t d = 0; d < xa.size(); ++d) {
    const double diff = xa.coords[d] - xb.coords[d];
    s += diff * diff;
  }
  return std::sqrt(s);
}

// P_S = V_S^T R_S V, where R_S selects the kept rows. Rows of P_S are
// orthonormal, so ILR differences of re-closed subcompositions equal the
// projected full-space differences.
inline SubcompProjection subcomp_projection(const IlrBasis& basis,
                                            const std::vector<std::size_t>& keep,
                                            const IlrBasis& sub_basis) {
  const std::size_t num_parts = basis.num_parts();
  if (keep.size() < 2) raise(ErrorCode::BadSubset, "need |S| >= 2");
  std::vector<char> seen(num_parts, 0);
  for (std::size_t idx : keep) {
    if (idx >= num_parts) raise(ErrorCode::BadSubset, "index out of range");
    if (seen[idx]) raise(ErrorCode::BadSubset, "duplicate index");
    seen[idx] = 1;
  }
  if (sub_basis.num_parts() != keep.size())
    raise(ErrorCode::DimMismatch, "sub-basis size must match |S|");

  // (V_S^T R_S)(k', k) picks row keep[k'] of V.
  Matrix selected(keep.size(), basis.dim(), 0.0);
  for (std::size_t r = 0; r < keep.size(); ++r)
    for (std::size_t d = 0; d < basis.dim(); ++d)
      selected(r, d) = basis.columns(keep[r], d);

  SubcompProjection proj;
  proj.keep_set = keep;
  proj.matrix = matmul_tn(sub_basis.columns, selected);
  return proj;
}

inline Composition subcompose(const Composition& z, const std::vector<std::size_t>& keep) {
  if (keep.size() < 2) raise(ErrorCode::BadSubset, "need |S| >= 2");
  std::vector<double> picked;
  picked.reserve(keep.size());
  std::vector<char> seen(z.size(), 0);
  for (std::size_t idx : keep) {
    if (idx >= z.size()) raise(ErrorCode::BadSubset, "index out of range");
    if (seen[idx]) raise(ErrorCode::BadSubset, "duplicate index");
    seen[idx] = 1;
    picked.push_back(z.values[idx]);
  }
  return closure(picked);
}

inline double varimax_criterion(const Matrix& loadings) {
  const double p = static_cast<double>(loadings.rows);
  double crit = 0.0;
  for (std::size_t j = 0; j < loadings.cols; ++j) {
    double s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < loadings.rows; ++i) {
      const double sq = loadings(i, j) * loadings(i, j);
      s2 += sq;
      s4 += sq * sq;
    }
    crit += s4 - s2 * s2 / p;
  }
  return crit;
}

// Kaiser-normalized pairwise rotations. The accumulated rotation is applied
// to the original columns, so orthonormality and the sum-zero constraint are
// preserved exactly and all induced ILR distances are unchanged.
inline IlrBasis varimax_rotate(const IlrBasis& basis, double tol = 1e-8,
                               int max_sweeps = 1000) {
  const std::size_t p = basis.num_parts();
  const std::size_t nf = basis.dim();
  IlrBasis out;
  out.kind = BasisKind::VarimaxRotated;
  out.columns = basis.columns;
  if (nf < 2) return out;

  // Row norms for Kaiser normalization.
  std::vector<double> row_norm(p, 1.0);
  Matrix load = basis.columns;
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < nf; ++j) s += load(i, j) * load(i, j);
    row_norm[i] = s > 0.0 ? std::sqrt(s) : 1.0;
    for (std::size_t j = 0; j < nf; ++j) load(i, j) /= row_norm[i];
  }

  const double fp = static_cast<double>(p);
  double crit = varimax_criterion(load);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j + 1 < nf; ++j) {
      for (std::size_t k = j + 1; k < nf; ++k) {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          const double u = load(i, j) * load(i, j) - load(i, k) * load(i, k);
          const double v = 2.0 * load(i, j) * load(i, k);
          a += u;
          b += v;
          c += u * u - v * v;
          d += u * v;
        }
        const double num = 2.0 * (fp * d - a * b);
        const double den = fp * c - (a * a - b * b);
        if (std::abs(num) < 1e-14 * std::max(1.0, std::abs(den))) continue;
        const double angle = 0.25 * std::atan2(num, den);
        const double cs = std::cos(angle), sn = std::sin(angle);
        for (std::size_t i = 0; i < p; ++i) {
          const double lj = load(i, j), lk = load(i, k);
          load(i, j) = cs * lj + sn * lk;
          load(i, k) = -sn * lj + cs * lk;
        }
        for (std::size_t i = 0; i < p; ++i) {
          const double oj = out.columns(i, j), ok = out.columns(i, k);
          out.columns(i, j) = cs * oj + sn * ok;
          out.columns(i, k) = -sn * oj + cs * ok;
        }
      }
    }
    const double next = varimax_criterion(load);
    if (next - crit < tol) break;
    crit = next;
  }
  return out;
}

// Multiply part a by e^s and part b by e^{-s}, then re-close. s = 0 returns
// the input bit-for-bit.
inline std::vector<Composition> tradeoff_trajectory(const Composition& z, std::size_t a,
                                                    std::size_t b,
                                                    const std::vector<double>& s_values) {
  if (a == b || a >= z.size() || b >= z.size())
    raise(ErrorCode::BadIndices, "trajectory needs two distinct valid component indices");
  std::vector<Composition> path;
  path.reserve(s_values.size());
  for (double s : s_values) {
    if (s == 0.0) {
      path.push_back(z);
      continue;
    }
    std::vector<double> raw = z.values;
    raw[a] *= std::exp(s);
    raw[b] *= std::exp(-s);
    path.push_back(closure(raw));
  }
  return path;
}

// Test oracle helper: centered log-ratio, log z minus its mean.
inline std::vector<double> clr(const Composition& z) {
  std::vector<double> out(z.size());
  double mean = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    out[k] = std::log(z.values[k]);
    mean += out[k];
  }
  mean /= static_cast<double>(z.size());
  for (double& v : out) v -= mean;
  return out;
}

}  // namespace aicog

#endif  // AICOG_COMPGEO_HPP
