#ifndef AICOG_LINALG_HPP
#define AICOG_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "aicog/errors.hpp"

namespace aicog {

// Dense row-major matrix of doubles. Everything in this project is small
// (K <= ~65, N a few thousand), so plain loops are fast enough.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  const double* row(std::size_t r) const { return data.data() + r * cols; }
  double* row(std::size_t r) { return data.data() + r * cols; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
};

inline Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

// C = A * B
inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) raise(ErrorCode::ShapeMismatch, "matmul inner dims");
  Matrix c(a.rows, b.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      const double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

// C = A^T * B
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) raise(ErrorCode::ShapeMismatch, "matmul_tn inner dims");
  Matrix c(a.cols, b.cols, 0.0);
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* ak = a.row(k);
    const double* bk = b.row(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      const double aki = ak[i];
      if (aki == 0.0) continue;
      double* ci = c.row(i);
      for (std::size_t j = 0; j < b.cols; ++j) ci[j] += aki * bk[j];
    }
  }
  return c;
}

// C = A * B^T
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) raise(ErrorCode::ShapeMismatch, "matmul_nt inner dims");
  Matrix c(a.rows, b.rows, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    for (std::size_t j = 0; j < b.rows; ++j) {
      const double* bj = b.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += ai[k] * bj[k];
      c(i, j) = s;
    }
  }
  return c;
}

inline double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

// Thin QR via Householder reflections, m x n with m >= n.
// Returns Q (m x n, orthonormal columns) and R (n x n, upper triangular)
// with the sign convention diag(R) >= 0 so the factorization is unique.
struct QrResult {
  Matrix q;  // m x n
  Matrix r;  // n x n
};

inline QrResult householder_qr(const Matrix& a) {
  const std::size_t m = a.rows, n = a.cols;
  if (m < n) raise(ErrorCode::ShapeMismatch, "householder_qr needs rows >= cols");
  Matrix work = a;                       // becomes R in its upper triangle
  std::vector<std::vector<double>> vs;   // Householder vectors
  vs.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < m; ++i) norm += work(i, k) * work(i, k);
    norm = std::sqrt(norm);
    std::vector<double> v(m - k, 0.0);
    if (norm > 0.0) {
      const double alpha = work(k, k) >= 0.0 ? -norm : norm;
      for (std::size_t i = k; i < m; ++i) v[i - k] = work(i, k);
      v[0] -= alpha;
      double vnorm = 0.0;
      for (double x : v) vnorm += x * x;
      vnorm = std::sqrt(vnorm);
      if (vnorm > 0.0) {
        for (double& x : v) x /= vnorm;
        // apply H = I - 2 v v^T to trailing columns
        for (std::size_t j = k; j < n; ++j) {
          double dot = 0.0;
          for (std::size_t i = k; i < m; ++i) dot += v[i - k] * work(i, j);
          for (std::size_t i = k; i < m; ++i) work(i, j) -= 2.0 * dot * v[i - k];
        }
      }
    }
    vs.push_back(std::move(v));
  }

  QrResult out;
  out.r = Matrix(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.r(i, j) = work(i, j);

  // Accumulate thin Q by applying the reflectors to the first n columns of I.
  out.q = Matrix(m, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) out.q(j, j) = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const std::vector<double>& v = vs[k];
    if (v.empty()) continue;
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t i = k; i < m; ++i) dot += v[i - k] * out.q(i, j);
      if (dot == 0.0) continue;
      for (std::size_t i = k; i < m; ++i) out.q(i, j) -= 2.0 * dot * v[i - k];
    }
  }

  // Fix signs: make diag(R) nonnegative.
  for (std::size_t k = 0; k < n; ++k) {
    if (out.r(k, k) < 0.0) {
      for (std::size_t j = k; j < n; ++j) out.r(k, j) = -out.r(k, j);
      for (std::size_t i = 0; i < m; ++i) out.q(i, k) = -out.q(i, k);
    }
  }
  return out;
}

// Solves X * R^T = B for X given upper-triangular R (i.e. X = B * R^{-T}).
inline Matrix solve_rt_right(const Matrix& b, const Matrix& r) {
  const std::size_t n = r.rows;
  if (r.cols != n || b.cols != n) raise(ErrorCode::ShapeMismatch, "solve_rt_right dims");
  Matrix x(b.rows, n, 0.0);
  for (std::size_t i = 0; i < b.rows; ++i) {
    // Row-wise forward substitution: R^T is lower triangular.
    for (std::size_t j = 0; j < n; ++j) {
      double s = b(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= x(i, k) * r(k, j);
      x(i, j) = s / r(j, j);
    }
  }
  return x;
}

// Symmetric eigendecomposition by cyclic Jacobi rotations.
// Returns eigenvalues in descending order with matching eigenvector columns.
struct EigenResult {
  std::vector<double> values;
  Matrix vectors;  // column i is the eigenvector for values[i]
};

inline EigenResult jacobi_eigen(const Matrix& a, int max_sweeps = 100) {
  const std::size_t n = a.rows;
  if (a.cols != n) raise(ErrorCode::ShapeMismatch, "jacobi_eigen needs square input");
  Matrix m = a;
  Matrix v(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m(p, q) * m(p, q);
    if (off < 1e-30) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double mip = m(i, p), miq = m(i, q);
          m(i, p) = c * mip - s * miq;
          m(i, q) = s * mip + c * miq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          const double mpj = m(p, j), mqj = m(q, j);
          m(p, j) = c * mpj - s * mqj;
          m(q, j) = s * mpj + c * mqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return m(x, x) > m(y, y); });

  EigenResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = m(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

// Hungarian algorithm (potentials form), minimizing total cost of a square
// assignment. Returns row -> column mapping.
inline std::vector<std::size_t> hungarian_assignment(const Matrix& cost) {
  const std::size_t n = cost.rows;
  if (cost.cols != n) raise(ErrorCode::ShapeMismatch, "hungarian needs square cost");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace aicog

#endif  // AICOG_LINALG_HPP
