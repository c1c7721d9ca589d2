#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "aicog/compgeo.hpp"
#include "test_util.hpp"

using namespace aicog;
using Catch::Approx;

namespace {

double basis_orthonormality_error(const IlrBasis& basis) {
  const Matrix gram = matmul_tn(basis.columns, basis.columns);
  double err = 0.0;
  for (std::size_t i = 0; i < gram.rows; ++i)
    for (std::size_t j = 0; j < gram.cols; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      err += (gram(i, j) - target) * (gram(i, j) - target);
    }
  return std::sqrt(err);
}

double basis_sum_zero_error(const IlrBasis& basis) {
  double worst = 0.0;
  for (std::size_t d = 0; d < basis.dim(); ++d) {
    double colsum = 0.0;
    for (std::size_t k = 0; k < basis.num_parts(); ++k) colsum += basis.columns(k, d);
    worst = std::max(worst, std::abs(colsum));
  }
  return worst;
}

double ilr_distance(const Composition& a, const Composition& b, const IlrBasis& basis) {
  return aitchison_distance(a, b, basis);
}

}  // namespace

TEST_CASE("closure normalizes positive vectors") {
  const Composition z = closure({2.0, 3.0, 5.0});
  CHECK(z[0] == Approx(0.2).margin(1e-15));
  CHECK(z[1] == Approx(0.3).margin(1e-15));
  CHECK(z[2] == Approx(0.5).margin(1e-15));

  const Composition u = closure({1.0, 1.0, 1.0, 1.0});
  for (std::size_t k = 0; k < 4; ++k) CHECK(u[k] == Approx(0.25).margin(1e-15));

  double total = 0.0;
  for (double v : z.values) total += v;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("closure rejects non-positive entries and short vectors") {
  CHECK_THROWS_MATCHES(closure({0.38, 0.0, 0.62}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NonPositiveEntry;
                       }));
  CHECK_THROWS_MATCHES(closure({-1.0, 2.0}), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::NonPositiveEntry;
                       }));
  CHECK_THROWS_MATCHES(closure({1.0}), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                         return e.code() == ErrorCode::TooShort;
                       }));
}

TEST_CASE("helmert basis matches the normalized sequential contrasts") {
  const IlrBasis b2 = helmert_basis(2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(b2.columns(0, 0) == Approx(inv_sqrt2).margin(1e-12));
  CHECK(b2.columns(1, 0) == Approx(-inv_sqrt2).margin(1e-12));

  const IlrBasis b3 = helmert_basis(3);
  const double inv_sqrt6 = 1.0 / std::sqrt(6.0);
  CHECK(b3.columns(0, 0) == Approx(inv_sqrt2).margin(1e-12));
  CHECK(b3.columns(1, 0) == Approx(-inv_sqrt2).margin(1e-12));
  CHECK(b3.columns(2, 0) == Approx(0.0).margin(1e-12));
  CHECK(b3.columns(0, 1) == Approx(inv_sqrt6).margin(1e-12));
  CHECK(b3.columns(1, 1) == Approx(inv_sqrt6).margin(1e-12));
  CHECK(b3.columns(2, 1) == Approx(-2.0 * inv_sqrt6).margin(1e-12));

  for (std::size_t k = 2; k <= 10; ++k) {
    const IlrBasis b = helmert_basis(k);
    CHECK(basis_orthonormality_error(b) < 1e-10);
    CHECK(basis_sum_zero_error(b) < 1e-10);
  }

  CHECK_THROWS_MATCHES(helmert_basis(1), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::KTooSmall; }));
}

TEST_CASE("learned basis from params satisfies the basis invariants") {
  std::mt19937_64 rng(0);
  const IlrBasis basis = testutil::random_learned_basis(5, rng);
  CHECK(basis_orthonormality_error(basis) < 1e-10);
  CHECK(basis_sum_zero_error(basis) < 1e-10);

  const Matrix zeros(5, 4, 0.0);
  CHECK_THROWS_MATCHES(learned_basis_from_params(zeros), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::RankDeficient; }));
}

TEST_CASE("basis from Helmert params spans the same contrast space") {
  const IlrBasis helmert = helmert_basis(6);
  const IlrBasis relearned = learned_basis_from_params(helmert.columns);
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Composition a = testutil::random_composition(6, rng);
    const Composition b = testutil::random_composition(6, rng);
    CHECK(std::abs(ilr_distance(a, b, helmert) - ilr_distance(a, b, relearned)) < 1e-10);
  }
}

TEST_CASE("ilr evaluates the log-ratio contrast formula") {
  const IlrBasis b3 = helmert_basis(3);
  const IlrPoint zero = ilr(closure({1.0, 1.0, 1.0}), b3);
  CHECK(zero[0] == Approx(0.0).margin(1e-14));
  CHECK(zero[1] == Approx(0.0).margin(1e-14));

  const IlrBasis b2 = helmert_basis(2);
  const IlrPoint x = ilr(closure({0.8, 0.2}), b2);
  CHECK(x[0] == Approx(std::log(4.0) / std::sqrt(2.0)).margin(1e-12));
  CHECK(x[0] == Approx(0.98026).margin(1e-5));

  const IlrPoint y = ilr(closure({0.5, 0.25, 0.25}), b3);
  CHECK(y[0] == Approx(std::log(2.0) / std::sqrt(2.0)).margin(1e-12));
  CHECK(y[1] == Approx(std::log(2.0) / std::sqrt(6.0)).margin(1e-12));
  CHECK(y[0] == Approx(0.49012).margin(1e-5));
  CHECK(y[1] == Approx(0.28297).margin(1e-5));

  CHECK_THROWS_MATCHES(ilr(closure({0.5, 0.5}), b3), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::DimMismatch; }));
}

TEST_CASE("ilr_inverse inverts ilr") {
  const IlrBasis b3 = helmert_basis(3);
  const Composition uniform = ilr_inverse(IlrPoint{{0.0, 0.0}}, b3);
  for (double v : uniform.values) CHECK(v == Approx(1.0 / 3.0).margin(1e-14));

  const IlrBasis b2 = helmert_basis(2);
  const Composition back = ilr_inverse(IlrPoint{{0.9802581434685472}}, b2);
  CHECK(back[0] == Approx(0.8).margin(1e-6));
  CHECK(back[1] == Approx(0.2).margin(1e-6));

  std::mt19937_64 rng(123);
  std::normal_distribution<double> gauss(0.0, 2.0);
  const IlrBasis b6 = helmert_basis(6);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    IlrPoint p;
    p.coords.resize(5);
    for (double& v : p.coords) v = gauss(rng);
    const IlrPoint round = ilr(ilr_inverse(p, b6), b6);
    for (std::size_t d = 0; d < 5; ++d)
      worst = std::max(worst, std::abs(round[d] - p[d]));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("aitchison distance matches the ILR norm and is basis invariant") {
  const IlrBasis b2 = helmert_basis(2);
  const Composition a = closure({0.8, 0.2});
  const Composition b = closure({0.2, 0.8});
  CHECK(aitchison_distance(a, a, b2) == Approx(0.0).margin(1e-12));
  CHECK(aitchison_distance(a, b, b2) == Approx(std::sqrt(2.0) * std::log(4.0)).margin(1e-12));
  CHECK(aitchison_distance(a, b, b2) == Approx(1.96052).margin(1e-5));

  std::mt19937_64 rng(5);
  const IlrBasis h4 = helmert_basis(4);
  const IlrBasis l4 = testutil::random_learned_basis(4, rng);
  for (int rep = 0; rep < 25; ++rep) {
    const Composition p = testutil::random_composition(4, rng);
    const Composition q = testutil::random_composition(4, rng);
    CHECK(std::abs(aitchison_distance(p, q, h4) - aitchison_distance(p, q, l4)) < 1e-10);
  }
}

TEST_CASE("ilr distance equals the clr difference norm") {
  std::mt19937_64 rng(11);
  for (std::size_t k = 2; k <= 10; ++k) {
    const IlrBasis basis = helmert_basis(k);
    for (int rep = 0; rep < 50; ++rep) {
      const Composition a = testutil::random_composition(k, rng);
      const Composition b = testutil::random_composition(k, rng);
      const auto ca = clr(a);
      const auto cb = clr(b);
      double clr_norm = 0.0;
      for (std::size_t i = 0; i < k; ++i) clr_norm += (ca[i] - cb[i]) * (ca[i] - cb[i]);
      clr_norm = std::sqrt(clr_norm);
      CHECK(std::abs(aitchison_distance(a, b, basis) - clr_norm) < 1e-10);
    }
  }
}

TEST_CASE("subcompose selects and re-closes") {
  const Composition z = closure({0.2, 0.3, 0.5});
  const Composition s01 = subcompose(z, {0, 1});
  CHECK(s01[0] == Approx(0.4).margin(1e-12));
  CHECK(s01[1] == Approx(0.6).margin(1e-12));

  const Composition w = closure({0.5, 0.25, 0.25});
  const Composition w01 = subcompose(w, {0, 1});
  CHECK(w01[0] == Approx(2.0 / 3.0).margin(1e-12));
  CHECK(w01[1] == Approx(1.0 / 3.0).margin(1e-12));

  const Composition full = subcompose(z, {0, 1, 2});
  for (std::size_t k = 0; k < 3; ++k) CHECK(full[k] == Approx(z[k]).margin(1e-14));

  CHECK_THROWS_MATCHES(subcompose(z, {0}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::BadSubset; }));
}

TEST_CASE("subcomposition projection realizes the re-closed geometry") {
  const IlrBasis b3 = helmert_basis(3);
  const IlrBasis b2 = helmert_basis(2);
  const Composition zi = closure({0.5, 0.25, 0.25});
  const Composition zj = closure({0.2, 0.3, 0.5});
  const std::vector<std::size_t> keep = {0, 1};

  const double direct =
      aitchison_distance(subcompose(zi, keep), subcompose(zj, keep), b2);
  CHECK(direct == Approx(0.77683).margin(1e-5));
  CHECK(direct == Approx(std::log(3.0) / std::sqrt(2.0)).margin(1e-12));

  const SubcompProjection proj = subcomp_projection(b3, keep, b2);
  const IlrPoint xi = ilr(zi, b3);
  const IlrPoint xj = ilr(zj, b3);
  double projected = 0.0;
  for (std::size_t r = 0; r < proj.matrix.rows; ++r) {
    double s = 0.0;
    for (std::size_t d = 0; d < proj.matrix.cols; ++d)
      s += proj.matrix(r, d) * (xi[d] - xj[d]);
    projected += s * s;
  }
  projected = std::sqrt(projected);
  CHECK(std::abs(projected - direct) < 1e-10);

  // Rows orthonormal.
  const Matrix ppt = matmul_nt(proj.matrix, proj.matrix);
  for (std::size_t i = 0; i < ppt.rows; ++i)
    for (std::size_t j = 0; j < ppt.cols; ++j)
      CHECK(ppt(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-10));

  CHECK_THROWS_MATCHES(subcomp_projection(b3, {0}, b2), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::BadSubset; }));
}

TEST_CASE("full-set projection preserves all pairwise distances") {
  std::mt19937_64 rng(21);
  const IlrBasis b4 = helmert_basis(4);
  const SubcompProjection proj = subcomp_projection(b4, {0, 1, 2, 3}, b4);
  for (int rep = 0; rep < 10; ++rep) {
    const Composition a = testutil::random_composition(4, rng);
    const Composition b = testutil::random_composition(4, rng);
    const IlrPoint xa = ilr(a, b4);
    const IlrPoint xb = ilr(b, b4);
    double projected = 0.0;
    for (std::size_t r = 0; r < proj.matrix.rows; ++r) {
      double s = 0.0;
      for (std::size_t d = 0; d < proj.matrix.cols; ++d)
        s += proj.matrix(r, d) * (xa[d] - xb[d]);
      projected += s * s;
    }
    CHECK(std::abs(std::sqrt(projected) - aitchison_distance(a, b, b4)) < 1e-10);
  }
}

TEST_CASE("lemma-style identity holds for random subsets up to K = 10") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::size_t> ksize(3, 10);
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t k = ksize(rng);
    std::uniform_int_distribution<std::size_t> ssize(2, k);
    const std::size_t keep_count = ssize(rng);
    const auto keep = testutil::random_subset(k, keep_count, rng);
    const IlrBasis basis = helmert_basis(k);
    const IlrBasis sub_basis = helmert_basis(keep_count);
    const Composition zi = testutil::random_composition(k, rng);
    const Composition zj = testutil::random_composition(k, rng);

    const double lhs =
        aitchison_distance(subcompose(zi, keep), subcompose(zj, keep), sub_basis);
    const SubcompProjection proj = subcomp_projection(basis, keep, sub_basis);
    const IlrPoint xi = ilr(zi, basis);
    const IlrPoint xj = ilr(zj, basis);
    double rhs = 0.0;
    for (std::size_t r = 0; r < proj.matrix.rows; ++r) {
      double s = 0.0;
      for (std::size_t d = 0; d < proj.matrix.cols; ++d)
        s += proj.matrix(r, d) * (xi[d] - xj[d]);
      rhs += s * s;
    }
    REQUIRE(std::abs(lhs - std::sqrt(rhs)) < 1e-9);
  }
}

TEST_CASE("softmax-ilr identity: ilr(softmax(v)) = V^T v") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (std::size_t k = 2; k <= 8; ++k) {
    const IlrBasis basis = helmert_basis(k);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> logits(k);
      for (double& v : logits) v = gauss(rng);
      const IlrPoint via_softmax = ilr(softmax(logits), basis);
      for (std::size_t d = 0; d < k - 1; ++d) {
        double direct = 0.0;
        for (std::size_t i = 0; i < k; ++i) direct += basis.columns(i, d) * logits[i];
        REQUIRE(std::abs(via_softmax[d] - direct) < 1e-12);
      }
    }
  }
}

TEST_CASE("varimax keeps the basis valid and preserves distances") {
  std::mt19937_64 rng(51);
  const IlrBasis basis = testutil::random_learned_basis(8, rng);
  const IlrBasis rotated = varimax_rotate(basis);
  CHECK(rotated.kind == BasisKind::VarimaxRotated);
  CHECK(basis_orthonormality_error(rotated) < 1e-10);
  CHECK(basis_sum_zero_error(rotated) < 1e-10);

  std::vector<Composition> points;
  for (int i = 0; i < 50; ++i) points.push_back(testutil::random_composition(8, rng));
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      worst = std::max(worst, std::abs(aitchison_distance(points[i], points[j], basis) -
                                       aitchison_distance(points[i], points[j], rotated)));
  CHECK(worst < 1e-9);
}

TEST_CASE("varimax is stationary at an already-optimal basis") {
  // A single-column basis admits no pairwise rotation at all.
  const IlrBasis b2 = helmert_basis(2);
  const IlrBasis r2 = varimax_rotate(b2);
  CHECK(r2.columns(0, 0) == Approx(b2.columns(0, 0)).margin(1e-15));
  CHECK(varimax_criterion(r2.columns) == Approx(varimax_criterion(b2.columns)).margin(1e-15));

  // Rotating twice changes nothing measurable: the criterion is already
  // stationary after the first call.
  std::mt19937_64 rng(61);
  const IlrBasis basis = testutil::random_learned_basis(5, rng);
  const IlrBasis once = varimax_rotate(basis);
  const IlrBasis twice = varimax_rotate(once);
  CHECK(varimax_criterion(twice.columns) ==
        Approx(varimax_criterion(once.columns)).margin(1e-7));
}

TEST_CASE("tradeoff trajectory applies the paired intervention") {
  const Composition z = closure({0.2, 0.3, 0.5});

  const auto at_zero = tradeoff_trajectory(z, 0, 1, {0.0});
  REQUIRE(at_zero.size() == 1);
  for (std::size_t k = 0; k < 3; ++k) CHECK(at_zero[0][k] == z[k]);

  const auto moved = tradeoff_trajectory(z, 0, 1, {std::log(2.0)});
  CHECK(moved[0][0] == Approx(0.38095).margin(1e-5));
  CHECK(moved[0][1] == Approx(0.14286).margin(1e-5));
  CHECK(moved[0][2] == Approx(0.47619).margin(1e-5));

  CHECK_THROWS_MATCHES(tradeoff_trajectory(z, 1, 1, {0.5}), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == ErrorCode::BadIndices; }));
}

TEST_CASE("trajectory geometry is basis invariant") {
  std::mt19937_64 rng(71);
  const Composition z = testutil::random_composition(5, rng);
  const std::vector<double> grid = {-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto path = tradeoff_trajectory(z, 1, 3, grid);
  const IlrBasis helmert = helmert_basis(5);
  const IlrBasis learned = testutil::random_learned_basis(5, rng);
  for (std::size_t i = 0; i < path.size(); ++i)
    for (std::size_t j = i + 1; j < path.size(); ++j)
      CHECK(std::abs(aitchison_distance(path[i], path[j], helmert) -
                     aitchison_distance(path[i], path[j], learned)) < 1e-10);
}
