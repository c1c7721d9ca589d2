#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "aicog/interpret.hpp"
#include "test_util.hpp"

using namespace aicog;
using Catch::Approx;

TEST_CASE("loadings export carries valid contrast columns") {
  std::mt19937_64 rng(1);
  ModelState state = init_model_state(5, 2, BasisMode::FixedHelmert, rng);
  const BalanceLoadings loadings = export_loadings(state, false);
  CHECK(loadings.loadings.rows == 2);
  CHECK(loadings.loadings.cols == 1);
  CHECK(loadings.loadings(0, 0) == Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  CHECK(loadings.loadings(1, 0) == Approx(-1.0 / std::sqrt(2.0)).margin(1e-12));

  ModelState learned = init_model_state(5, 6, BasisMode::LearnedQR, rng);
  for (bool rotate : {false, true}) {
    const BalanceLoadings l = export_loadings(learned, rotate);
    for (std::size_t b = 0; b < l.loadings.cols; ++b) {
      double colsum = 0.0, norm = 0.0;
      for (std::size_t k = 0; k < l.loadings.rows; ++k) {
        colsum += l.loadings(k, b);
        norm += l.loadings(k, b) * l.loadings(k, b);
      }
      CHECK(std::abs(colsum) < 1e-10);
      CHECK(std::sqrt(norm) == Approx(1.0).margin(1e-10));
    }
  }
}

TEST_CASE("varimax-rotated loadings preserve distances on random compositions") {
  std::mt19937_64 rng(2);
  ModelState state = init_model_state(10, 6, BasisMode::LearnedQR, rng);
  const BalanceLoadings plain = export_loadings(state, false);
  const BalanceLoadings rotated = export_loadings(state, true);
  IlrBasis basis_plain{plain.loadings, BasisKind::Learned};
  IlrBasis basis_rot{rotated.loadings, BasisKind::VarimaxRotated};
  for (int rep = 0; rep < 20; ++rep) {
    const Composition a = testutil::random_composition(6, rng);
    const Composition b = testutil::random_composition(6, rng);
    CHECK(std::abs(aitchison_distance(a, b, basis_plain) -
                   aitchison_distance(a, b, basis_rot)) < 1e-9);
  }
}

TEST_CASE("pca recovers axis-aligned 2d structure") {
  // Exactly uncorrelated sample: all sign combinations of (+-2, +-1), twice,
  // shifted off the origin. var(x) = 4 > var(y) = 1, cov(x,y) = 0.
  Matrix points(8, 2);
  int row = 0;
  for (int rep = 0; rep < 2; ++rep)
    for (double x : {-2.0, 2.0})
      for (double y : {-1.0, 1.0}) {
        points(row, 0) = x + 5.0;
        points(row, 1) = y - 2.0;
        ++row;
      }
  const Pca2d pca = pca_2d(points);
  CHECK_FALSE(pca.degenerate);
  // Projection equals the centered input up to per-axis sign.
  const double s0 = pca.axes(0, 0) >= 0.0 ? 1.0 : -1.0;
  const double s1 = pca.axes(1, 1) >= 0.0 ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    worst = std::max(worst, std::abs(pca.projection(i, 0) - s0 * (points(i, 0) - 5.0)));
    worst = std::max(worst, std::abs(pca.projection(i, 1) - s1 * (points(i, 1) + 2.0)));
  }
  CHECK(worst < 1e-9);
  CHECK(pca.explained[0] > pca.explained[1]);
  CHECK(pca.explained[0] == Approx(4.0 / 5.0).margin(1e-12));
}

TEST_CASE("planar 3d data explains all variance in two components") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix points(60, 3);
  for (std::size_t i = 0; i < 60; ++i) {
    const double u = gauss(rng), v = 2.0 * gauss(rng);
    // Plane spanned by (1,1,0)/sqrt(2) and (0,0,1).
    points(i, 0) = u;
    points(i, 1) = u;
    points(i, 2) = v;
  }
  const Pca2d pca = pca_2d(points);
  CHECK(pca.explained[0] + pca.explained[1] == Approx(1.0).margin(1e-10));
}

TEST_CASE("identical points fall back to a degenerate projection") {
  Matrix points(5, 3, 1.5);
  const Pca2d pca = pca_2d(points);
  CHECK(pca.degenerate);
  for (std::size_t i = 0; i < 5; ++i) CHECK(pca.projection(i, 1) == 0.0);
}

TEST_CASE("pca pairwise distances survive orthogonal re-parameterization") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::size_t n = 40, d = 5;
  Matrix points(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      points(i, j) = gauss(rng) * static_cast<double>(j + 1);  // distinct spectrum

  const Matrix q = householder_qr(testutil::random_matrix(d, d, rng)).q;
  Matrix rotated = matmul(points, q);

  const Pca2d base = pca_2d(points);
  const Pca2d rot = pca_2d(rotated);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double da = std::hypot(base.projection(i, 0) - base.projection(j, 0),
                                   base.projection(i, 1) - base.projection(j, 1));
      const double db = std::hypot(rot.projection(i, 0) - rot.projection(j, 0),
                                   rot.projection(i, 1) - rot.projection(j, 1));
      worst = std::max(worst, std::abs(da - db));
    }
  CHECK(worst < 1e-9);
}

TEST_CASE("trajectory of length one is the node's own embedding") {
  std::mt19937_64 rng(11);
  ModelState state = init_model_state(12, 4, BasisMode::FixedHelmert, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : state.logits.data) v = gauss(rng);

  const TrajectoryPath path = export_trajectory(state, 3, 0, 2, {0.0});
  REQUIRE(path.compositions.size() == 1);
  const Composition own = node_composition(state, 3);
  for (std::size_t k = 0; k < 4; ++k) CHECK(path.compositions[0][k] == own[k]);
  const Matrix embedding = embed_all(state);
  for (std::size_t dcoord = 0; dcoord < 3; ++dcoord)
    CHECK(path.ilr_points[0][dcoord] == Approx(embedding(3, dcoord)).margin(1e-12));
}

TEST_CASE("symmetric grids around equal components give symmetric paths") {
  ModelState state;
  state.basis_mode = BasisMode::FixedHelmert;
  state.logits = Matrix(10, 4, 0.0);
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : state.logits.data) v = gauss(rng);
  // Node 0 gets exactly equal components a=1, b=2.
  state.logits(0, 1) = 0.4;
  state.logits(0, 2) = 0.4;
  state.biases.assign(10, 0.0);

  const double s = 0.8;
  const TrajectoryPath path = export_trajectory(state, 0, 1, 2, {-s, 0.0, s});
  double d_minus = 0.0, d_plus = 0.0;
  for (std::size_t d = 0; d < 3; ++d) {
    d_minus += std::pow(path.ilr_points[0][d] - path.ilr_points[1][d], 2);
    d_plus += std::pow(path.ilr_points[2][d] - path.ilr_points[1][d], 2);
  }
  CHECK(std::abs(std::sqrt(d_minus) - std::sqrt(d_plus)) < 1e-10);
}

TEST_CASE("trajectory path distances are basis invariant") {
  std::mt19937_64 rng(17);
  ModelState helmert_state = init_model_state(15, 5, BasisMode::FixedHelmert, rng);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : helmert_state.logits.data) v = gauss(rng);

  ModelState learned_state = helmert_state;
  learned_state.basis_mode = BasisMode::LearnedQR;
  learned_state.basis_params = testutil::random_matrix(5, 4, rng);

  const std::vector<double> grid = {-1.0, 0.0, 1.0, 2.0};
  const TrajectoryPath ph = export_trajectory(helmert_state, 2, 0, 3, grid);
  const TrajectoryPath pl = export_trajectory(learned_state, 2, 0, 3, grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j) {
      double dh = 0.0, dl = 0.0;
      for (std::size_t d = 0; d < 4; ++d) {
        dh += std::pow(ph.ilr_points[i][d] - ph.ilr_points[j][d], 2);
        dl += std::pow(pl.ilr_points[i][d] - pl.ilr_points[j][d], 2);
      }
      CHECK(std::abs(std::sqrt(dh) - std::sqrt(dl)) < 1e-10);
    }
}

TEST_CASE("trajectory compositions stay strictly inside the simplex") {
  std::mt19937_64 rng(19);
  ModelState state = init_model_state(6, 5, BasisMode::FixedHelmert, rng);
  const TrajectoryPath path =
      export_trajectory(state, 1, 0, 4, {-30.0, -5.0, 0.0, 5.0, 30.0});
  for (const Composition& z : path.compositions) {
    double total = 0.0;
    for (double v : z.values) {
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(total == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("csv exports write header plus one row per record") {
  std::mt19937_64 rng(23);
  ModelState state = init_model_state(8, 3, BasisMode::FixedHelmert, rng);
  const TrajectoryPath path = export_trajectory(state, 0, 0, 1, {-1.0, 0.0, 1.0});
  const std::string traj_path = "aicog_test_traj.csv";
  write_trajectory_csv(path, traj_path);
  std::ifstream in(traj_path);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "s,comp_0,comp_1,comp_2,ilr_0,ilr_1,pc1,pc2");
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  std::remove(traj_path.c_str());

  const BalanceLoadings loadings = export_loadings(state, false);
  const std::string load_path = "aicog_test_loadings.csv";
  write_loadings_csv(loadings, load_path);
  std::ifstream lin(load_path);
  std::getline(lin, line);
  CHECK(line == "component,balance_0,balance_1");
  std::remove(load_path.c_str());
}
