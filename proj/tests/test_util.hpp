#ifndef AICOG_TEST_UTIL_HPP
#define AICOG_TEST_UTIL_HPP

#include <random>
#include <vector>

#include "aicog/compgeo.hpp"
#include "aicog/linalg.hpp"

namespace testutil {

inline aicog::Composition random_composition(std::size_t num_parts, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.5);
  std::vector<double> logits(num_parts);
  for (double& v : logits) v = gauss(rng);
  return aicog::softmax(logits);
}

inline aicog::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  aicog::Matrix m(rows, cols);
  for (double& v : m.data) v = gauss(rng);
  return m;
}

inline aicog::IlrBasis random_learned_basis(std::size_t num_parts, std::mt19937_64& rng) {
  return aicog::learned_basis_from_params(random_matrix(num_parts, num_parts - 1, rng));
}

inline std::vector<std::size_t> random_subset(std::size_t num_parts, std::size_t keep,
                                              std::mt19937_64& rng) {
  std::vector<std::size_t> idx(num_parts);
  for (std::size_t i = 0; i < num_parts; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(keep);
  return idx;
}

}  // namespace testutil

#endif
