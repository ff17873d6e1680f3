#ifndef QMARKOV_RANDOM_HPP
#define QMARKOV_RANDOM_HPP

#include <cstdint>
#include <random>

#include "qmarkov/operators.hpp"

namespace qmarkov {

using Rng = std::mt19937_64;

inline Complex complex_gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline Matrix gaussian_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = complex_gaussian(rng);
  return m;
}

// Haar-distributed unitary via QR of a complex Ginibre matrix with the
// phases of the R diagonal fixed.
Matrix random_unitary(int dim, Rng& rng);

}  // namespace qmarkov

#endif
