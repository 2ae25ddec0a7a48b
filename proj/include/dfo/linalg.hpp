#pragma once

#include <cstddef>
#include <vector>

namespace dfo::linalg {

/// Dense row-major matrix. Sized for optimizer state (d x d with d in the
/// tens), not for large-scale work.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  static Matrix identity(std::size_t n);
};

std::vector<double> matvec(const Matrix& m, const std::vector<double>& v);

/// Symmetrizes in place: a <- (a + a^T) / 2.
void symmetrize(Matrix& a);

double max_abs_asymmetry(const Matrix& a);

/// Eigendecomposition of a symmetric matrix: a = vectors * diag(values) *
/// vectors^T with eigenvalues ascending and a deterministic sign convention
/// per column.
struct EigenDecomposition {
  Matrix vectors;             // columns are eigenvectors
  std::vector<double> values; // ascending
};

/// Cyclic Jacobi rotations. Deterministic sweep order; uses only +,*,/ and
/// sqrt so results are reproducible bit-for-bit. Throws std::invalid_argument
/// if the input is not square or not finite.
EigenDecomposition eigen_symmetric(const Matrix& a);

}  // namespace dfo::linalg
