#include "dfo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dfo::linalg {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& v) {
  if (v.size() != m.cols) throw std::invalid_argument("matvec: size mismatch");
  std::vector<double> out(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

void symmetrize(Matrix& a) {
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = i + 1; j < a.cols; ++j) {
      const double mean = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = mean;
      a(j, i) = mean;
    }
  }
}

double max_abs_asymmetry(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = i + 1; j < a.cols; ++j)
      worst = std::max(worst, std::abs(a(i, j) - a(j, i)));
  return worst;
}

EigenDecomposition eigen_symmetric(const Matrix& a) {
  if (a.rows != a.cols || a.rows == 0)
    throw std::invalid_argument("eigen_symmetric: square matrix required");
  for (double x : a.data) {
    if (!std::isfinite(x))
      throw std::invalid_argument("eigen_symmetric: non-finite entry");
  }
  const std::size_t n = a.rows;
  Matrix d = a;  // working copy, driven to diagonal form
  Matrix v = Matrix::identity(n);

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += d(p, q) * d(p, q);
    if (off == 0.0) break;
    // Converged when the off-diagonal mass is negligible next to the diagonal.
    double diag = 0.0;
    for (std::size_t p = 0; p < n; ++p) diag += d(p, p) * d(p, p);
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (apq == 0.0) continue;
        const double app = d(p, p);
        const double aqq = d(q, q);
        // Classic stable rotation: tan via the smaller root.
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double dkp = d(k, p);
          const double dkq = d(k, q);
          d(k, p) = c * dkp - s * dkq;
          d(k, q) = s * dkp + c * dkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double dpk = d(p, k);
          const double dqk = d(q, k);
          d(p, k) = c * dpk - s * dqk;
          d(q, k) = s * dpk + c * dqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Canonical order and sign: eigenvalues ascending, each eigenvector's
  // largest-magnitude component positive.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&d](std::size_t i, std::size_t j) {
    return d(i, i) < d(j, j);
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.values[col] = d(src, src);
    std::size_t arg = 0;
    double mag = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(v(k, src)) > mag) {
        mag = std::abs(v(k, src));
        arg = k;
      }
    }
    const double sign = v(arg, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, col) = sign * v(k, src);
  }
  return out;
}

}  // namespace dfo::linalg
