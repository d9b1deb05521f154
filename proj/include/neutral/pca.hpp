#ifndef NEUTRAL_PCA_HPP
#define NEUTRAL_PCA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "neutral/errors.hpp"

namespace neutral {

namespace detail {

// Cyclic Jacobi rotations on a symmetric matrix (row-major, size d).
// Iterates sweeps until the off-diagonal Frobenius norm drops below
// tol * scale. Eigenvectors accumulate in v (columns).
inline void jacobi_eigen(std::vector<double>& m, std::size_t d,
                         std::vector<double>& eigenvalues,
                         std::vector<double>& v) {
  v.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < d; ++i) scale += std::fabs(m[i * d + i]);
  if (scale == 0.0) scale = 1.0;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        off += m[p * d + q] * m[p * d + q];
      }
    }
    if (std::sqrt(2.0 * off) < 1e-12 * scale) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = m[p * d + q];
        if (apq == 0.0) continue;
        const double app = m[p * d + p];
        const double aqq = m[q * d + q];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < d; ++i) {
          const double mip = m[i * d + p];
          const double miq = m[i * d + q];
          m[i * d + p] = c * mip - s * miq;
          m[i * d + q] = s * mip + c * miq;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double mpi = m[p * d + i];
          const double mqi = m[q * d + i];
          m[p * d + i] = c * mpi - s * mqi;
          m[q * d + i] = s * mpi + c * mqi;
        }
        for (std::size_t i = 0; i < d; ++i) {
          const double vip = v[i * d + p];
          const double viq = v[i * d + q];
          v[i * d + p] = c * vip - s * viq;
          v[i * d + q] = s * vip + c * viq;
        }
      }
    }
  }
  eigenvalues.resize(d);
  for (std::size_t i = 0; i < d; ++i) eigenvalues[i] = m[i * d + i];
}

}  // namespace detail

// Mean, orthonormal eigenvector columns (descending eigenvalue order), and
// eigenvalues of the sample covariance.
struct PcaModel {
  std::size_t dim = 0;
  std::vector<double> mean;
  std::vector<double> eigenvectors;  // row-major dim x dim; columns sorted
  std::vector<double> eigenvalues;   // descending

  double vec_at(std::size_t row, std::size_t col) const {
    return eigenvectors[row * dim + col];
  }
};

inline PcaModel pca_fit(const std::vector<std::vector<double>>& data) {
  if (data.empty()) throw TooFewSamples("pca_fit: empty data");
  const std::size_t d = data.front().size();
  const std::size_t n = data.size();
  if (n <= d) throw TooFewSamples("pca_fit: need more samples than dimensions");
  PcaModel model;
  model.dim = d;
  model.mean.assign(d, 0.0);
  for (const auto& row : data) {
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += row[j];
  }
  for (double& m : model.mean) m /= static_cast<double>(n);
  std::vector<double> cov(d * d, 0.0);
  for (const auto& row : data) {
    for (std::size_t i = 0; i < d; ++i) {
      const double ci = row[i] - model.mean[i];
      for (std::size_t j = i; j < d; ++j) {
        cov[i * d + j] += ci * (row[j] - model.mean[j]);
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov[i * d + j] /= static_cast<double>(n - 1);
      cov[j * d + i] = cov[i * d + j];
    }
  }
  std::vector<double> vecs;
  detail::jacobi_eigen(cov, d, model.eigenvalues, vecs);
  // sort columns by descending eigenvalue
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return model.eigenvalues[a] > model.eigenvalues[b];
  });
  std::vector<double> sorted_vals(d);
  model.eigenvectors.assign(d * d, 0.0);
  for (std::size_t c = 0; c < d; ++c) {
    sorted_vals[c] = model.eigenvalues[order[c]];
    for (std::size_t r = 0; r < d; ++r) {
      model.eigenvectors[r * d + c] = vecs[r * d + order[c]];
    }
  }
  model.eigenvalues = std::move(sorted_vals);
  return model;
}

// Projects centered rows onto the top dim-1 eigenvectors; compositional
// input has one structurally null direction, so the last component carries
// no information.
inline std::vector<std::vector<double>> pca_transform(
    const PcaModel& model, const std::vector<std::vector<double>>& data) {
  const std::size_t d = model.dim;
  const std::size_t k = d - 1;
  std::vector<std::vector<double>> out(data.size(), std::vector<double>(k));
  for (std::size_t r = 0; r < data.size(); ++r) {
    if (data[r].size() != d) {
      throw LengthMismatch("pca_transform: row dimension mismatch");
    }
    for (std::size_t c = 0; c < k; ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        acc += (data[r][i] - model.mean[i]) * model.vec_at(i, c);
      }
      out[r][c] = acc;
    }
  }
  return out;
}

}  // namespace neutral

#endif
