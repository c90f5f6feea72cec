#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sdftest/random.hpp"
#include "sdftest/spectral_model.hpp"

namespace sdftest {

using TimeSeries = std::vector<double>;

/// Toeplitz matrix {gamma(|i - j|)}, i, j = 1..n.
Eigen::MatrixXd covariance_matrix(const SpectralModel& model, int n);

/// Exact sampler for N(0, covariance_matrix(model, n)).
///
/// Prepared once per (model, n) and then reused for many replicates. The
/// default method embeds the Toeplitz covariance in a circulant of size
/// 2^k >= 2(n - 1); when an embedding eigenvalue is below -1e-10 times the
/// largest one it falls back to a dense Cholesky factor.
class GaussianSampler {
 public:
  enum class Method { automatic, circulant_embedding, cholesky };

  GaussianSampler(const SpectralModel& model, int n,
                  Method method = Method::automatic);

  int length() const noexcept { return n_; }
  /// The method actually in use (never `automatic`).
  Method method() const noexcept { return method_; }
  int embedding_size() const noexcept { return embedding_size_; }

  TimeSeries sample(SamplerState state) const;

  /// Two independent draws of lengths n_first, n_second <= length() from one
  /// stream. Each is distributed as the leading block of the covariance.
  std::pair<TimeSeries, TimeSeries> sample_pair(int n_first, int n_second,
                                                SamplerState state) const;

 private:
  std::pair<TimeSeries, TimeSeries> draw_two(SamplerState state) const;

  int n_;
  Method method_;
  int embedding_size_ = 0;
  std::vector<double> amplitude_;  // sqrt(eigenvalue / embedding size)
  Eigen::MatrixXd cholesky_factor_;
};

/// One draw of length n >= 2.
TimeSeries sample_series(const SpectralModel& model, int n, SamplerState state);

}  // namespace sdftest
