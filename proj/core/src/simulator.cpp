#include "sdftest/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft.hpp"
#include "sdftest/error.hpp"

namespace sdftest {
namespace {

constexpr double kNegativeEigenTolerance = 1e-10;
constexpr double kJitter = 1e-12;

int embedding_size_for(int n) {
  int size = 2;
  while (size < 2 * (n - 1)) size *= 2;
  return size;
}

Eigen::MatrixXd toeplitz(const Autocovariance& gamma, int n) {
  Eigen::MatrixXd c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = gamma[static_cast<std::size_t>(std::abs(i - j))];
  }
  return c;
}

}  // namespace

Eigen::MatrixXd covariance_matrix(const SpectralModel& model, int n) {
  if (n < 1) throw ParameterError("covariance_matrix: n must be >= 1");
  return toeplitz(autocovariance(model, n - 1), n);
}

GaussianSampler::GaussianSampler(const SpectralModel& model, int n,
                                 Method method)
    : n_(n), method_(method) {
  if (n < 2) throw ParameterError("GaussianSampler: n must be >= 2");

  if (method != Method::cholesky) {
    const int size = embedding_size_for(n);
    const int half = size / 2;
    const auto gamma = autocovariance(model, half);
    // Eigenvalues of the symmetric circulant with first row
    // (g0, g1, ..., g_half, ..., g1) are a DCT-I of g0..g_half.
    std::vector<double> eig(static_cast<std::size_t>(half) + 1);
    fft::redft00(gamma.values, eig);
    const double largest = *std::max_element(eig.begin(), eig.end());
    const double smallest = *std::min_element(eig.begin(), eig.end());
    if (smallest >= -kNegativeEigenTolerance * largest) {
      method_ = Method::circulant_embedding;
      embedding_size_ = size;
      amplitude_.resize(static_cast<std::size_t>(size));
      for (int k = 0; k < size; ++k) {
        const double lambda = eig[static_cast<std::size_t>(k <= half ? k : size - k)];
        amplitude_[static_cast<std::size_t>(k)] =
            std::sqrt(std::max(lambda, 0.0) / size);
      }
      return;
    }
    if (method == Method::circulant_embedding) {
      throw NumericalError("circulant embedding is not nonnegative definite for " +
                           model.name());
    }
  }

  method_ = Method::cholesky;
  const auto gamma = autocovariance(model, n - 1);
  Eigen::MatrixXd cov = toeplitz(gamma, n);
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    cov.diagonal().array() += kJitter * gamma[0];
    llt.compute(cov);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("Cholesky factorisation failed for " + model.name());
    }
  }
  cholesky_factor_ = llt.matrixL();
}

std::pair<TimeSeries, TimeSeries> GaussianSampler::draw_two(
    SamplerState state) const {
  NormalStream normal(state);
  if (method_ == Method::circulant_embedding) {
    const auto size = static_cast<std::size_t>(embedding_size_);
    std::vector<std::complex<double>> z(size), y(size);
    for (std::size_t k = 0; k < size; ++k) {
      const double re = normal();
      const double im = normal();
      z[k] = amplitude_[k] * std::complex<double>(re, im);
    }
    fft::forward_complex(z, y);
    TimeSeries a(static_cast<std::size_t>(n_)), b(static_cast<std::size_t>(n_));
    for (std::size_t t = 0; t < a.size(); ++t) {
      a[t] = y[t].real();
      b[t] = y[t].imag();
    }
    return {std::move(a), std::move(b)};
  }
  Eigen::VectorXd za(n_), zb(n_);
  for (int t = 0; t < n_; ++t) za(t) = normal();
  for (int t = 0; t < n_; ++t) zb(t) = normal();
  const Eigen::VectorXd xa = cholesky_factor_.triangularView<Eigen::Lower>() * za;
  const Eigen::VectorXd xb = cholesky_factor_.triangularView<Eigen::Lower>() * zb;
  return {TimeSeries(xa.data(), xa.data() + n_), TimeSeries(xb.data(), xb.data() + n_)};
}

TimeSeries GaussianSampler::sample(SamplerState state) const {
  return draw_two(state).first;
}

std::pair<TimeSeries, TimeSeries> GaussianSampler::sample_pair(
    int n_first, int n_second, SamplerState state) const {
  if (n_first < 1 || n_second < 1 || n_first > n_ || n_second > n_) {
    throw ParameterError("sample_pair: requested lengths exceed the sampler length");
  }
  auto [a, b] = draw_two(state);
  a.resize(static_cast<std::size_t>(n_first));
  b.resize(static_cast<std::size_t>(n_second));
  return {std::move(a), std::move(b)};
}

TimeSeries sample_series(const SpectralModel& model, int n, SamplerState state) {
  return GaussianSampler(model, n).sample(state);
}

}  // namespace sdftest
