#pragma once

#include <span>
#include <string>
#include <vector>

namespace sdftest {

/// Q_{2q-2}(z) = sum over integers l of sinc(pi (z + l))^{2q}.
double sinc_power_sum(double z, int q);

/// kappa_j, j = 1..N (element j - 1), of the periodic spline kernel of
/// penalty order q on N equispaced points. kappa_N = 0, kappa_{N-j} = kappa_j.
std::vector<double> kappa_sequence(int N, int q);

/// Circulant smoother eigenstructure for one (N, q, h).
struct SmootherSpec {
  int N = 0;
  int q = 0;
  double h = 0.0;
  std::vector<double> kappa;   // kappa_j at index j - 1
  std::vector<double> lambda;  // lambda_j = 1 / (1 + h^{2q} kappa_j) at index j - 1

  /// Eigenvalue attached to DFT frequency k in [0, N); k = 0 carries lambda_N.
  double lambda_at_frequency(int k) const {
    return lambda[static_cast<std::size_t>(k == 0 ? N - 1 : k - 1)];
  }
  double trace() const;
};

/// Builds the eigenstructure and checks 0 < lambda <= 1, lambda_N = 1, symmetry and
/// the lower bound lambda_j >= 1 / (1 + (2 pi h j)^{2q}); a violation throws
/// NumericalError.
SmootherSpec eigenvalues(int N, int q, double h);

/// Indices j <= N/2 where lambda_j > 2 / (2 + (2 pi h j)^{2q}).
std::vector<int> eigenvalue_upper_bound_violations(const SmootherSpec& spec);

/// K ystar via FFT.
std::vector<double> smooth(std::span<const double> ystar, const SmootherSpec& spec);

/// The smoothed curve at an arbitrary x in [0, 1), using the trigonometric
/// interpolant over frequencies |k| <= N/2.
double smooth_at(double x, std::span<const double> ystar, const SmootherSpec& spec);

/// [N^-1 ||(I - K) y||^2] / [1 - tr(K)/N]^2; +inf when tr(K) = N numerically.
double gcv_score(std::span<const double> ystar, int q, double h);

/// y^T (I - K) y / [prod_{lambda_j < 1} (1 - lambda_j)]^{1/(N - N0)}.
double gml_score(std::span<const double> ystar, int q, double h);

enum class Selection { gcv, gml, fixed };

std::string to_string(Selection s);
Selection parse_selection(const std::string& name);

/// Estimate of g = 2^{-1/2} log f on the design grid.
struct LogSdfEstimate {
  std::vector<double> ghat;
  double h = 0.0;
  double score = 0.0;
  Selection method = Selection::gcv;
};

/// 60 log-spaced bandwidths in [0.25 / N, 1].
std::vector<double> default_bandwidth_grid(int N);

/// Minimises the GCV or GML score over `grid` (ties go to the smaller h) and
/// smooths at the minimiser. An empty grid selects default_bandwidth_grid.
LogSdfEstimate select_bandwidth(std::span<const double> ystar, int q,
                                Selection method,
                                std::span<const double> grid = {});

/// Smooths at a fixed bandwidth.
LogSdfEstimate fixed_bandwidth(std::span<const double> ystar, int q, double h);

}  // namespace sdftest
