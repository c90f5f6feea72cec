#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdftest {

/// Orthonormal DCT-I: returns D^T x with
/// D_{t,j} = sqrt(2/(n-1)) c_t c_j cos(pi (t-1)(j-1)/(n-1)), c_1 = c_n = 1/sqrt(2).
/// O(n log n). Throws InputError for n < 2.
std::vector<double> dct1(std::span<const double> series);

/// W_j = (D^T x)_j^2.
std::vector<double> squared_coefficients(std::span<const double> series);

/// Shared bin count for two series and the per-series bin masses.
struct BinningPlan {
  int bins = 0;                       // T
  std::array<int, 2> lengths{};       // n_k
  std::array<int, 2> bin_mass{};      // m_k = floor(n_k / T)
  std::array<int, 2> truncation{};    // n_k - T m_k trailing observations dropped
  std::array<double, 2> nu{};         // log T / log n_k
  std::vector<std::string> warnings;

  int used(int k) const { return bins * bin_mass[static_cast<std::size_t>(k)]; }
};

/// Plans the binning of two series of lengths n1, n2 >= 4.
///
/// Without an explicit bin count, T = floor(min(n1, n2)^0.8), lowered until
/// both masses are at least 2. Warns when log n1 / log n2 leaves [2/3, 3/2].
BinningPlan plan_bins(int n1, int n2, std::optional<int> bins = std::nullopt);

/// Q_t = sum of W over the t-th block of `mass` entries; entries past
/// bins * mass are ignored.
std::vector<double> bin(std::span<const double> w, int bins, int mass);

/// Variance-stabilised, mirrored and translated observations on the
/// periodic design x_t = (t - 1) / (2T - 2).
struct TransformedSample {
  std::vector<double> ystar;  // length 2T - 2
  int bins = 0;               // T
  int mass = 0;               // m
  int n_used = 0;             // T m

  int size() const noexcept { return static_cast<int>(ystar.size()); }
  double design(int t) const { return static_cast<double>(t) / size(); }
};

/// The additive shift 2^{-1/2} {psi(m/2) - log(m/2)} removed by `transform`.
double translation_shift(int mass);

/// (Y_T, ..., Y_2, Y_1, Y_2, ..., Y_{T-1}).
std::vector<double> mirror(std::span<const double> y);

/// The T values of a mirrored sequence in increasing frequency order
/// (positions T-1, T-2, ..., 0); inverse of `mirror` on symmetric input.
std::vector<double> unmirror(std::span<const double> mirrored);

/// Uses the first bins * mass observations of `series`, then DCT-I,
/// squaring, binning, Y_t = log(Q_t / m) / sqrt(2), mirroring and translation.
/// Throws InputError if any bin sum is not positive (constant or zero data).
TransformedSample transform(std::span<const double> series, int bins, int mass);

/// Transform of series k (0 or 1) of a plan.
TransformedSample transform(std::span<const double> series,
                            const BinningPlan& plan, int k);

}  // namespace sdftest
