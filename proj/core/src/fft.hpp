#pragma once

// Thin FFTW wrapper. Plans are created once per (kind, size) under a mutex
// with FFTW_ESTIMATE, so the chosen algorithm (and therefore every result)
// is deterministic; execution uses the new-array interface and is safe to
// call from several threads at once.

#include <complex>
#include <span>
#include <vector>

namespace sdftest::fft {

/// Unnormalised DCT-I (FFTW REDFT00), n >= 2:
/// out[k] = in[0] + (-1)^k in[n-1] + 2 sum_{j=1}^{n-2} in[j] cos(pi j k / (n-1)).
void redft00(std::span<const double> in, std::span<double> out);

/// Real-to-half-complex forward DFT: out has n/2 + 1 entries,
/// out[k] = sum_t in[t] exp(-2 pi i k t / n).
void forward_real(std::span<const double> in,
                  std::span<std::complex<double>> out);

/// Inverse of forward_real without the 1/n factor. `in` is clobbered.
void backward_real(std::span<std::complex<double>> in, std::span<double> out);

/// Unnormalised forward complex DFT, out[k] = sum_t in[t] exp(-2 pi i k t / n).
void forward_complex(std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out);

/// Version string of the linked FFTW library.
const char* library_version();

}  // namespace sdftest::fft
