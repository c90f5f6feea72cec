#include "fft.hpp"

#include <fftw3.h>

#include <cassert>
#include <map>
#include <mutex>
#include <tuple>

namespace sdftest::fft {
namespace {

enum class Kind { redft00, r2c, c2r, c2c_forward };

constexpr unsigned kPlanFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, int n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = make(kind, n);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  static fftw_plan make(Kind kind, int n) {
    // Planning with FFTW_ESTIMATE never touches the arrays' contents; they
    // only fix in-place vs out-of-place and the size.
    const auto nn = static_cast<std::size_t>(n);
    switch (kind) {
      case Kind::redft00: {
        std::vector<double> a(nn), b(nn);
        return fftw_plan_r2r_1d(n, a.data(), b.data(), FFTW_REDFT00, kPlanFlags);
      }
      case Kind::r2c: {
        std::vector<double> a(nn);
        std::vector<std::complex<double>> b(nn / 2 + 1);
        return fftw_plan_dft_r2c_1d(
            n, a.data(), reinterpret_cast<fftw_complex*>(b.data()), kPlanFlags);
      }
      case Kind::c2r: {
        std::vector<std::complex<double>> a(nn / 2 + 1);
        std::vector<double> b(nn);
        return fftw_plan_dft_c2r_1d(
            n, reinterpret_cast<fftw_complex*>(a.data()), b.data(), kPlanFlags);
      }
      case Kind::c2c_forward: {
        std::vector<std::complex<double>> a(nn), b(nn);
        return fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                reinterpret_cast<fftw_complex*>(b.data()),
                                FFTW_FORWARD, kPlanFlags);
      }
    }
    return nullptr;
  }

  std::mutex mutex_;
  std::map<std::tuple<Kind, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void redft00(std::span<const double> in, std::span<double> out) {
  assert(in.size() == out.size() && in.size() >= 2);
  auto plan = cache().get(Kind::redft00, static_cast<int>(in.size()));
  // REDFT00 does not modify its input when out-of-place.
  fftw_execute_r2r(plan, const_cast<double*>(in.data()), out.data());
}

void forward_real(std::span<const double> in,
                  std::span<std::complex<double>> out) {
  assert(out.size() == in.size() / 2 + 1);
  auto plan = cache().get(Kind::r2c, static_cast<int>(in.size()));
  fftw_execute_dft_r2c(plan, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void backward_real(std::span<std::complex<double>> in, std::span<double> out) {
  assert(in.size() == out.size() / 2 + 1);
  auto plan = cache().get(Kind::c2r, static_cast<int>(out.size()));
  fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
}

void forward_complex(std::span<const std::complex<double>> in,
                     std::span<std::complex<double>> out) {
  assert(in.size() == out.size());
  auto plan = cache().get(Kind::c2c_forward, static_cast<int>(in.size()));
  fftw_execute_dft(
      plan,
      reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
      reinterpret_cast<fftw_complex*>(out.data()));
}

const char* library_version() { return fftw_version; }

}  // namespace sdftest::fft
