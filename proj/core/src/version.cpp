#include "sdftest/version.hpp"

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "fft.hpp"

namespace sdftest {

std::string version() { return SDFTEST_VERSION; }

nlohmann::json build_versions() {
  const auto dotted = [](int a, int b, int c) {
    return std::to_string(a) + "." + std::to_string(b) + "." + std::to_string(c);
  };
  return {{"sdftest", version()},
          {"fftw", fft::library_version()},
          {"eigen", dotted(EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
          {"nlohmann_json", dotted(NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                   NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace sdftest
