#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

namespace sdftest {

std::string version();

/// Versions of sdftest and the numerical libraries it was built against.
nlohmann::json build_versions();

}  // namespace sdftest
