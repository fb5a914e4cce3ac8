#pragma once

#include <string_view>

namespace avi {

/// "avi <semver>-g<git describe>" as configured at build time.
std::string_view version_string();

}  // namespace avi
