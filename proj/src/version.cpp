#include "avi/version.hpp"

namespace avi {

std::string_view version_string() { return AVI_VERSION_STRING; }

}  // namespace avi
