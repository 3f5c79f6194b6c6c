#pragma once

#include <string_view>

namespace rsc {

/// Writes "warning: <msg>" to stderr unless warnings are disabled.
void warn(std::string_view msg);
void set_warnings_enabled(bool enabled);

}  // namespace rsc
