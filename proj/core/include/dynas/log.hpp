#pragma once

#include <string_view>

namespace dynas {

/// Numerical-repair warnings go to stderr unless silenced (batch runs and
/// tests silence them and count repairs instead).
void log_warning(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace dynas
