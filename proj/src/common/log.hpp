#pragma once

#include <functional>
#include <string_view>

namespace scenediag {

using WarningSink = std::function<void(std::string_view)>;

/// Installs the process-wide warning sink; the default writes to stderr.
/// Passing an empty function restores the default.
void set_warning_sink(WarningSink sink);

void warn(std::string_view message);

}  // namespace scenediag
