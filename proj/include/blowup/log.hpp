#pragma once

#include <functional>
#include <string_view>

namespace blowup::log {

using Sink = std::function<void(std::string_view)>;

// Default sink writes "warning: <msg>" to stderr. Returns the previous sink.
Sink set_warning_sink(Sink sink);

void warn(std::string_view message);

}  // namespace blowup::log
