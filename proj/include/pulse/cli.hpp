#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>

#include "pulse/error.hpp"

namespace pulse {

/// Entry point of the `pulse` executable. Exit codes: 0 ok, 1 runtime
/// failure, 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Unix seconds, or an ISO-8601 UTC date-time such as 2019-04-01T13:00:00Z.
std::optional<Timestamp> parse_timestamp(std::string_view text);

}  // namespace pulse
