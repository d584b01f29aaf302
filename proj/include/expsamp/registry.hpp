#pragma once

#include <string>
#include <vector>

#include "expsamp/mellin.hpp"

namespace expsamp {

/// Registered test functions: const1, log_windowed, sin_log, holder_half,
/// abs_sin_log, bump. Built once; lookups are read-only thereafter.
const TestFunction& registry_get(const std::string& id);
const std::vector<std::string>& registry_ids();

} // namespace expsamp
