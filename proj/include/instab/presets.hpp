#pragma once

#include <string>
#include <vector>

namespace instab {

/// Bundled experiment presets, one per proposition. Names are stable
/// identifiers.
std::vector<std::string> preset_names();

/// Full run-config JSON for one preset. Throws ConfigError for unknown names.
std::string preset_config(const std::string& name);

/// Every preset plus the differentiability dichotomy and the bundled
/// negative fixtures; the full acceptance run.
std::string paper_suite_config();

} // namespace instab
