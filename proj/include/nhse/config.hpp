#pragma once

#include "nhse/ensemble.hpp"

#include <string>
#include <string_view>

namespace nhse {

/// Key-value experiment description, one `key = value` per line, `#` starts
/// a comment. Keys: n, ell, s, gamma, kind, eps_s, eps_gamma, eps, trials,
/// seed, edge_sites, threads. Unlisted keys keep the values of `base`.
/// Throws ConfigError on unknown keys or unparsable values.
ExperimentConfig parse_config_text(std::string_view text, const ExperimentConfig& base = {});
ExperimentConfig load_config_file(const std::string& path, const ExperimentConfig& base = {});

/// Sets one key; shared by the file parser and the command line.
void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value);

std::string to_config_text(const ExperimentConfig& config);

} // namespace nhse
