#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pplab/sim_core.hpp"

namespace pplab {

/// Flat `key = value` config format. One entry per line, `#` starts a comment,
/// blank lines are ignored, unknown keys are rejected.
///
/// Keys: grid_width, grid_height, initial_sheep, initial_wolves,
/// sheep_reproduce_rate, wolf_reproduce_rate, wolf_gain_from_food,
/// wolf_energy_loss_per_tick, max_ticks, sheep_cap, population_cap, seed,
/// wiggle_right,
/// wiggle_left, trajectory_interval, sheep_flocking,
/// wolves_fraction_reproduce, sheep_fraction_reproduce, wolves_altruistic,
/// sheep_altruistic, wolves_predictive, sheep_predictive, predictive_scale,
/// predictive_form (relative, absolute or magnitude),
/// flock_radius, flock_cohere_turn.
///
/// Booleans accept true/false/1/0/yes/no/on/off.

/// Every recognised key, in canonical output order.
const std::vector<std::string_view>& config_keys();

bool is_config_key(std::string_view key);

/// Sets one field from its textual value. Throws ConfigError on an unknown
/// key or a malformed value. Does not run SimConfig::validate().
void set_config_value(SimConfig& config, std::string_view key, std::string_view value);

/// Textual value of one field, in the same form the parser accepts.
std::string get_config_value(const SimConfig& config, std::string_view key);

/// Applies the entries of a config text on top of `base` and validates.
SimConfig parse_config(std::string_view text, SimConfig base = {});

SimConfig load_config(const std::filesystem::path& path, SimConfig base = {});

/// All keys as `key = value` lines, each prefixed by `line_prefix`.
std::string format_config(const SimConfig& config, std::string_view line_prefix = "");

}  // namespace pplab
