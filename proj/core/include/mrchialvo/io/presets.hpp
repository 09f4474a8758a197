#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mrchialvo/types.hpp"

namespace mrchialvo::io {

/// Named figure recipe: the subcommand to run and the flag values it
/// implies. Flags given on the command line override preset values.
struct Preset {
  std::string name;
  std::string command;
  std::string description;
  std::vector<std::pair<std::string, std::string>> settings;  ///< flag name (no dashes) -> value

  std::optional<std::string> setting(std::string_view flag) const;
};

const std::vector<Preset>& all_presets();

/// Throws InvalidArgument("unknown preset ...").
const Preset& preset(std::string_view name);

/// Map parameters named in the preset (absent ones stay 0, h stays 1).
MapParams preset_map(const Preset& p);

}  // namespace mrchialvo::io
