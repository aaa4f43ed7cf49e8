#pragma once

#include <span>
#include <string_view>

namespace ramsey::app {

struct Preset {
  std::string_view name;
  std::string_view description;
  std::string_view yaml;
};

/// Built-in figure reproductions, in listing order.
std::span<const Preset> presets();

/// nullptr when the name is unknown.
const Preset* find_preset(std::string_view name);

}  // namespace ramsey::app
