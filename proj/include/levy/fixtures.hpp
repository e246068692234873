#pragma once

#include <span>
#include <string>
#include <string_view>

namespace levy {

/// A bundled example config. Names are stable identifiers.
struct Fixture {
  std::string_view name;
  std::string_view description;
  std::string_view json_text;
};

std::span<const Fixture> fixtures();

/// Accepts "name" or "name.json"; nullptr when absent.
const Fixture* find_fixture(std::string_view name);

}  // namespace levy
