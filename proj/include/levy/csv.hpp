#pragma once

#include <string>

namespace levy::csv {

/// Locale-independent decimal formatting, 17 significant digits
/// (round-trip exact for doubles).
std::string fmt(double x);

}  // namespace levy::csv
