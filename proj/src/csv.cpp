#include "levy/csv.hpp"

#include <charconv>

namespace levy::csv {

std::string fmt(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

}  // namespace levy::csv
