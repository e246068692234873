#pragma once

#include <string>
#include <vector>

#include "levy/verify.hpp"

namespace levy {

struct OutputOptions {
  std::string dir = "out";
  bool timestamp = true;
  bool dump_paths = false;
  bool dump_reflected = false;
  bool dump_decomposition = false;
};

/// One selected test with its fully resolved experiment.
struct TestSelection {
  std::string name;
  Experiment exp;
};

struct ParsedConfig {
  Experiment base;
  std::vector<TestSelection> tests;
  OutputOptions output;
};

/// Parses and schema-validates a config document. Unknown keys are rejected;
/// error messages carry the JSON path of the offending key and, for syntax
/// errors, the line number.
ParsedConfig parse_config(const std::string& json_text);

ParsedConfig load_config_file(const std::string& path);

}  // namespace levy
