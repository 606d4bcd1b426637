#pragma once

#include <stdexcept>
#include <string>

#include "pathwise/path.hpp"

namespace pathwise {

// Parse failures throw ParseError with a 1-based line number where available.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, long line);
  long line = 0;
};

// CSV body `t,value` with a JSON sidecar `<stem>.meta.json` holding
// {horizon, mode}; or a single JSON document {horizon, mode, points:[[t,v]..]}.
// Numbers are written with 17 significant digits so round-trips are bit-exact.
void write_path_csv(const CadlagPath& path, const std::string& csv_file);
CadlagPath read_path_csv(const std::string& csv_file);

void write_path_json(const CadlagPath& path, const std::string& json_file);
CadlagPath read_path_json(const std::string& json_file);

// Dispatch on the .json / .csv extension.
void write_path(const CadlagPath& path, const std::string& file);
CadlagPath read_path(const std::string& file);

}  // namespace pathwise
