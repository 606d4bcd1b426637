#include "pathwise/path_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pathwise {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string meta_file_for(const std::string& csv_file) {
  std::string stem = csv_file;
  auto dot = stem.rfind('.');
  if (dot != std::string::npos) stem.erase(dot);
  return stem + ".meta.json";
}

PathMode mode_from_string(const std::string& s) {
  if (s == "step") return PathMode::step;
  if (s == "linear") return PathMode::linear;
  throw ParseError("unknown mode '" + s + "'", 0);
}

const char* mode_to_string(PathMode m) {
  return m == PathMode::step ? "step" : "linear";
}

}  // namespace

ParseError::ParseError(const std::string& msg, long l)
    : std::runtime_error(l > 0 ? msg + " (line " + std::to_string(l) + ")"
                               : msg),
      line(l) {}

void write_path_csv(const CadlagPath& path, const std::string& csv_file) {
  std::ofstream out(csv_file);
  if (!out) throw std::runtime_error("cannot open " + csv_file + " for writing");
  out << "t,value\n";
  for (std::size_t i = 0; i < path.size(); ++i)
    out << fmt17(path.times()[i]) << ',' << fmt17(path.values()[i]) << '\n';
  nlohmann::json meta{{"horizon", path.horizon()},
                      {"mode", mode_to_string(path.mode())}};
  std::ofstream ms(meta_file_for(csv_file));
  if (!ms) throw std::runtime_error("cannot write sidecar for " + csv_file);
  ms << meta.dump(2) << '\n';
}

CadlagPath read_path_csv(const std::string& csv_file) {
  std::ifstream in(csv_file);
  if (!in) throw std::runtime_error("cannot open " + csv_file);
  std::ifstream ms(meta_file_for(csv_file));
  if (!ms) throw std::runtime_error("missing sidecar " + meta_file_for(csv_file));
  nlohmann::json meta;
  try {
    ms >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad sidecar: ") + e.what(), 0);
  }
  double horizon = meta.at("horizon").get<double>();
  PathMode mode = mode_from_string(meta.at("mode").get<std::string>());
  std::vector<double> ts, vs;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != "t,value") throw ParseError("expected header 't,value'", 1);
      continue;
    }
    std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("expected 't,value' row", lineno);
    try {
      std::size_t used = 0;
      ts.push_back(std::stod(line.substr(0, comma), &used));
      vs.push_back(std::stod(line.substr(comma + 1), &used));
    } catch (const std::exception&) {
      throw ParseError("malformed number", lineno);
    }
  }
  try {
    return CadlagPath(horizon, mode, std::move(ts), std::move(vs));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_path_json(const CadlagPath& path, const std::string& json_file) {
  nlohmann::json doc;
  doc["horizon"] = path.horizon();
  doc["mode"] = mode_to_string(path.mode());
  auto& pts = doc["points"] = nlohmann::json::array();
  for (std::size_t i = 0; i < path.size(); ++i)
    pts.push_back({path.times()[i], path.values()[i]});
  std::ofstream out(json_file);
  if (!out) throw std::runtime_error("cannot open " + json_file + " for writing");
  out << doc.dump(2) << '\n';
}

CadlagPath read_path_json(const std::string& json_file) {
  std::ifstream in(json_file);
  if (!in) throw std::runtime_error("cannot open " + json_file);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports byte offsets; surface what we have.
    throw ParseError(std::string("JSON parse error: ") + e.what(), 0);
  }
  try {
    double horizon = doc.at("horizon").get<double>();
    PathMode mode = mode_from_string(doc.at("mode").get<std::string>());
    std::vector<double> ts, vs;
    for (const auto& pt : doc.at("points")) {
      ts.push_back(pt.at(0).get<double>());
      vs.push_back(pt.at(1).get<double>());
    }
    return CadlagPath(horizon, mode, std::move(ts), std::move(vs));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad path document: ") + e.what(), 0);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), 0);
  }
}

void write_path(const CadlagPath& path, const std::string& file) {
  if (file.size() >= 5 && file.compare(file.size() - 5, 5, ".json") == 0)
    write_path_json(path, file);
  else
    write_path_csv(path, file);
}

CadlagPath read_path(const std::string& file) {
  if (file.size() >= 5 && file.compare(file.size() - 5, 5, ".json") == 0)
    return read_path_json(file);
  return read_path_csv(file);
}

}  // namespace pathwise
