#include "milne/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "milne/errors.hpp"

namespace milne {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    fail(ErrorCode::config_invalid,
         std::string("config: missing or non-numeric \"") + key + "\"");
  const double v = j[key].get<double>();
  if (!std::isfinite(v))
    fail(ErrorCode::config_invalid,
         std::string("config: \"") + key + "\" is not finite");
  return v;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> read_table_csv(
    const std::string& path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::config_invalid, "cannot open table file: " + path);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorCode::config_invalid, "table file is empty: " + path);
  // header row is mandatory; reject a numeric-looking first row
  {
    std::istringstream probe(line);
    double v;
    char comma;
    if (probe >> v >> comma)
      fail(ErrorCode::config_invalid,
           "table CSV must start with a header row: " + path);
  }
  std::vector<double> xs, vs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b))
      fail(ErrorCode::config_invalid,
           "table CSV row " + std::to_string(lineno) + " needs two columns");
    try {
      xs.push_back(std::stod(a));
      vs.push_back(std::stod(b));
    } catch (const std::exception&) {
      fail(ErrorCode::config_invalid,
           "table CSV row " + std::to_string(lineno) + " is not numeric");
    }
  }
  if (xs.size() < 4)
    fail(ErrorCode::config_invalid, "table CSV needs at least 4 samples");
  return {std::move(xs), std::move(vs)};
}

RunConfig load_config_json(const std::string& json_text,
                           const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(ErrorCode::config_invalid, std::string("config: ") + e.what());
  }
  if (!root.contains("potential") || !root.contains("grid"))
    fail(ErrorCode::config_invalid,
         "config: \"potential\" and \"grid\" are required");

  const double hbar = root.contains("hbar") ? require_number(root, "hbar") : 1.0;
  if (hbar <= 0) fail(ErrorCode::config_invalid, "config: hbar must be > 0");

  const json& g = root["grid"];
  SpatialGrid grid(require_number(g, "xmin"), require_number(g, "xmax"),
                   std::size_t(require_number(g, "n")));

  const json& p = root["potential"];
  if (!p.contains("type") || !p["type"].is_string())
    fail(ErrorCode::config_invalid, "config: potential.type is required");
  const std::string type = p["type"].get<std::string>();
  const double mass = p.contains("m") ? require_number(p, "m") : 1.0;

  PotentialSpec spec = [&] {
    if (type == "harmonic")
      return PotentialSpec::harmonic(mass, require_number(p, "omega"), hbar);
    if (type == "polynomial") {
      if (!p.contains("coeffs") || !p["coeffs"].is_array())
        fail(ErrorCode::config_invalid, "config: polynomial needs coeffs[]");
      std::vector<double> coeffs;
      for (const auto& c : p["coeffs"]) {
        if (!c.is_number())
          fail(ErrorCode::config_invalid, "config: non-numeric coefficient");
        coeffs.push_back(c.get<double>());
      }
      return PotentialSpec::polynomial(std::move(coeffs), mass, hbar);
    }
    if (type == "table") {
      if (!p.contains("file") || !p["file"].is_string())
        fail(ErrorCode::config_invalid, "config: table needs \"file\"");
      std::filesystem::path fp = p["file"].get<std::string>();
      if (fp.is_relative()) fp = std::filesystem::path(base_dir) / fp;
      auto [xs, vs] = read_table_csv(fp.string());
      return PotentialSpec::tabulated(std::move(xs), std::move(vs), mass, hbar);
    }
    fail(ErrorCode::config_invalid, "config: unknown potential type: " + type);
  }();

  RunConfig cfg{std::move(spec), grid};
  cfg.potential.validate(cfg.grid);
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_invalid, "cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_config_json(buf.str(),
                          std::filesystem::path(path).parent_path().string());
}

}  // namespace milne
