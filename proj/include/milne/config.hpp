#ifndef MILNE_CONFIG_HPP
#define MILNE_CONFIG_HPP

#include <string>

#include "milne/domain.hpp"

namespace milne {

/// Potential + grid + hbar, as read from the JSON run configuration:
/// {"potential": {"type": "harmonic", "m": 1.0, "omega": 1.0}
///               | {"type": "polynomial", "coeffs": [...], "m": 1.0}
///               | {"type": "table", "file": "path.csv", "m": 1.0},
///  "grid": {"xmin": -12.0, "xmax": 12.0, "n": 4001},
///  "hbar": 1.0}
/// Table CSV: header row required, two columns x,V.
struct RunConfig {
  PotentialSpec potential;
  SpatialGrid grid;
};

RunConfig load_config_file(const std::string& path);
RunConfig load_config_json(const std::string& json_text,
                           const std::string& base_dir = ".");

/// Two-column CSV with a mandatory header row.
std::pair<std::vector<double>, std::vector<double>> read_table_csv(
    const std::string& path);

}  // namespace milne

#endif
