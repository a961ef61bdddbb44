#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "semicov/annulus.hpp"
#include "semicov/circle_map.hpp"
#include "semicov/classify1d.hpp"
#include "semicov/connectors.hpp"
#include "semicov/obstruction.hpp"

namespace semicov {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitError = 3;

/// A validated run. Map specs are JSON objects (file references already
/// loaded); every key not listed for the command is rejected.
struct RunConfig {
  std::string command;
  nlohmann::json map;        // circle map or annulus map, depending on the command
  nlohmann::json map_b;      // compare only
  nlohmann::json connector;  // repellers only
  double tol = 1e-8;
  std::size_t grid = kDefaultGrid;
  int orientation = 1;
  Interval band{0.1, 0.9};
  std::size_t nx = 64, ny = 512;
  int depth = 10;
  int nmax = 6;
  int points = 16;
  int max_period = 8;
  double compare_tol = 1e-3;
  LoopSpec loop;
  std::string epsilon = "0.1";
  std::size_t samples = 100000;
  std::size_t r_samples = 10000;
  double width = 0.01;
  std::uint64_t seed = 20240601;
  std::filesystem::path out;
  nlohmann::json source;  // the validated config itself, hashed into artifacts
};

/// Parses a JSON run config. String values of "map", "a", "b" and "connector"
/// are file paths, resolved against base_dir. Throws ParseError (with line)
/// or ValidationError.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");

/// FNV-1a of the config's canonical (sorted-key) serialization.
std::uint64_t config_hash(const RunConfig& config);

/// Map families. Unknown families or keys throw ValidationError.
LiftedCircleMap circle_map_from_json(const nlohmann::json& spec, std::size_t default_grid = kDefaultGrid);
AnnulusMapLift annulus_map_from_json(const nlohmann::json& spec);
ConnectorCurve connector_from_json(const nlohmann::json& spec);

/// Dispatches the command, writes the artifact at config.out (if set) and a
/// summary to `log`. Returns 0 success, 1 negative verdict, 2 inconclusive,
/// 3 error.
int run(const RunConfig& config, std::ostream& log);

}  // namespace semicov
