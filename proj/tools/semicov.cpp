#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "semicov/cli.hpp"
#include "semicov/error.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum class Kind { Number, Text, Path };

struct Flag {
  std::string name;  // also the config key, with '-' for '_'
  Kind kind;
  std::string help;
};

const std::map<std::string, std::vector<Flag>>& command_flags() {
  const Flag map{"map", Kind::Path, "map config file"};
  const Flag tol{"tol", Kind::Number, "solver tolerance"};
  const Flag grid{"grid", Kind::Number, "grid size"};
  const Flag band{"band", Kind::Text, "band a,b with 0 < a < b < 1"};
  const Flag nmax{"nmax", Kind::Number, "largest n"};
  static const std::map<std::string, std::vector<Flag>> flags{
      {"semiconj1d", {map, {"orientation", Kind::Text, "+ or -"}, tol, grid}},
      {"rotation", {map, tol, grid, {"points", Kind::Number, "number of sample points"}}},
      {"classify", {map, tol, grid, {"max-period", Kind::Number, "longest period searched"}}},
      {"compare",
       {{"a", Kind::Path, "first map config"},
        {"b", Kind::Path, "second map config"},
        tol,
        grid,
        {"max-period", Kind::Number, "longest period searched"},
        {"compare-tol", Kind::Number, "angle tolerance for matching records"}}},
      {"semiconj2d",
       {map, band, tol, {"nx", Kind::Number, "base grid size"}, {"ny", Kind::Number, "fiber grid size"}}},
      {"repellers",
       {map, {"connector", Kind::Path, "connector config file"}, {"depth", Kind::Number, "iteration depth"}}},
      {"star-scan", {map, band, nmax}},
      {"counterexample-table", {nmax}},
      {"perturb",
       {{"epsilon", Kind::Text, "scale or scale,exponent"},
        {"grid", Kind::Number, "distance samples"},
        {"r-samples", Kind::Number, "samples of the invariant region"},
        {"width", Kind::Number, "arc width for the non-injectivity count"},
        {"seed", Kind::Number, "sampling seed"}}},
  };
  return flags;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw semicov::Error(semicov::ErrorKind::ValidationError, "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json flag_value(const Flag& f, const std::string& text) {
  switch (f.kind) {
    case Kind::Path: return fs::absolute(text).string();
    case Kind::Text: return text;
    case Kind::Number: {
      json v = json::parse(text, nullptr, false);
      return v.is_number() ? v : json(text);
    }
  }
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiconjugacies of circle and annulus coverings to z -> z^d"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out;
  std::map<std::string, std::map<std::string, std::string>> values;
  for (const auto& [command, flags] : command_flags()) {
    auto* sub = app.add_subcommand(command);
    sub->add_option("--config", config_file, "JSON run config; flags override its keys");
    sub->add_option("--out", out, "artifact path");
    for (const auto& f : flags) sub->add_option("--" + f.name, values[command][f.name], f.help);
  }
  CLI11_PARSE(app, argc, argv);

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    json cfg = json::object();
    fs::path base_dir = ".";
    if (!config_file.empty()) {
      cfg = json::parse(read_file(config_file));
      base_dir = fs::path(config_file).parent_path();
      if (base_dir.empty()) base_dir = ".";
    }
    cfg["command"] = command;
    for (const auto& f : command_flags().at(command)) {
      if (sub->count("--" + f.name) == 0) continue;
      std::string key = f.name;
      std::replace(key.begin(), key.end(), '-', '_');
      cfg[key] = flag_value(f, values[command][f.name]);
    }
    if (!out.empty()) cfg["out"] = out;
    const auto config = semicov::parse_config(cfg.dump(), base_dir);
    return semicov::run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return semicov::kExitError;
  }
}
