#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "randop/lattice.hpp"
#include "randop/spectral.hpp"

namespace randop::cli {

using Json = nlohmann::ordered_json;

// Message starts with the offending field path, e.g. "model.density.lower: ...".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { json_lines, csv };

struct MinamiParams {
  ComplexEnergy z{0.0, 1.0};
  std::vector<std::vector<SiteIndex>> deltas;
};

struct WegnerParams {
  Interval interval;
  std::vector<int> levels;
};

struct IdsParams {
  std::vector<double> energies;
};

struct DosParams {
  std::vector<double> energies;
  double h = 0.05;
};

struct SpacingParams {
  double energy = 0.0;
  double window = 1.0;
  double h = 0.05;
  std::vector<std::vector<std::int64_t>> box_schedule;  // empty: the model box only
};

struct FracMomentParams {
  double energy = 0.0;
  double eps = 0.1;
  double s = 0.5;
};

struct IdentitiesParams {
  std::size_t triples = 1000;
  SiteIndex max_volume = 64;
  std::size_t minor_matrices_per_size = 20;
  SiteIndex minor_max_size = 10;
};

using ExperimentParams =
    std::variant<MinamiParams, WegnerParams, IdsParams, DosParams, SpacingParams, FracMomentParams, IdentitiesParams>;

struct ExperimentConfig {
  std::optional<ModelSpec> model;  // absent only for identities
  std::string experiment;
  ExperimentParams params;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;  // empty: default location
  Format format = Format::json_lines;
  // Resolved config with defaults filled in, without the execution-only
  // settings (workers, out, format). Re-running it reproduces the metrics.
  Json echo;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> experiment;
};

const std::vector<std::string>& experiment_names();

ExperimentConfig parse_config(const Json& doc, const Overrides& overrides = {});
ExperimentConfig load_config(const std::string& path, const Overrides& overrides = {});
// Config for a run with no file: only valid for experiments that need no
// model (identities).
ExperimentConfig default_config(const Overrides& overrides);

Format parse_format(const std::string& name);
std::string format_name(Format f);

}  // namespace randop::cli
