#pragma once

// Flat key=value experiment configuration.
//
//   map.family = bump      # identity | affine | conformal_quadratic | bump
//   map.eps = 0.02
//   F = window:10          # square:N | ball:N | window:LAMBDA | list:1x1,1x2,...
//   p = 1.5,2,3
//
// Lists are comma separated. Unknown keys are rejected.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lpcont/domain_map.hpp"
#include "lpcont/lattice.hpp"

namespace lpcont {

inline constexpr const char* kVersion = "0.1.0";

struct ExperimentConfig {
  std::string experiment;
  MapParams map{"bump", 1.0, 1.0, 0.02};
  int M = 16;
  int n_1d = 44;
  std::string F = "window:10";
  std::vector<double> p{2.0};
  std::vector<double> sweep{0.08, 0.04, 0.02, 0.01};
  std::uint64_t seed = 20240601;
  int restarts = 8;
  int iters = 60;
  int nodes = 64;
  int N_max = 40;
  std::vector<int> N_list{4, 8, 16};
  int sample_density = 64;
  int k = 20;
  std::string out;
};

/// Names of every accepted key, in echo order.
const std::vector<std::string>& config_keys();

/// Throws ConfigError for unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// "key=value" form used by --set.
void apply_assignment(ExperimentConfig& config, const std::string& assignment);
/// Reads a config file line by line; '#' starts a comment.
void load_config(ExperimentConfig& config, std::istream& is);
void load_config_file(ExperimentConfig& config, const std::string& path);

std::string setting_value(const ExperimentConfig& config, const std::string& key);

/// Throws ConfigError for malformed specs.
IndexSet parse_index_set(const std::string& spec);

/// Range checks on every field (ConfigError). When the experiment uses F,
/// also checks that F fits in order M (ConfigError) and does not split an
/// eigenvalue (SplittingError).
void validate(const ExperimentConfig& config);

/// "# lpcont <version> <experiment>" followed by one "# key=value" line per key.
void write_config_echo(std::ostream& os, const ExperimentConfig& config);

}  // namespace lpcont
