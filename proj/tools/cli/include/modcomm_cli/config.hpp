#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "modcomm/errors.hpp"
#include "modcomm/experiments.hpp"

namespace modcomm::cli {

class ConfigError : public InvalidArgument {
 public:
  explicit ConfigError(const std::string& msg) : InvalidArgument("cli", msg) {}
};

struct OutputSpec {
  std::string dir = ".";
  std::string csv = "results.csv";
  std::string jsonl = "results.jsonl";
  std::string result = "result.json";
  std::string current = "current.csv";

  // Joins dir and file unless file is absolute.
  std::string path(const std::string& file) const;
};

struct RunConfig {
  ExperimentConfig experiment;
  OutputSpec output;
  CurrentSlicing slicing = CurrentSlicing::symmetric;
  std::uint64_t seed = 1;
  bool grid_given = false;
};

// Parses a JSON config; unknown keys anywhere in the tree raise ConfigError.
// `operation_hint` selects the defaults when the config names no operation.
RunConfig parse_config(const std::string& text, const std::string& operation_hint = "compute");
RunConfig load_config(const std::string& path, const std::string& operation_hint = "compute");

// Output directory from MODCOMM_OUT_DIR, if set.
std::optional<std::string> env_output_dir();

}  // namespace modcomm::cli
