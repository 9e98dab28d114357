#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace modcomm::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kConfigError = 2, kNumericalError = 3 };

struct CommonOptions {
  std::string config;
  std::optional<std::string> out_dir;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

struct ValidateOptions {
  int modes = 10;
  int instances = 200;
  std::uint64_t seed = 20240901;
  bool flip_transpose = false;
};

int cmd_compute(const CommonOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommonOptions& opts, bool resume, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_current(const CommonOptions& opts, std::ostream& out, std::ostream& err);

// Parses argv and runs the selected verb.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace modcomm::cli
