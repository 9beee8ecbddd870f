#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace splitaztec {

inline constexpr const char* kVersion = "0.1.0";

enum class Command { Sample, Kernel, Phase, Asymptotics, Verify };

const char* command_name(Command c);
Command parse_command(const std::string& s);

struct RunConfig {
  Command command = Command::Verify;
  int N = 2;
  double alpha = 0.5, beta = 0.5;
  std::uint64_t seed = 1;
  int nodes = 0;  // 0: adaptive quadrature
  int grid = 64;
  std::string out = "out";
  double tolerance = 1e-8;
  // asymptotics
  double x = 0.25, y = -0.25;
  std::string term = "I22";
  std::vector<int> n_list{8, 16, 24, 32, 40, 48, 56, 64};
};

// line-based "key = value"; '#' starts a comment
std::map<std::string, std::string> read_config_file(const std::string& path);
void apply_setting(RunConfig& c, const std::string& key, const std::string& value);
void validate(const RunConfig& c);

std::string canonical_config(const RunConfig& c);
std::uint64_t fnv1a64(const std::string& s);
std::string metadata_json(const RunConfig& c);

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitNumerical = 3 };

struct RunResult {
  int exit_code = kExitOk;
  std::vector<std::string> files;
  std::string report;
};

// writes the artifacts and returns the exit status; errors surface as exceptions
RunResult run(const RunConfig& c);

// run() with errors mapped to exit codes and a one-line "error: kind=... message=..." on err
int run_and_report(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace splitaztec
