#include <iostream>
#include <map>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "splitaztec/cli_io.hpp"
#include "splitaztec/errors.hpp"

int main(int argc, char** argv) {
  using namespace splitaztec;
  CLI::App app{"split two-periodic Aztec diamond: kernels, phases, sampling"};
  app.require_subcommand(1);

  // flags are kept as strings and applied after the config file
  std::map<std::string, std::string> flags;
  std::string config_path;
  auto add_common = [&](CLI::App* sub) {
    for (const char* key : {"N", "alpha", "beta", "seed", "nodes", "grid", "out", "tolerance"})
      sub->add_option_function<std::string>(std::string("--") + key, [&flags, key](const std::string& v) { flags[key] = v; });
    sub->add_option("--config", config_path, "line-based key = value file");
  };
  const std::pair<const char*, const char*> commands[] = {
      {"sample", "exact random tiling: .tiling and .svg"},
      {"kernel", "every kernel entry at N <= 4: .csv"},
      {"phase", "frozen/rough/smooth map and strong coupling: .json and .svg"},
      {"asymptotics", "decay of a correction term over N: .csv and .fit.json"},
      {"verify", "kernel vs enumeration, matrix identities, sampler chi-square"}};
  for (auto [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (std::string(name) == "asymptotics") {
      for (const char* key : {"x", "y", "term"})
        sub->add_option_function<std::string>(std::string("--") + key, [&flags, key](const std::string& v) { flags[key] = v; });
      sub->add_option_function<std::string>("--nlist", [&flags](const std::string& v) { flags["n_list"] = v; },
                                            "comma-separated even N values");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: kind=validation message=" << e.what() << "\n";
    return kExitValidation;
  }

  RunConfig cfg;
  try {
    cfg.command = parse_command(app.get_subcommands().front()->get_name());
    if (!config_path.empty())
      for (const auto& [k, v] : read_config_file(config_path))
        if (k != "command") apply_setting(cfg, k, v);
    for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
  } catch (const ValidationError& e) {
    std::cerr << "error: kind=validation message=" << e.what() << "\n";
    return kExitValidation;
  }
  return run_and_report(cfg, std::cout, std::cerr);
}
