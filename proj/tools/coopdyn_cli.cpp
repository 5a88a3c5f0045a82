#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coopdyn/coopdyn.h"

int main(int argc, char** argv) {
  CLI::App app{"Random complex dynamics: minimal sets, transition operators and Takagi-type functions"};
  app.set_version_flag("--version", std::string(coopdyn_version()));

  std::string command, scenario, out = "out";
  std::uint64_t seed = 0;
  auto* names = coopdyn_command_names();
  std::vector<std::string> choices;
  for (auto p = names; *p; ++p) choices.emplace_back(*p);

  app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(choices));
  app.add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Seed override (unsigned 64-bit)");
  CLI11_PARSE(app, argc, argv);

  int exit_code = 1;
  const coopdyn_status st =
      coopdyn_run_command(command.c_str(), scenario.c_str(), out.c_str(), seed_opt->count() > 0, seed, &exit_code);
  if (st != COOPDYN_OK) {
    std::cerr << "coopdyn: " << coopdyn_last_error() << "\n";
    return 1;
  }
  if (exit_code == 1) {
    std::cerr << "coopdyn: " << coopdyn_last_error() << "\n";
  } else {
    std::cout << out << "/report.json\n";
    if (exit_code == 2) std::cerr << "coopdyn: verdict inconclusive\n";
  }
  return exit_code;
}
