#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "trisol/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"trisol: constants, hypothesis checks and critical points for a frozen-time singular problem"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  std::string out;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", config, "JSON run configuration");
    if (needs_config) opt->required();
    sub->add_option("--seed", seed, "RNG seed (overrides solver.seed)");
    sub->add_option("--out", out, "output directory");
  };
  add_common(app.add_subcommand("constants", "embedding constants, kappa, K1, K2"), true);
  add_common(app.add_subcommand("check", "sample assumptions (1)-(4) and the admissible interval"), true);
  add_common(app.add_subcommand("solve", "compute critical points at each t"), true);
  add_common(app.add_subcommand("reproduce", "rerun the built-in ball example"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : trisol::cli::kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  std::optional<std::string> config_path;
  if (sub->count("--config")) config_path = config;
  std::optional<std::uint64_t> seed_opt;
  if (sub->count("--seed")) seed_opt = seed;
  std::optional<std::string> out_opt;
  if (sub->count("--out")) out_opt = out;

  return trisol::cli::run_command(sub->get_name(), config_path, seed_opt, out_opt, std::cout, std::cerr);
}
