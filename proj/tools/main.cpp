#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "infoprice/commands.hpp"
#include "infoprice/error.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw infoprice::ConfigError("--config", "cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-based asset pricing: pricing, simulation and trading experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = infoprice::kDefaultSeed;
  std::size_t paths = 0, trials = 0;
  std::string preset;

  for (const auto& name : infoprice::command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config merged over the preset");
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--paths", paths, "Monte Carlo paths (option, simulate)");
    sub->add_option("--trials", trials, "Trials per decision time (stat-arb)");
    sub->add_option("--preset", preset, "Named parameter set: fig2, fig3 (default fig3)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    infoprice::CommandOptions o;
    o.command = app.get_subcommands().front()->get_name();
    if (!config_path.empty()) o.config_text = read_file(config_path);
    if (!preset.empty()) o.preset = preset;
    o.seed = seed;
    if (paths) o.paths = paths;
    if (trials) o.trials = trials;

    const auto files = infoprice::run_command(o);
    std::filesystem::create_directories(out_dir);
    for (const auto& f : files) {
      const auto path = std::filesystem::path(out_dir) / f.name;
      std::ofstream out(path, std::ios::binary);
      out << f.content;
      if (!out) throw infoprice::ConfigError("--out", "cannot write '" + path.string() + "'");
      std::cout << path.string() << '\n';
    }
    return 0;
  } catch (const infoprice::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const infoprice::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const infoprice::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}
