#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace infoprice {

inline constexpr std::uint64_t kDefaultSeed = 12345;

/// One command invocation. The effective configuration is the named preset
/// (fig3 when none is given) with the user's document merged over it, then
/// the --paths and --trials overrides.
struct CommandOptions {
  std::string command;      // price | simulate | option | mutual-info | stat-arb | market-sim
  std::string config_text;  // JSON; empty for none
  std::optional<std::string> preset;
  std::uint64_t seed = kDefaultSeed;
  std::optional<std::size_t> paths;
  std::optional<std::size_t> trials;
};

struct CsvFile {
  std::string name;
  std::string content;
};

std::vector<std::string> command_names();
std::vector<std::string> preset_names();

/// Runs a command and returns its CSV files. Each file ends with
/// "# seed=S,version=V,config_hash=H", H the FNV-1a hash of the effective
/// configuration. Throws ConfigError for bad input and other Errors for
/// numerical failures.
std::vector<CsvFile> run_command(const CommandOptions& options);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace infoprice
