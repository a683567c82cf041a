// irslab command-line front end. Exit status: 0 pass, 1 numerical failure,
// 2 usage or configuration error.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"
#include "irslab/error.hpp"

using irslab::cli::Command;
using irslab::cli::ConfigError;
using irslab::cli::ExperimentConfig;

namespace {

struct Invocation {
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::optional<std::string>> flags;
  bool print_config = false;
};

bool any_command_knows(const std::string& key) {
  for (const Command& cmd : irslab::cli::commands()) {
    for (const auto& k : cmd.keys) {
      if (k.key == key) return true;
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"irslab: Fuchsian groups, Dirichlet domains and invariant random subgroups"};
  app.require_subcommand(1);
  std::map<std::string, Invocation> invocations;
  std::map<std::string, CLI::App*> subcommands;
  for (const Command& cmd : irslab::cli::commands()) {
    Invocation& inv = invocations[cmd.name];
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.summary);
    sub->add_option("--config", inv.config_path, "key = value config file");
    sub->add_option("--set", inv.sets, "override as key=value (repeatable)");
    sub->add_flag("--print-config", inv.print_config, "print the resolved configuration and exit");
    for (const auto& key : cmd.keys) {
      std::string help = key.help;
      if (!key.fallback.empty()) help += " [" + key.fallback + "]";
      inv.flags[key.key];
      sub->add_option("--" + key.key, inv.flags[key.key], help);
    }
    subcommands[cmd.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : irslab::cli::kExitUsage;
  }

  for (const Command& cmd : irslab::cli::commands()) {
    if (!subcommands[cmd.name]->parsed()) continue;
    const Invocation& inv = invocations[cmd.name];
    try {
      ExperimentConfig config(cmd.name, cmd.keys);
      if (!inv.config_path.empty()) {
        const irslab::cli::ConfigFile file = irslab::cli::read_config_file(inv.config_path, cmd.name);
        // shared keys go to the commands that take them; a key no command takes is an error
        for (const auto& [key, value] : file.global) {
          if (config.knows(key)) {
            config.set(key, value);
          } else if (!any_command_knows(key)) {
            throw ConfigError("unknown key '" + key + "' in " + inv.config_path);
          }
        }
        config.merge(file.section);
      }
      for (const std::string& s : inv.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        config.set(s.substr(0, eq), s.substr(eq + 1));
      }
      for (const auto& [key, value] : inv.flags) {
        if (value) config.set(key, *value);
      }
      if (inv.print_config) {
        std::cout << config.dump();
        return irslab::cli::kExitPass;
      }
      return cmd.run(config, std::cout, std::cerr);
    } catch (const ConfigError& e) {
      std::cerr << "irslab " << cmd.name << ": " << e.what() << '\n';
      return irslab::cli::kExitUsage;
    } catch (const irslab::Error& e) {
      std::cerr << "irslab " << cmd.name << ": " << e.what() << '\n';
      return e.kind() == irslab::ErrorKind::Parse ? irslab::cli::kExitUsage : irslab::cli::kExitFail;
    }
  }
  return irslab::cli::kExitUsage;
}
