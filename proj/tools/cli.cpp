#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

namespace jacobi::cli {

namespace {

struct Subcommand {
  const char* name;
  const char* help;
  int (*fn)(const RunConfig&);
};

const Subcommand subcommands[] = {
    {"spectrum", "g, w^L and eigenfunction tables", cmd_spectrum},
    {"boundstate", "negative eigenvalue, residuals and a q sweep", cmd_boundstate},
    {"propagate", "kernel table with oracle and unitarity checks", cmd_propagate},
    {"decay", "weighted decay curves, fits and bound checks", cmd_decay},
    {"verify", "quick invariant suite", cmd_verify},
};

const std::map<std::string, std::string> flag_help = {
    {"kind", "operator: free | perturbed"},
    {"q", "coupling at site 0"},
    {"kappa", "weight shift"},
    {"tau", "weight exponent"},
    {"tmin", "first time sample"},
    {"tmax", "last time sample"},
    {"tsamples", "number of time samples"},
    {"xmax", "lattice window"},
    {"N", "truncation size (0: adaptive where supported)"},
    {"out", "output directory"},
    {"seed", "seed for random test vectors"},
    {"threads", "worker threads (0: hardware)"},
    {"lmin", "smallest lambda"},
    {"lmax", "largest lambda"},
    {"lsamples", "number of lambda samples"},
    {"qsweep", "comma separated q values"},
    {"constant", "constant of the free kernel bound"},
    {"inject_fault", "none | weight"},
};

std::string flag_name(const std::string& key) {
  std::string f = "--" + key;
  for (auto& c : f)
    if (c == '_') c = '-';
  return f;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Jacobi operator spectral and dispersive estimates"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "jacobi 0.1.0");

  struct Bound {
    CLI::App* app;
    RunConfig defaults;
    std::map<std::string, std::string> cli;
    std::string config_file;
  };
  std::vector<Bound> bound;
  bound.reserve(std::size(subcommands));
  for (const auto& s : subcommands) {
    bound.push_back({app.add_subcommand(s.name, s.help), default_config(s.name), {}, {}});
    auto& b = bound.back();
    b.app->add_option("--config", b.config_file, "key = value file (flags override it)");
    for (const auto& [key, value] : b.defaults.values()) {
      auto it = flag_help.find(key);
      b.app->add_option(flag_name(key), b.cli[key], it == flag_help.end() ? key : it->second)
          ->default_str(value);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_pass : exit_usage;
  }

  for (std::size_t i = 0; i < bound.size(); ++i) {
    auto& b = bound[i];
    if (!b.app->parsed()) continue;
    try {
      RunConfig cfg = b.defaults;
      if (!b.config_file.empty()) cfg.merge_file(b.config_file);
      for (const auto& [key, value] : b.cli)
        if (b.app->count(flag_name(key)) > 0) cfg.set(key, value);
      return subcommands[i].fn(cfg);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return exit_usage;
    } catch (const std::invalid_argument& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return exit_usage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return exit_fail;
    }
  }
  return exit_usage;
}

}  // namespace jacobi::cli
