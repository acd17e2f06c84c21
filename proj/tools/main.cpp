#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cylspec/config.hpp"
#include "cylspec/error.hpp"
#include "cylspec/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> formats;
  unsigned long long seed = 0;
};

void attach_common(CLI::App* cmd, CommonFlags& flags, bool* seed_given) {
  cmd->add_option("--config", flags.config_path, "run configuration (TOML)")
      ->required();
  cmd->add_option("--out", flags.out_dir, "output directory override");
  cmd->add_option("--format", flags.formats,
                  "artifact formats (csv, json, svg, mtx); overrides the config");
  cmd->add_option("--seed", flags.seed, "solver seed override")
      ->each([seed_given](const std::string&) { *seed_given = true; });
}

int exit_code_for(cylspec::ErrorKind kind) {
  switch (kind) {
    case cylspec::ErrorKind::convergence_failure:
      return 3;
    case cylspec::ErrorKind::hypothesis_failure:
      return 4;
    default:
      return 2;  // invalid input, configuration, or I/O
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral toolkit for advection-diffusion operators on truncated cylinders"};
  app.require_subcommand(1);

  CommonFlags flags;
  bool seed_given = false;
  std::vector<std::pair<CLI::App*, std::function<void(const cylspec::RunConfig&)>>> table;
  auto add = [&](const char* name, const char* help,
                 void (*fn)(const cylspec::RunConfig&)) {
    CLI::App* cmd = app.add_subcommand(name, help);
    attach_common(cmd, flags, &seed_given);
    table.emplace_back(cmd, fn);
  };
  add("wave", "sample the standing wave or traveling front and its residual",
      cylspec::cmd_wave);
  add("essential", "dispersion curves and the essential-spectrum supremum",
      cylspec::cmd_essential);
  add("eigs", "shift-invert eigenvalues and the realness report",
      cylspec::cmd_eigs);
  add("decay", "eigenfunction decay fit and the integral-inequality check",
      cylspec::cmd_decay);
  add("dispersion-check",
      "eigenvalues of the periodic constant-coefficient cell against the "
      "exact discrete dispersion set",
      cylspec::cmd_dispersion_check);
  add("hypotheses", "tail hypotheses on the potential", cylspec::cmd_hypotheses);
  add("report", "full deterministic report with plots", cylspec::cmd_report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    cylspec::RunConfig cfg = cylspec::load_config(flags.config_path);
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (!flags.formats.empty()) {
      for (const std::string& f : flags.formats)
        if (f != "csv" && f != "json" && f != "svg" && f != "mtx")
          throw cylspec::Error(cylspec::ErrorKind::config_error,
                               "--format entries must be csv, json, svg, or mtx");
      cfg.formats = flags.formats;
    }
    if (seed_given) cfg.seed = flags.seed;
    for (auto& [cmd, fn] : table)
      if (cmd->parsed()) fn(cfg);
    return 0;
  } catch (const cylspec::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
