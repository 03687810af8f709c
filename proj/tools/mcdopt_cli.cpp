// mcdopt: run experiment grids, regenerate reports, export the suite manifest.
//
//   mcdopt run --config grid.cfg
//   mcdopt report --in results/
//   mcdopt suite --dim 1000 --seed 7 --manifest suite.json
//
// Exit codes: 0 success, 1 runtime failure, 2 config error, 3 budget
// misconfiguration.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "mcdopt/benchfns.hpp"
#include "mcdopt/format.hpp"
#include "mcdopt/harness.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kBudgetError = 3;

void print_summary(const mcdopt::harness::ExperimentReport& rep) {
  using mcdopt::format_double;
  using mcdopt::harness::to_string;
  for (const auto& c : rep.comparisons) {
    std::cout << "mcd vs " << to_string(c.baseline) << " @ max_nfe=" << c.max_nfe << '\n';
    for (const auto& f : c.functions) {
      std::cout << "  " << f.function << "  mcd=" << format_double(f.mcd_error)
                << "  " << to_string(c.baseline) << "=" << format_double(f.baseline_error)
                << "  iar=" << format_double(f.iar.value) << (f.iar.mcd_better() ? " *" : "") << '\n';
    }
    std::cout << "  w/t/l = " << c.wtl.wins << '/' << c.wtl.ties << '/' << c.wtl.losses << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modified coordinate descent experiments"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment grid from a config file");
  run->add_option("--config", config_path, "key = value config file")->required();

  std::string in_dir;
  auto* report = app.add_subcommand("report", "Rebuild summary.json and plots from result CSVs");
  report->add_option("--in", in_dir, "Results directory")->required();

  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::string manifest;
  auto* suite = app.add_subcommand("suite", "Export the benchmark suite manifest as JSON");
  suite->add_option("--dim", dim, "Problem dimension")->required();
  suite->add_option("--seed", seed, "Suite seed")->required();
  suite->add_option("--manifest", manifest, "Output path ('-' for stdout)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      auto cfg = mcdopt::harness::load_config(config_path);
      mcdopt::harness::apply_env_overrides(cfg);
      const auto rep = mcdopt::harness::run_grid(cfg);
      print_summary(rep);
      std::cout << "wrote " << cfg.output_dir.string() << '\n';
    } else if (*report) {
      const auto rep = mcdopt::harness::report_dir(in_dir);
      print_summary(rep);
    } else if (*suite) {
      const auto fns = mcdopt::bench::make_suite(dim, seed);
      const auto json = mcdopt::bench::suite_manifest_json(fns, seed);
      if (manifest == "-") {
        std::cout << json;
      } else {
        std::ofstream out(manifest, std::ios::binary);
        if (!out) throw mcdopt::Error("cannot write " + manifest);
        out << json;
      }
    }
  } catch (const mcdopt::InsufficientBudget& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return kBudgetError;
  } catch (const mcdopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const mcdopt::DimensionMismatch& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
