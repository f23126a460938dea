// Command-line front end: scenario runner, acceptance selftest and the
// builtin-net catalog.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "ultraglab/ultraglab.hpp"

namespace fs = std::filesystem;
using namespace ultraglab;

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_dir, int threads) {
  json doc;
  try {
    std::ifstream is(scenario_path);
    if (!is) {
      std::cerr << "cannot open scenario: " << scenario_path << "\n";
      return 2;
    }
    doc = json::parse(is);
  } catch (const std::exception& e) {
    std::cerr << "scenario parse error: " << e.what() << "\n";
    return 2;
  }

  const auto rr = run_scenario_doc(doc, threads);
  if (rr.exit_code == 2) {
    std::cerr << "scenario validation failed: "
              << rr.report.value("error", std::string("unknown")) << "\n";
    return 2;
  }

  fs::create_directories(out_dir);
  {
    std::ofstream os(fs::path(out_dir) / "report.json", std::ios::binary);
    os << rr.report.dump(2) << "\n";
  }
  {
    std::ofstream os(fs::path(out_dir) / "report.meta.json", std::ios::binary);
    os << rr.meta.dump(2) << "\n";
  }
  {
    std::ofstream os(fs::path(out_dir) / "fits.csv", std::ios::binary);
    os << rr.fits_csv;
  }
  if (!rr.spectra_csv.empty()) {
    std::ofstream os(fs::path(out_dir) / "spectra.csv", std::ios::binary);
    os << rr.spectra_csv;
  }
  if (rr.exit_code == 3) std::cerr << "some analyses failed; see report.json\n";
  return rr.exit_code;
}

int cmd_selftest(std::uint64_t seed) {
  const auto results = run_all_criteria(seed);
  return print_selftest(results, std::cout);
}

int cmd_list_builtins() {
  for (const auto& [name, desc] : builtin_catalog()) std::cout << name << "  -  " << desc << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ultraglab: numerics for the algebra of Gevrey generalized functions"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  int threads = 1;
  auto* run = app.add_subcommand("run", "run a scenario file and write reports");
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "worker threads for independent analyses");

  std::uint64_t seed = 20240811;
  auto* st = app.add_subcommand("selftest", "run the acceptance battery");
  st->add_option("--seed", seed, "seed for the synthetic noise battery");

  app.add_subcommand("list-builtins", "print the builtin net catalog");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(scenario_path, out_dir, threads);
    if (app.got_subcommand("selftest")) return cmd_selftest(seed);
    if (app.got_subcommand("list-builtins")) return cmd_list_builtins();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
