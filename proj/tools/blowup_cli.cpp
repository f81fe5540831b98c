// Command-line front end: solve, oracle, verify, compare, conditions.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "blowup/config.hpp"
#include "blowup/error.hpp"
#include "blowup/pipelines.hpp"

namespace {

struct Options {
  std::string config;
  std::string out;
  int refine = 0;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config, "key = value configuration file")->required();
  sub->add_option("--out", opt.out, "output directory (default: output.dir or ./out)");
  sub->add_option("--refine", opt.refine, "halve dr and dt this many times")
      ->check(CLI::NonNegativeNumber);
}

int run(const std::string& command, const Options& opt) {
  auto file = blowup::KeyValueFile::load(opt.config);
  auto cfg = blowup::make_run_config(file, opt.refine);
  std::filesystem::path out = !opt.out.empty()            ? std::filesystem::path(opt.out)
                              : !cfg.output_dir.empty()   ? cfg.output_dir
                                                          : std::filesystem::path("out");
  blowup::PipelineResult res;
  if (command == "solve")
    res = blowup::run_solve(cfg, out);
  else if (command == "oracle")
    res = blowup::run_oracle(cfg, out);
  else if (command == "verify")
    res = blowup::run_verify(cfg, out);
  else if (command == "compare")
    res = blowup::run_compare(cfg, out);
  else
    res = blowup::run_conditions(cfg, out);

  for (const auto& [k, v] : res.report)
    if (k.rfind("check.", 0) != 0) std::cout << k << " = " << v << '\n';
  for (const auto& c : res.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << (c.expected ? "" : " (info)")
              << ": " << c.detail << '\n';
  return res.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial blow-up solver and estimate checks"};
  app.require_subcommand(1);
  Options opt;
  const char* names[] = {"solve", "oracle", "verify", "compare", "conditions"};
  const char* help[] = {"run the finite-difference solver and write trace and snapshots",
                        "blow-up time and profiles from the linearizing transform",
                        "run every check for the configured problem",
                        "compare runs with and without the gradient term",
                        "evaluate the structural conditions on a grid"};
  for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(names[i], help[i]), opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    return run(app.get_subcommands().front()->get_name(), opt);
  } catch (const blowup::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == blowup::Errc::Config || e.code() == blowup::Errc::Io) return 1;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
