#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "levyspde/error.hpp"

int main(int argc, char** argv) {
  using namespace levyspde;
  CLI::App app{"Spectral and Monte Carlo experiments for Lévy-driven SPDEs"};
  app.require_subcommand(1, 1);
  cli::Options opt;
  std::string config;
  std::uint64_t seed = 0;
  app.add_option("--config", config, "experiment config (key = value)");
  app.add_option("--out", opt.out_dir, "output directory");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--strict", opt.strict, "treat inconclusive results as failures");
  app.fallthrough();
  for (const auto& name : cli::subcommands()) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (*seed_opt) opt.seed = seed;
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    const auto cfg = config.empty() ? cli::Config::parse("", "<empty>") : cli::Config::load(config);
    const auto outcome = cli::run(sub, cfg, opt);
    const int code = cli::exit_code(outcome, opt.strict);
    std::cout << sub << ": " << (code == 0 ? "pass" : outcome == cli::Outcome::fail ? "fail" : "inconclusive")
              << " (" << opt.out_dir << ")\n";
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::inconclusive) return cli::exit_code(cli::Outcome::inconclusive, opt.strict);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
