// qbell: command-line driver for the qubit-oscillator scenarios.
//
//   qbell run <config.json> [--out DIR] [--threads N] [--fine-grid]
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "qbell/errors.hpp"
#include "qbell/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quasi-Bell state dynamics of a biased qubit coupled to an oscillator"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  int threads = 0;
  bool fine = false;
  auto* run = app.add_subcommand("run", "Run a scenario described by a JSON config");
  run->add_option("config", config, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (default: QBELL_THREADS or 1)")->check(CLI::PositiveNumber);
  run->add_flag("--fine-grid", fine, "Use the 601x601 phase-space grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads == 0) {
    threads = 1;
    if (const char* env = std::getenv("QBELL_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1) {
        std::cerr << "error: QBELL_THREADS must be a positive integer\n";
        return 2;
      }
      threads = static_cast<int>(v);
    }
  }

  try {
    const qbell::Scenario s = qbell::load_scenario(config);
    const qbell::RunResult r = qbell::run_scenario(s, {threads, fine});
    for (const auto& p : qbell::write_outputs(s, r, out_dir)) std::cout << p.string() << '\n';
  } catch (const qbell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const qbell::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const qbell::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
