// repp-lab: command-line entry point.
//
//   repp-lab <simulate|limit-sample|compare|records|nu|report>
//            [--config PATH] [--seed U64] [--out DIR] [--suite NAME] [--workers N]
//
// Exit codes: 0 pass, 1 statistical failure, 2 usage or configuration
// error, 3 numerical or resolution error.
#include "repp/commands.hpp"
#include "repp/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Rare events point processes: simulation and goodness-of-fit laboratory", "repp-lab"};
  app.require_subcommand(1);
  repp::CommandOptions opt;
  std::string out = ".";
  std::string config;
  std::uint64_t seed = 0;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"simulate", "Simulate orbits and write empirical point processes"},
      {"limit-sample", "Sample a limit law (--suite figure1 for the two reference panels)"},
      {"compare", "Compare a simulate artifact with a limit law (--suite acceptance runs the criteria)"},
      {"records", "Record counts against the log-Poisson law"},
      {"nu", "Evaluate the outer measure with a Monte-Carlo check"},
      {"report", "Aggregate the reports below --out into summary.json"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Configuration file");
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--out", out, "Output directory")->capture_default_str();
    sub->add_option("--suite", opt.suite, "Named suite");
    sub->add_option("--workers", opt.workers, "Worker threads (0 = all cores)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  const auto* sub = app.get_subcommands().front();
  if (!config.empty()) opt.config_path = config;
  if (sub->count("--seed") > 0) opt.seed = seed;
  opt.out_dir = out;
  try {
    const auto outcome = repp::run_command(name, opt, std::cout);
    std::cout << (outcome.report.value("pass", false) ? "pass" : "FAIL") << ": " << (opt.out_dir / "").string()
              << (name == "report" ? "summary.json" : "report.json") << '\n';
    return outcome.exit_code;
  } catch (const repp::Error& e) {
    std::cerr << "repp-lab " << name << ": " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "repp-lab " << name << ": " << e.what() << '\n';
    return 3;
  }
}
