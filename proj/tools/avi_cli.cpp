#include <CLI11.hpp>
#include <iostream>

#include "avi/csv.hpp"
#include "avi/experiment_config.hpp"
#include "avi/version.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace avi::cli;
  CLI::App app{"Anytime-valid inference: stream monitoring and Monte Carlo experiments", "avi"};
  app.set_version_flag("--version", std::string(avi::version_string()));
  app.require_subcommand(1);

  Action action;
  add_monitor(app, action);
  add_experiment(app, action);
  add_lab(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return action ? action() : kExitUsage;
  } catch (const avi::ConfigError& e) {
    std::cerr << "avi: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "avi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const avi::ParseError& e) {
    std::cerr << "avi: parse error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "avi: " << e.what() << '\n';
    return kExitFailure;
  }
}
