#include <iostream>

#include "common.hpp"
#include "lexshift/cli.hpp"
#include "lexshift/error.hpp"
#include "lexshift/kernels.hpp"

namespace lexshift {

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"lexshift: replacement-based contextualization analysis and lexical semantic change scoring"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI config file; command-line flags override it");
  app.set_version_flag("--version", "lexshift 0.1.0");

  cli::register_replace(app);
  cli::register_synth(app);
  cli::register_sed(app);
  cli::register_lsc(app);
  cli::register_wic(app);
  cli::register_correlate(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace lexshift
