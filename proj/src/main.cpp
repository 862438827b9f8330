#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mch/config.hpp"
#include "mch/runio.hpp"

int main(int argc, char** argv) {
  CLI::App app{"inverse-scattering laboratory for a cubic peakon equation"};
  app.require_subcommand(0, 0);

  std::string verb, config_path, outdir;
  std::uint64_t seed = 0;
  bool quiet = false;
  app.add_option("verb", verb,
                 "scatter | partition | solitons | predict | evolve | compare | sectors")
      ->required();
  app.add_option("-c,--config", config_path, "experiment config (json)")->required();
  auto* out_opt = app.add_option("-o,--out", outdir, "override output directory");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    mch::ExperimentConfig cfg = mch::load_config(config_path);
    if (out_opt->count() > 0) cfg.outdir = outdir;
    if (seed_opt->count() > 0) cfg.seed = seed;
    if (quiet) cfg.quiet = true;
    return mch::run_command(verb, cfg);
  } catch (const mch::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const mch::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const mch::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
