// samples the profile described by an experiment config into a two-column
// (x, m) file, ready to be fed back through profile.kind = "file"
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mch/config.hpp"
#include "mch/runio.hpp"

int main(int argc, char** argv) {
  CLI::App app{"sample a config's initial profile to a two-column file"};
  std::string config_path, out_path;
  app.add_option("-c,--config", config_path, "experiment config (json)")->required();
  app.add_option("-o,--out", out_path, "output file")->required();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    const mch::ExperimentConfig cfg = mch::load_config(config_path);
    const mch::InitialProfile pr =
        mch::profile_from_cfg(cfg.profile, cfg.engine);
    mch::write_profile_file(out_path, pr.x_grid(), pr.m_samples());
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
  } catch (const mch::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const mch::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const mch::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 4;
  }
}
