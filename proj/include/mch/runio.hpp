#pragma once
#include <string>
#include <vector>

#include "mch/config.hpp"
#include "mch/pde.hpp"
#include "mch/scattering.hpp"
#include "mch/soliton.hpp"

namespace mch {

// two-column profile files (x, m); '#' lines are comments
InitialProfile read_profile_file(const std::string& path, double trunc_tol);
void write_profile_file(const std::string& path, const std::vector<double>& x,
                        const std::vector<double>& m);

// m0 profile from the config; soliton generators are sampled through the
// engine at engine.t and converted to m = u - u_xx spectrally
InitialProfile profile_from_cfg(const ProfileCfg& pcfg, const EngineCfg& ecfg);

// engine field u(x, t) of the configured generators on an arbitrary grid
std::vector<double> engine_field(const std::vector<Generator>& gens, double t,
                                 const std::vector<double>& x,
                                 const EngineCfg& ecfg);

void cmd_scatter(const ExperimentConfig& cfg);
void cmd_partition(const ExperimentConfig& cfg);
void cmd_solitons(const ExperimentConfig& cfg);
void cmd_predict(const ExperimentConfig& cfg);
void cmd_evolve(const ExperimentConfig& cfg);
void cmd_compare(const ExperimentConfig& cfg);
void cmd_sectors(const ExperimentConfig& cfg);

// dispatch; throws ConfigError for an unknown verb
int run_command(const std::string& verb, const ExperimentConfig& cfg);

}  // namespace mch
