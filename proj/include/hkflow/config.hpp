#pragma once

#include <string>

#include "hkflow/energy.hpp"
#include "hkflow/jko.hpp"

namespace hkflow {

/// Parsed run configuration shared by the jko-run, verify and subdiff-check
/// subcommands.
struct RunConfig {
  Box domain;
  std::vector<int> dims;
  Params params;
  EnergySpec energy;
  SchemeConfig scheme;
  GridDensity initial;
  unsigned long seed = 1;
  std::string out_dir;

  // verify battery
  std::vector<double> verify_taus;
  double psi_horizon = 0.0;  // defaults to 0.8 * scheme.T

  // subdiff battery
  int subdiff_instances = 10;
  std::vector<double> subdiff_h;
  int margin_cells = 2;  // interior-support margin for perturbation fields
};

/// Loads and validates a JSON run configuration. Throws std::invalid_argument
/// or std::runtime_error with a message on schema violations.
RunConfig load_run_config(const std::string& path);

}  // namespace hkflow
