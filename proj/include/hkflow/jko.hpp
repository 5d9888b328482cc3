#pragma once

#include "hkflow/energy.hpp"
#include "hkflow/hk_solver.hpp"

namespace hkflow {

struct SchemeConfig {
  double tau = 0.01;
  double T = 0.1;
  SolverConfig solver;
  double prox_tol = 1e-8;     // sup-norm rel change of the density block
  int outer_max_iters = 200000;
  int record_every = 1;

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("SchemeConfig: tau must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("SchemeConfig: T must be nonnegative");
    if (!(prox_tol > 0.0)) throw std::invalid_argument("SchemeConfig: prox_tol must be positive");
    if (record_every <= 0) throw std::invalid_argument("SchemeConfig: record_every >= 1");
    solver.validate();
  }
};

/// Discrete solution with per-step diagnostics. densities holds the recorded
/// snapshots (always including the initial and final states); the step_*
/// series cover every step.
struct Trajectory {
  std::vector<double> times;
  std::vector<GridDensity> densities;

  std::vector<double> step_time;
  std::vector<double> step_energy;
  std::vector<double> step_mass;
  std::vector<double> step_hk2;
  std::vector<double> metric_derivative;  // sqrt(step_hk2)/tau
  std::vector<double> cert_slack;         // E(prev) - E(next) - step_hk2/(2 tau)
  std::vector<int> clamp_events;

  bool completed = true;
  std::string error;
};

struct JkoStepResult {
  GridDensity next;
  double step_hk2 = 0.0;
  HKSolution sol;  // coupling between next (first) and prev (second)
  int sweeps = 0;
  double cert_slack = 0.0;
};

/// One minimizing-movement step: minimizes E(.) + (1/2 tau) HK(., prev)^2
/// over grid densities by alternating scaling updates with the per-cell prox.
JkoStepResult jko_step(const GridDensity& prev, const EnergySpec& spec, const Params& params,
                       const SchemeConfig& cfg);

/// Runs ceil(T/tau) steps (zero steps when T < tau). A step failure aborts
/// with the partial trajectory and the error recorded.
Trajectory run_scheme(const GridDensity& u0, const EnergySpec& spec, const Params& params,
                      const SchemeConfig& cfg);

struct DissipationReport {
  double sum_step_hk2 = 0.0;        // sum of HK(mu_n, mu_{n-1})^2
  double dissipation_rhs = 0.0;     // 2 tau (E(mu_0) + A + B HK(mu_N, 0)^2)
  bool dissipation_holds = false;
  double sup_hk2_to_null = 0.0;     // running sup of (4/Sigma) mass
  double metric_derivative_sum = 0.0;  // int |mu'|^2 dt
  double energy_drop = 0.0;         // E(mu_0) - E(mu_N)
  double energy_inequality_rhs = 0.0;  // 1/2 int |mu'|^2 dt
  bool energy_inequality_holds = false;
  EnergyBoundConstants constants;
};

DissipationReport dissipation_diagnostics(const Trajectory& traj, const EnergySpec& spec,
                                          const Params& params, double tau);

/// Derivative-free ground truth for a single step on grids with <= 4 cells:
/// cyclic golden-section search over the cell values with the tiny
/// entropy-transport oracle as inner evaluation.
GridDensity jko_step_oracle(const GridDensity& prev, const EnergySpec& spec,
                            const Params& params, double tau);

}  // namespace hkflow
