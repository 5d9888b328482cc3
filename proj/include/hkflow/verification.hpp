#pragma once

#include "hkflow/energy.hpp"
#include "hkflow/jko.hpp"

namespace hkflow {

/// Space-time test function with closed-form derivatives. psi(t, .) must
/// vanish for t >= T_psi; interior-class functions vanish near the spatial
/// boundary, full-class functions may not.
struct TestFunctionST {
  std::string name;
  std::function<double(double, const Vec&)> psi;
  std::function<double(double, const Vec&)> dt_psi;
  std::function<Vec(double, const Vec&)> grad_psi;
  std::function<double(double, const Vec&)> laplacian_psi;
  double T_psi = 0.0;
  bool interior = true;
};

/// Explicit conservative finite-difference reference for
///   du/dt = lambda d/dx [ d/dx L_F(u) + u V' ] - sigma (Lhat_F(u) + V u)
/// on a 1-D grid with zero boundary fluxes. sigma = 0 is allowed (pure
/// diffusion). Aborts if u drops below -1e-12.
Trajectory fd_reference_solve(const GridDensity& u0, const EnergySpec& spec, double lambda,
                              double sigma, double T, double dt_safety = 0.25,
                              int snapshots = 50);

/// |I - int int u dt_psi - int u(0) psi(0)| for the piecewise-constant-in-time
/// trajectory, with
///   I = int int [ lambda <grad L_F(u) + u grad V, grad psi>
///                 + sigma (Lhat_F(u) + V u) psi ].
/// Spatial gradients of L_F(u) by central differences, one-sided at the
/// domain boundary and next to vacuum cells.
double weak_form_residual(const Trajectory& traj, const TestFunctionST& psi,
                          const EnergySpec& spec, const Params& params, const GridDensity& u0);

/// Battery of C^2 space-time test functions: time polynomials cut off at
/// T_psi times interior bumps / cosine modes (interior class) and functions
/// that stay nonzero at the boundary (full class). 1-D domains.
std::vector<TestFunctionST> make_psi_battery(const Box& box, double T_psi);

/// Slope lower-bound probe for F(s) = -sqrt(s) + s^2, V = 0: the maximal
/// ratio (-E(u_N)) / HK(u_N, 0) over u_N = 1/N, N in {10,...,1e6}, against
/// the closed-form bound sqrt(Sigma vol(Omega))/2.
struct SlopeBound {
  double estimate = 0.0;
  double bound = 0.0;
};

SlopeBound slope_lower_bound_check(const Params& params, const Box& domain);

}  // namespace hkflow
