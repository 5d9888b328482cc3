#pragma once

#include "hkflow/hk_solver.hpp"

namespace hkflow {

/// Twice continuously differentiable test function with certified bound
/// c_phi >= sup(|phi| + |grad phi| + op-norm of the Hessian).
struct TestFunction {
  std::function<double(const Vec&)> phi;
  std::function<Vec(const Vec&)> grad_phi;
  double hess_bound = 0.0;
  double c_phi = 0.0;
  bool compact_interior = false;
};

/// Checks c_phi >= sup(|phi|+|grad|+hess_bound) by sampling; throws on failure.
void certify_c_phi(const TestFunction& phi, const Box& box, int samples_per_axis = 64);

/// Plan-form directional expression
///   (4/Sigma) sum_ij gamma_ij [ -rho0_i R(x_i)
///     + sqrt(rho0_i rho*_j) R(x_i) cos(ell_ij)
///     + sqrt(Sigma/4Lambda) sqrt(rho0_i rho*_j) <S(x_i, y_j), v(x_i)> ].
double frak_F(const HKSolution& sol, const PerturbationField& field, const Params& params);

/// Same expression evaluated on a cone plan with r1, r2 in place of the
/// square-rooted densities.
double frak_F_cone(const ConePlan& beta, const PerturbationField& field, const Params& params);

/// frak_F minus (4/Sigma) int R d(singular part of the first input): an
/// element of the Frechet subdifferential of h -> -1/2 HK(nu_h, mu)^2 at 0.
double superdiff_element(const HKSolution& sol, const PerturbationField& field,
                         const Params& params);

/// Left side and right side of the quantitative comparison between the
/// (4/Sigma)-scaled mass difference of phi and the subdifferential expression
/// with v = (4 Lambda/Sigma) grad phi, R = 2 phi:
///   lhs = | (4/Sigma)(int phi dmu - int phi dnu0)
///           - (frak_F_phi - (8/Sigma) int phi d(nu0 - h alpha0)) |
///   bound = c_phi (6 + 16 Lambda/Sigma) hk2.
struct ConnectionGap {
  double lhs = 0.0;
  double bound = 0.0;
};

ConnectionGap connection_gap(const HKSolution& sol, const TestFunction& phi,
                             const DiscreteMeasure& mu, const DiscreteMeasure& nu0,
                             const Params& params);

}  // namespace hkflow
