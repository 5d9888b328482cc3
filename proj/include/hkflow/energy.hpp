#pragma once

#include <functional>

#include "hkflow/measures.hpp"

namespace hkflow {

enum class EnergyFamily { LogEntropy, PowerLaw };

/// Internal energy density F with the derived quantities used by the scheme:
/// L(s) = s F'(s) - F(s) (with L(0) = -F(0)) and Lhat(s) = s F'(s).
struct InternalEnergy {
  EnergyFamily family = EnergyFamily::LogEntropy;
  double c1 = 1.0;
  double c2 = 0.0;
  double p = 2.0;
  double q = 0.5;

  double F(double s) const;
  double Fp(double s) const;   // F'(s), s > 0
  double Fpp(double s) const;  // F''(s), s > 0
  double L(double s) const;
  double Lhat(double s) const;

  static InternalEnergy log_entropy(double c1);
  static InternalEnergy power_law(double c1, double c2, double p, double q);
};

/// Internal energy plus potential V with sampled bound estimates.
struct EnergySpec {
  InternalEnergy F;
  std::function<double(const Vec&)> V;
  std::function<Vec(const Vec&)> grad_V;
  double lip_V = 0.0;
  double sup_V = 0.0;
  double sup_grad_V = 0.0;

  EnergySpec();
  explicit EnergySpec(InternalEnergy f);
};

/// Refreshes the V bound fields by sampling on the grid's cell centers.
void certify_V_bounds(EnergySpec& spec, const GridDensity& grid);

double F_eval(const EnergySpec& spec, double s);
double F_prime(const EnergySpec& spec, double s);  // throws for s <= 0
double L_F(const EnergySpec& spec, double s);
double L_hat_F(const EnergySpec& spec, double s);

/// Numeric inverse of the strictly increasing L_F by bisection.
double L_F_inverse(const EnergySpec& spec, double target);

/// Midpoint-rule energy: sum of (F(u) + V u) over cells times cell volume.
double energy_of(const GridDensity& u, const EnergySpec& spec);

/// Unique minimizer over s >= 0 of
///   kappa (g log(g/s) - g + s) + F(s) + V_x s,
/// by safeguarded Newton with bisection fallback on the monotone first-order
/// condition kappa (1 - g/s) + F'(s) + V_x = 0.
double jko_cell_prox(double g, double kappa, double V_x, const EnergySpec& spec);

/// Directional derivative of the energy along (v, R):
///   int [-L_F(u0) tr Dv + 2 Lhat_F(u0) R] dx + int [<grad V, v> + 2 V R] u0 dx.
/// Requires an interior-supported v.
double dF_directional(const GridDensity& u0, const PerturbationField& field,
                      const EnergySpec& spec);

/// Constant C with F(s) >= -C s - C for all s >= 0.
double linear_lower_bound_constant(const InternalEnergy& F);

/// Constants (A, B) with E(mu) >= -A - B HK(mu, 0)^2 on the given box:
/// A = C_F vol, B = (Sigma/4)(C_F + sup V^-).
struct EnergyBoundConstants {
  double A = 0.0;
  double B = 0.0;
  double C_F = 0.0;
};

EnergyBoundConstants energy_bound_constants(const EnergySpec& spec, const Box& box,
                                            const Params& params);

}  // namespace hkflow
