#include "hkflow/subdiff.hpp"

namespace hkflow {

void certify_c_phi(const TestFunction& phi, const Box& box, int samples_per_axis) {
  const int d = box.dim();
  std::vector<int> dims(d, samples_per_axis);
  GridDensity probe = make_grid(box, dims, 0.0);
  double sup = 0.0;
  for (std::size_t i = 0; i < probe.size(); ++i) {
    const Vec c = probe.center(i);
    sup = std::max(sup, std::abs(phi.phi(c)) + norm(phi.grad_phi(c)) + phi.hess_bound);
  }
  if (phi.c_phi < sup)
    throw std::invalid_argument("certify_c_phi: c_phi below the sampled supremum");
}

double frak_F(const HKSolution& sol, const PerturbationField& field, const Params& params) {
  const double lam = params.entropy_weight();
  const double ellfac = params.ell_factor();
  double acc = 0.0;
  for (const PlanEntry& e : sol.plan.entries) {
    const Vec& x = sol.mu1.points[e.i];
    const Vec& y = sol.mu2.points[e.j];
    const double rho0 = sol.rho0[e.i];
    const double rhos = sol.rho_star[e.j];
    const double root = std::sqrt(rho0 * rhos);
    const double R = field.R(x);
    const double ell = ellfac * dist(x, y);
    double term = -rho0 * R + root * R * std::cos(ell);
    term += ellfac * root * dot(s_map(x, y, params), field.v(x));
    acc += e.mass * term;
  }
  return lam * acc;
}

double frak_F_cone(const ConePlan& beta, const PerturbationField& field, const Params& params) {
  const double lam = params.entropy_weight();
  const double ellfac = params.ell_factor();
  double acc = 0.0;
  for (const ConePlanEntry& e : beta.entries) {
    const double r1 = e.first.r;
    const double r2 = e.second.r;
    const Vec& x = e.first.x;
    const Vec& y = e.second.x;
    const double R = field.R(x);
    const double ell = ellfac * dist(x, y);
    double term = -r1 * r1 * R + r1 * r2 * R * std::cos(ell);
    term += ellfac * r1 * r2 * dot(s_map(x, y, params), field.v(x));
    acc += e.mass * term;
  }
  return lam * acc;
}

double superdiff_element(const HKSolution& sol, const PerturbationField& field,
                         const Params& params) {
  double sing = 0.0;
  for (std::size_t i = 0; i < sol.singular0.size(); ++i)
    if (sol.singular0.weights[i] > 0.0)
      sing += field.R(sol.singular0.points[i]) * sol.singular0.weights[i];
  return frak_F(sol, field, params) - params.entropy_weight() * sing;
}

ConnectionGap connection_gap(const HKSolution& sol, const TestFunction& phi,
                             const DiscreteMeasure& mu, const DiscreteMeasure& nu0,
                             const Params& params) {
  const double lam = params.entropy_weight();
  const double ellfac = params.ell_factor();

  double int_mu = 0.0, int_nu0 = 0.0;
  for (std::size_t j = 0; j < mu.size(); ++j) int_mu += phi.phi(mu.points[j]) * mu.weights[j];
  for (std::size_t i = 0; i < nu0.size(); ++i)
    int_nu0 += phi.phi(nu0.points[i]) * nu0.weights[i];

  // frak_F with the factors 2 phi and sqrt(4 Lambda/Sigma) <S, grad phi>.
  const double grad_fac = std::sqrt(4.0 * params.lambda / params.sigma);
  double acc = 0.0;
  for (const PlanEntry& e : sol.plan.entries) {
    const Vec& x = sol.mu1.points[e.i];
    const Vec& y = sol.mu2.points[e.j];
    const double rho0 = sol.rho0[e.i];
    const double rhos = sol.rho_star[e.j];
    const double root = std::sqrt(rho0 * rhos);
    const double ph = phi.phi(x);
    const double ell = ellfac * dist(x, y);
    double term = -2.0 * rho0 * ph + 2.0 * root * ph * std::cos(ell);
    term += grad_fac * root * dot(s_map(x, y, params), phi.grad_phi(x));
    acc += e.mass * term;
  }
  const double frak_phi = lam * acc;

  // int phi d(nu0 - h alpha0): the singular part of nu0 against the plan.
  double sing = 0.0;
  for (std::size_t i = 0; i < sol.singular0.size(); ++i)
    if (sol.singular0.weights[i] > 0.0)
      sing += phi.phi(sol.singular0.points[i]) * sol.singular0.weights[i];

  ConnectionGap out;
  out.lhs = std::abs(lam * (int_mu - int_nu0) - (frak_phi - 2.0 * lam * sing));
  out.bound = phi.c_phi * (6.0 + 16.0 * params.lambda / params.sigma) * sol.hk2;
  return out;
}

}  // namespace hkflow
