#include "hkflow/energy.hpp"

namespace hkflow {

double InternalEnergy::F(double s) const {
  if (s < 0.0) throw std::invalid_argument("InternalEnergy::F: s must be nonnegative");
  switch (family) {
    case EnergyFamily::LogEntropy:
      return s == 0.0 ? 0.0 : c1 * s * std::log(s);
    case EnergyFamily::PowerLaw:
      return -c1 * std::pow(s, q) + c2 * std::pow(s, p);
  }
  return 0.0;
}

double InternalEnergy::Fp(double s) const {
  switch (family) {
    case EnergyFamily::LogEntropy:
      return c1 * (std::log(s) + 1.0);
    case EnergyFamily::PowerLaw:
      return -c1 * q * std::pow(s, q - 1.0) + c2 * p * std::pow(s, p - 1.0);
  }
  return 0.0;
}

double InternalEnergy::Fpp(double s) const {
  switch (family) {
    case EnergyFamily::LogEntropy:
      return c1 / s;
    case EnergyFamily::PowerLaw:
      return c1 * q * (1.0 - q) * std::pow(s, q - 2.0) +
             c2 * p * (p - 1.0) * std::pow(s, p - 2.0);
  }
  return 0.0;
}

double InternalEnergy::L(double s) const {
  if (s == 0.0) return -F(0.0);
  switch (family) {
    case EnergyFamily::LogEntropy:
      return c1 * s;
    case EnergyFamily::PowerLaw:
      return c1 * (1.0 - q) * std::pow(s, q) + c2 * (p - 1.0) * std::pow(s, p);
  }
  return 0.0;
}

double InternalEnergy::Lhat(double s) const {
  if (s == 0.0) return 0.0;
  switch (family) {
    case EnergyFamily::LogEntropy:
      return c1 * s + c1 * s * std::log(s);
    case EnergyFamily::PowerLaw:
      return -c1 * q * std::pow(s, q) + c2 * p * std::pow(s, p);
  }
  return 0.0;
}

InternalEnergy InternalEnergy::log_entropy(double c1) {
  if (!(c1 > 0.0)) throw std::invalid_argument("log_entropy: c1 must be positive");
  InternalEnergy e;
  e.family = EnergyFamily::LogEntropy;
  e.c1 = c1;
  return e;
}

InternalEnergy InternalEnergy::power_law(double c1, double c2, double p, double q) {
  if (!(c1 >= 0.0) || !(c2 > 0.0) || !(p > 1.0) || !(q > 0.0 && q < 1.0))
    throw std::invalid_argument("power_law: need c1 >= 0, c2 > 0, p > 1, q in (0,1)");
  InternalEnergy e;
  e.family = EnergyFamily::PowerLaw;
  e.c1 = c1;
  e.c2 = c2;
  e.p = p;
  e.q = q;
  return e;
}

EnergySpec::EnergySpec() : EnergySpec(InternalEnergy::log_entropy(1.0)) {}

EnergySpec::EnergySpec(InternalEnergy f) : F(f) {
  V = [](const Vec&) { return 0.0; };
  grad_V = [](const Vec& x) { return Vec(x.size(), 0.0); };
}

void certify_V_bounds(EnergySpec& spec, const GridDensity& grid) {
  double sv = 0.0, sg = 0.0, lip = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vec c = grid.center(i);
    sv = std::max(sv, std::abs(spec.V(c)));
    const double gn = norm(spec.grad_V(c));
    sg = std::max(sg, gn);
    lip = std::max(lip, gn);
  }
  spec.sup_V = sv;
  spec.sup_grad_V = sg;
  spec.lip_V = lip;
}

double F_eval(const EnergySpec& spec, double s) { return spec.F.F(s); }

double F_prime(const EnergySpec& spec, double s) {
  if (!(s > 0.0)) throw std::domain_error("F_prime: s must be positive (F'(0+) may be -inf)");
  return spec.F.Fp(s);
}

double L_F(const EnergySpec& spec, double s) { return spec.F.L(s); }

double L_hat_F(const EnergySpec& spec, double s) { return spec.F.Lhat(s); }

double L_F_inverse(const EnergySpec& spec, double target) {
  double lo = 0.0, hi = 1.0;
  if (spec.F.L(0.0) >= target) return 0.0;
  while (spec.F.L(hi) < target) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("L_F_inverse: target not attained");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (spec.F.L(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double energy_of(const GridDensity& u, const EnergySpec& spec) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    acc += spec.F.F(u.values[i]) + spec.V(u.center(i)) * u.values[i];
  return acc * u.cell_volume();
}

double jko_cell_prox(double g, double kappa, double V_x, const EnergySpec& spec) {
  if (!(kappa > 0.0)) throw std::invalid_argument("jko_cell_prox: kappa must be positive");
  if (!(g >= 0.0)) throw std::invalid_argument("jko_cell_prox: g must be nonnegative");
  const InternalEnergy& F = spec.F;

  auto foc = [&](double s) { return kappa * (1.0 - g / s) + F.Fp(s) + V_x; };

  // Boundary minimizer: only possible when g = 0 and F'(0+) is finite.
  if (g == 0.0 && F.family == EnergyFamily::PowerLaw && F.c1 == 0.0) {
    if (kappa + V_x >= 0.0) return 0.0;
  }

  // Bracket the root of the strictly increasing first-order condition.
  double lo = g > 0.0 ? g : 1.0;
  while (foc(lo) >= 0.0) {
    lo *= 0.5;
    if (lo < 1e-300) return 0.0;
  }
  double hi = std::max(g, 1.0);
  while (foc(hi) <= 0.0) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("jko_cell_prox: no finite minimizer");
  }

  double s = std::sqrt(lo * hi);
  const double tol = 1e-12 * (1.0 + kappa + std::abs(V_x));
  for (int it = 0; it < 100; ++it) {
    const double r = foc(s);
    if (std::abs(r) <= tol) return s;
    if (r > 0.0) hi = s;
    else lo = s;
    const double dr = kappa * g / (s * s) + F.Fpp(s);
    double step = s - r / dr;
    if (!(step > lo) || !(step < hi)) step = 0.5 * (lo + hi);
    s = step;
  }
  if (std::abs(foc(s)) <= 1e-9 * (1.0 + kappa + std::abs(V_x))) return s;
  throw std::runtime_error("jko_cell_prox: Newton failed to converge in 100 iterations");
}

double dF_directional(const GridDensity& u0, const PerturbationField& field,
                      const EnergySpec& spec) {
  if (!field.interior_support)
    throw std::invalid_argument("dF_directional: field must have interior support");
  const int d = u0.dim();
  const std::size_t n = u0.size();

  // tr Dv by central differences of the sampled v, matching the grid spacing.
  std::vector<Vec> vsamp(n);
  for (std::size_t i = 0; i < n; ++i) vsamp[i] = field.v(u0.center(i));
  std::vector<std::size_t> stride(d);
  std::size_t mult = 1;
  for (int k = 0; k < d; ++k) {
    stride[k] = mult;
    mult *= static_cast<std::size_t>(u0.dims[k]);
  }

  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    double trDv = 0.0;
    for (int k = 0; k < d; ++k) {
      const std::size_t ik = rem % static_cast<std::size_t>(u0.dims[k]);
      rem /= static_cast<std::size_t>(u0.dims[k]);
      std::size_t ip = i, im = i;
      double denom = 2.0 * u0.spacing[k];
      if (ik + 1 < static_cast<std::size_t>(u0.dims[k])) ip = i + stride[k];
      else denom = u0.spacing[k];
      if (ik > 0) im = i - stride[k];
      else denom = u0.spacing[k];
      if (ip != im) trDv += (vsamp[ip][k] - vsamp[im][k]) / denom;
    }
    const Vec c = u0.center(i);
    const double u = u0.values[i];
    const double R = field.R(c);
    acc += -spec.F.L(u) * trDv + 2.0 * spec.F.Lhat(u) * R;
    acc += (dot(spec.grad_V(c), vsamp[i]) + 2.0 * spec.V(c) * R) * u;
  }
  return acc * u0.cell_volume();
}

double linear_lower_bound_constant(const InternalEnergy& F) {
  switch (F.family) {
    case EnergyFamily::LogEntropy:
      // s log s >= -1/e, so F >= -c1/e >= -(c1/e)(1+s).
      return std::max(F.c1 / M_E, 1e-12);
    case EnergyFamily::PowerLaw:
      // s^q <= 1 + s for q in (0,1), so F >= -c1 (1 + s).
      return std::max(F.c1, 1e-12);
  }
  return 1e-12;
}

EnergyBoundConstants energy_bound_constants(const EnergySpec& spec, const Box& box,
                                            const Params& params) {
  EnergyBoundConstants out;
  out.C_F = linear_lower_bound_constant(spec.F);
  // sup of the negative part of V, sampled on a fixed lattice of the box.
  double vneg = 0.0;
  const int d = box.dim();
  const int nsamp = d == 1 ? 257 : 33;
  std::vector<int> dims(d, nsamp);
  GridDensity probe = make_grid(box, dims, 0.0);
  for (std::size_t i = 0; i < probe.size(); ++i)
    vneg = std::max(vneg, -spec.V(probe.center(i)));
  out.A = out.C_F * box.volume();
  out.B = 0.25 * params.sigma * (out.C_F + vneg);
  return out;
}

}  // namespace hkflow
