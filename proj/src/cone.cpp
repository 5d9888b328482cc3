#include "hkflow/cone.hpp"

namespace hkflow {

double cone_distance(const ConePoint& p, const ConePoint& q, const Params& params) {
  const double r1 = p.is_vertex() ? 0.0 : p.r;
  const double r2 = q.is_vertex() ? 0.0 : q.r;
  double ang = 0.0;
  if (r1 > 0.0 && r2 > 0.0) ang = std::min(params.ell_factor() * dist(p.x, q.x), M_PI);
  const double sq =
      (4.0 / params.sigma) * (r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(ang));
  return std::sqrt(std::max(sq, 0.0));
}

double transport_cost(double d, const Params& params) {
  if (!(d >= 0.0)) throw std::invalid_argument("transport_cost: d must be nonnegative");
  if (d >= params.cutoff_radius()) return kInf;
  const double c = std::cos(params.ell_factor() * d);
  if (!(c > 0.0)) return kInf;
  return -(8.0 / params.sigma) * std::log(c);
}

Vec s_map(const Vec& x1, const Vec& x2, const Params& params) {
  const double d = dist(x1, x2);
  Vec out(x1.size(), 0.0);
  if (d == 0.0) return out;
  const double ell = params.ell_factor() * d;
  const double factor = sinc(ell) * params.ell_factor();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = factor * (x2[k] - x1[k]);
  return out;
}

ConeGeodesic geodesic(const ConePoint& p, const ConePoint& q, const Params& params) {
  ConeGeodesic g;
  g.p = p;
  g.q = q;
  g.params = params;
  const double d = (p.is_vertex() || q.is_vertex()) ? 0.0 : dist(p.x, q.x);
  g.ell = params.ell_factor() * d;
  if (g.ell > M_PI * (1.0 + 1e-14))
    throw std::invalid_argument("geodesic: sqrt(Sigma/4Lambda)|x1-x2| exceeds pi");
  g.ell = std::min(g.ell, M_PI);

  if (p.is_vertex() || q.is_vertex() || g.ell == 0.0) {
    g.radial = true;
    g.base = p.is_vertex() ? q.x : p.x;
    return g;
  }
  const double s = 2.0 / std::sqrt(params.sigma);
  g.z1 = std::complex<double>(s * p.r, 0.0);
  g.z2 = std::polar(s * q.r, g.ell);
  return g;
}

ConePoint eval(const ConeGeodesic& g, double t) {
  const double r1 = g.p.is_vertex() ? 0.0 : g.p.r;
  const double r2 = g.q.is_vertex() ? 0.0 : g.q.r;
  if (g.radial) {
    const double r = r1 + t * (r2 - r1);
    return ConePoint(g.base, std::max(r, 0.0));
  }
  const std::complex<double> z = g.z1 + t * (g.z2 - g.z1);
  const double mag = std::abs(z);
  const double radius = 0.5 * std::sqrt(g.params.sigma) * mag;
  if (radius < kVertexEps) return ConePoint(g.p.x, 0.0);
  double theta = std::arg(z) / g.ell;
  theta = std::clamp(theta, 0.0, 1.0);
  Vec x(g.p.x.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    x[k] = g.p.x[k] + theta * (g.q.x[k] - g.p.x[k]);
  return ConePoint(std::move(x), radius);
}

RightDerivatives geodesic_right_derivatives(const ConePoint& p, const ConePoint& q,
                                            const Params& params) {
  RightDerivatives out;
  const double r1 = p.is_vertex() ? 0.0 : p.r;
  const double r2 = q.is_vertex() ? 0.0 : q.r;
  const double d = (p.is_vertex() || q.is_vertex()) ? 0.0 : dist(p.x, q.x);
  const double ell = params.ell_factor() * d;
  if (ell == 0.0) {
    out.theta_prime0 = 0.0;
    out.R_prime0 = r2 - r1;
    return out;
  }
  if (r1 < kVertexEps)
    throw std::domain_error("geodesic_right_derivatives: theta'(0+) undefined at the vertex");
  out.theta_prime0 = (r2 / r1) * sinc(ell);
  out.R_prime0 = r2 * std::cos(ell) - r1;
  return out;
}

}  // namespace hkflow
