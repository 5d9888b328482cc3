#pragma once

#include <complex>

#include "hkflow/measures.hpp"

namespace hkflow {

/// Radii below this are identified with the cone vertex.
constexpr double kVertexEps = 1e-15;

/// Point [x, r] on the metric cone; r = 0 is the vertex and x is ignored.
struct ConePoint {
  Vec x;
  double r = 0.0;

  ConePoint() = default;
  ConePoint(Vec x_, double r_) : x(std::move(x_)), r(r_) {
    if (!(r >= 0.0)) throw std::invalid_argument("ConePoint: r must be nonnegative");
  }
  bool is_vertex() const { return r < kVertexEps; }
};

/// Cone distance sqrt((4/Sigma)(r1^2 + r2^2 - 2 r1 r2 cos(min(ell, pi)))) with
/// ell = sqrt(Sigma/4Lambda) |x1 - x2|.
double cone_distance(const ConePoint& p, const ConePoint& q, const Params& params);

/// -(8/Sigma) log(cos(sqrt(Sigma/(4 Lambda)) d)) for d < pi sqrt(Lambda/Sigma),
/// +inf otherwise.
double transport_cost(double d, const Params& params);

/// sin(sqrt(Sigma/4Lambda)|x1-x2|)/|x1-x2| (x2 - x1); zero when x1 = x2.
Vec s_map(const Vec& x1, const Vec& x2, const Params& params);

/// Constant-speed geodesic between two cone points, built from the linear
/// segment between z1 = (2/sqrt(Sigma)) r1 and z2 = (2/sqrt(Sigma)) r2 e^{i ell}
/// in the complex plane. Requires ell <= pi. At ell = pi with both radii
/// positive the segment passes through the vertex; the construction still
/// returns a geodesic but it is not the unique one.
struct ConeGeodesic {
  ConePoint p, q;
  Params params;
  double ell = 0.0;         // angle sqrt(Sigma/4Lambda) |x1-x2|
  bool radial = false;      // x1 = x2 or an endpoint at the vertex
  Vec base;                 // spatial point used in the radial case
  std::complex<double> z1, z2;
};

ConeGeodesic geodesic(const ConePoint& p, const ConePoint& q, const Params& params);
ConePoint eval(const ConeGeodesic& g, double t);

/// Right derivatives at t=0 of the geodesic's angle fraction theta and radius:
/// theta'(0+) = (r2/r1) sin(ell)/ell, R'(0+) = r2 cos(ell) - r1.
/// theta'(0+) is 0 when x1 = x2 and undefined (throws) when r1 = 0, x1 != x2.
struct RightDerivatives {
  double theta_prime0 = 0.0;
  double R_prime0 = 0.0;
};

RightDerivatives geodesic_right_derivatives(const ConePoint& p, const ConePoint& q,
                                            const Params& params);

}  // namespace hkflow
