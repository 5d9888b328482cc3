#include "hkflow/measures.hpp"

namespace hkflow {

namespace {

Box bounding_hull(const std::vector<Vec>& pts) {
  Box b;
  if (pts.empty()) return b;
  b.lo = pts[0];
  b.hi = pts[0];
  for (const auto& p : pts)
    for (std::size_t k = 0; k < p.size(); ++k) {
      b.lo[k] = std::min(b.lo[k], p[k]);
      b.hi[k] = std::max(b.hi[k], p[k]);
    }
  return b;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Vec> pts, std::vector<double> w)
    : points(std::move(pts)), weights(std::move(w)), domain(bounding_hull(points)) {
  validate();
}

DiscreteMeasure::DiscreteMeasure(std::vector<Vec> pts, std::vector<double> w, Box box)
    : points(std::move(pts)), weights(std::move(w)), domain(std::move(box)) {
  validate();
}

void DiscreteMeasure::validate() const {
  if (points.size() != weights.size())
    throw std::invalid_argument("DiscreteMeasure: points/weights size mismatch");
  const std::size_t d = points.empty() ? 0 : points[0].size();
  for (const auto& p : points)
    if (p.size() != d) throw std::invalid_argument("DiscreteMeasure: inconsistent dimensions");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("DiscreteMeasure: weights must be finite and nonnegative");
  if (!points.empty() && domain.dim() == static_cast<int>(d)) {
    for (const auto& p : points)
      if (!domain.contains(p))
        throw std::invalid_argument("DiscreteMeasure: point outside declared domain box");
  }
}

double total_mass(const DiscreteMeasure& m) {
  double s = 0.0;
  for (double w : m.weights) s += w;
  return s;
}

Vec GridDensity::center(std::size_t flat) const {
  Vec c(dims.size());
  std::size_t rem = flat;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    const std::size_t i = rem % static_cast<std::size_t>(dims[k]);
    rem /= static_cast<std::size_t>(dims[k]);
    c[k] = origin[k] + (static_cast<double>(i) + 0.5) * spacing[k];
  }
  return c;
}

Box GridDensity::box() const {
  Box b;
  b.lo = origin;
  b.hi = origin;
  for (std::size_t k = 0; k < dims.size(); ++k) b.hi[k] = origin[k] + dims[k] * spacing[k];
  return b;
}

void GridDensity::validate() const {
  if (origin.size() != dims.size() || spacing.size() != dims.size())
    throw std::invalid_argument("GridDensity: origin/spacing/dims mismatch");
  std::size_t n = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("GridDensity: dims must be positive");
    n *= static_cast<std::size_t>(d);
  }
  for (double s : spacing)
    if (!(s > 0.0)) throw std::invalid_argument("GridDensity: spacing must be positive");
  if (values.size() != n) throw std::invalid_argument("GridDensity: values size mismatch");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("GridDensity: values must be finite and nonnegative");
}

DiscreteMeasure GridDensity::to_measure() const {
  std::vector<Vec> pts(values.size());
  std::vector<double> w(values.size());
  const double vol = cell_volume();
  for (std::size_t i = 0; i < values.size(); ++i) {
    pts[i] = center(i);
    w[i] = values[i] * vol;
  }
  return DiscreteMeasure(std::move(pts), std::move(w), box());
}

double GridDensity::interpolate(const Vec& x) const {
  const int d = dim();
  // Index of the lower cell center and the fractional offset per axis.
  std::vector<std::size_t> i0(d);
  std::vector<double> t(d);
  for (int k = 0; k < d; ++k) {
    const double s = (x[k] - origin[k]) / spacing[k] - 0.5;
    double fl = std::floor(s);
    double frac = s - fl;
    long idx = static_cast<long>(fl);
    if (idx < 0) {
      idx = 0;
      frac = 0.0;
    }
    if (idx >= dims[k] - 1) {
      idx = std::max(0, dims[k] - 2);
      frac = dims[k] == 1 ? 0.0 : 1.0;
      if (dims[k] == 1) idx = 0;
    }
    i0[k] = static_cast<std::size_t>(idx);
    t[k] = frac;
  }
  double acc = 0.0;
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    double wgt = 1.0;
    std::size_t flat = 0, mult = 1;
    for (int k = 0; k < d; ++k) {
      const int up = (c >> k) & 1;
      wgt *= up ? t[k] : 1.0 - t[k];
      std::size_t ik = i0[k] + static_cast<std::size_t>(up);
      if (ik >= static_cast<std::size_t>(dims[k])) ik = static_cast<std::size_t>(dims[k] - 1);
      flat += ik * mult;
      mult *= static_cast<std::size_t>(dims[k]);
    }
    acc += wgt * values[flat];
  }
  return acc;
}

GridDensity make_grid(const Box& box, const std::vector<int>& dims, double fill) {
  GridDensity g;
  g.origin = box.lo;
  g.dims = dims;
  g.spacing.resize(dims.size());
  std::size_t n = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    g.spacing[k] = (box.hi[k] - box.lo[k]) / dims[k];
    n *= static_cast<std::size_t>(dims[k]);
  }
  g.values.assign(n, fill);
  g.validate();
  return g;
}

GridDensity sample_grid(const Box& box, const std::vector<int>& dims,
                        const std::function<double(const Vec&)>& u) {
  GridDensity g = make_grid(box, dims, 0.0);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] = u(g.center(i));
  g.validate();
  return g;
}

double total_mass(const GridDensity& u) {
  double s = 0.0;
  for (double v : u.values) s += v;
  return s * u.cell_volume();
}

DiscreteMeasure perturb(const DiscreteMeasure& nu0, const PerturbationField& field, double h) {
  std::vector<Vec> pts(nu0.size());
  std::vector<double> w(nu0.size());
  for (std::size_t j = 0; j < nu0.size(); ++j) {
    const Vec& x = nu0.points[j];
    const double r = field.R(x);
    const double scale = 1.0 + h * r;
    if (!(scale > 0.0))
      throw std::invalid_argument("perturb: 1 + h R(x) <= 0, h outside admissible range");
    Vec vx = field.v(x);
    Vec y = x;
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += h * vx[k];
    if (!nu0.domain.contains(y))
      throw std::invalid_argument("perturb: moved point leaves the domain box");
    pts[j] = std::move(y);
    w[j] = scale * scale * nu0.weights[j];
  }
  return DiscreteMeasure(std::move(pts), std::move(w), nu0.domain);
}

namespace {

// Central differences of the sampled field components per axis; one-sided at
// the grid edges. Returns d*d entries per cell (row k = component, col l =
// d/dx_l), stored cell-major.
std::vector<double> sampled_jacobian(const GridDensity& grid, const std::vector<Vec>& vsamp) {
  const int d = grid.dim();
  const std::size_t n = grid.size();
  std::vector<double> J(n * d * d, 0.0);
  std::vector<std::size_t> stride(d);
  std::size_t mult = 1;
  for (int k = 0; k < d; ++k) {
    stride[k] = mult;
    mult *= static_cast<std::size_t>(grid.dims[k]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    std::vector<std::size_t> idx(d);
    for (int k = 0; k < d; ++k) {
      idx[k] = rem % static_cast<std::size_t>(grid.dims[k]);
      rem /= static_cast<std::size_t>(grid.dims[k]);
    }
    for (int l = 0; l < d; ++l) {
      std::size_t ip = i, im = i;
      double denom = 2.0 * grid.spacing[l];
      if (idx[l] + 1 < static_cast<std::size_t>(grid.dims[l])) ip = i + stride[l];
      else denom = grid.spacing[l];
      if (idx[l] > 0) im = i - stride[l];
      else denom = grid.spacing[l];
      if (ip == i && im == i) denom = 1.0;  // single cell along axis
      for (int k = 0; k < d; ++k)
        J[(i * d + k) * d + l] = (vsamp[ip][k] - vsamp[im][k]) / denom;
    }
  }
  return J;
}

double det_small(const std::vector<double>& M, int d) {
  if (d == 1) return M[0];
  if (d == 2) return M[0] * M[3] - M[1] * M[2];
  throw std::invalid_argument("density_after_pushforward: only 1-D and 2-D grids supported");
}

}  // namespace

GridDensity density_after_pushforward(const GridDensity& u0, const PerturbationField& field,
                                      double h) {
  u0.validate();
  if (h == 0.0) return u0;
  const int d = u0.dim();
  if (d > 2)
    throw std::invalid_argument("density_after_pushforward: only 1-D and 2-D grids supported");

  const std::size_t n = u0.size();
  std::vector<Vec> vsamp(n);
  for (std::size_t i = 0; i < n; ++i) vsamp[i] = field.v(u0.center(i));
  const std::vector<double> J = sampled_jacobian(u0, vsamp);

  // Component grids of v and of Dv for off-center interpolation.
  std::vector<GridDensity> vcomp(d);
  std::vector<GridDensity> jcomp(d * d);
  for (int k = 0; k < d; ++k) {
    vcomp[k] = u0;
    for (std::size_t i = 0; i < n; ++i) vcomp[k].values[i] = vsamp[i][k];
  }
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l) {
      jcomp[k * d + l] = u0;
      for (std::size_t i = 0; i < n; ++i) jcomp[k * d + l].values[i] = J[(i * d + k) * d + l];
    }
  auto v_at = [&](const Vec& x) {
    Vec out(d);
    for (int k = 0; k < d; ++k) out[k] = vcomp[k].interpolate(x);
    return out;
  };

  GridDensity uh = u0;
  std::vector<double> Jx(d * d);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec y = u0.center(i);
    // Invert x + h v(x) = y by fixed-point iteration.
    Vec x = y;
    for (int it = 0; it < 200; ++it) {
      Vec vx = v_at(x);
      double delta = 0.0;
      for (int k = 0; k < d; ++k) {
        const double xn = y[k] - h * vx[k];
        delta = std::max(delta, std::abs(xn - x[k]));
        x[k] = xn;
      }
      if (delta < 1e-14) break;
    }
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        Jx[k * d + l] = (k == l ? 1.0 : 0.0) + h * jcomp[k * d + l].interpolate(x);
    const double det = det_small(Jx, d);
    if (!(det > 1e-12))
      throw std::runtime_error("density_after_pushforward: singular Jacobian, |h| too large");
    const double scale = 1.0 + h * field.R(x);
    uh.values[i] = scale * scale * u0.interpolate(x) / det;
  }
  return uh;
}

}  // namespace hkflow
