#pragma once

#include <functional>

#include "hkflow/common.hpp"

namespace hkflow {

/// Transport weight Lambda and reaction weight Sigma.
struct Params {
  double lambda = 1.0;
  double sigma = 1.0;

  Params() = default;
  Params(double lambda_, double sigma_) : lambda(lambda_), sigma(sigma_) {
    if (!(lambda > 0.0) || !(sigma > 0.0))
      throw std::invalid_argument("Params: lambda and sigma must be positive");
    if (!std::isfinite(ell_factor()))
      throw std::invalid_argument("Params: sqrt(sigma/(4 lambda)) not finite");
  }

  /// Length-to-angle scale sqrt(Sigma / (4 Lambda)).
  double ell_factor() const { return std::sqrt(sigma / (4.0 * lambda)); }

  /// Spatial distance beyond which the transport cost is infinite.
  double cutoff_radius() const { return M_PI * std::sqrt(lambda / sigma); }

  /// Weight 4/Sigma multiplying the marginal entropy terms.
  double entropy_weight() const { return 4.0 / sigma; }
};

/// Weighted point cloud representing a finite nonnegative measure.
struct DiscreteMeasure {
  std::vector<Vec> points;
  std::vector<double> weights;
  Box domain;

  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Vec> pts, std::vector<double> w);
  DiscreteMeasure(std::vector<Vec> pts, std::vector<double> w, Box box);

  std::size_t size() const { return points.size(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
  void validate() const;
};

double total_mass(const DiscreteMeasure& m);

/// Cell-centered density on a regular grid.
struct GridDensity {
  Vec origin;
  Vec spacing;
  std::vector<int> dims;
  std::vector<double> values;  // row-major, first axis fastest

  int dim() const { return static_cast<int>(dims.size()); }
  std::size_t size() const { return values.size(); }

  double cell_volume() const {
    double v = 1.0;
    for (double s : spacing) v *= s;
    return v;
  }

  Vec center(std::size_t flat) const;
  Box box() const;
  DiscreteMeasure to_measure() const;
  void validate() const;

  /// Multilinear interpolation of the cell values, clamped at boundary cells.
  double interpolate(const Vec& x) const;
};

GridDensity make_grid(const Box& box, const std::vector<int>& dims, double fill = 0.0);
GridDensity sample_grid(const Box& box, const std::vector<int>& dims,
                        const std::function<double(const Vec&)>& u);

double total_mass(const GridDensity& u);

/// Bounded perturbation direction (v, R): points move along v, weights scale
/// by (1+hR)^2. interior_support declares v = 0 within boundary_margin of
/// the domain boundary.
struct PerturbationField {
  std::function<Vec(const Vec&)> v;
  std::function<double(const Vec&)> R;
  bool interior_support = false;
  double boundary_margin = 0.0;
};

/// Pushforward (I+hv)_# (1+hR)^2 nu0, exact on point clouds.
DiscreteMeasure perturb(const DiscreteMeasure& nu0, const PerturbationField& field, double h);

/// Density u_h with det(I + h Dv(x)) u_h(x + h v(x)) = (1+hR(x))^2 u0(x),
/// evaluated at cell centers by inverse-mapping interpolation. Dv is taken
/// by central differences of v sampled on the grid.
GridDensity density_after_pushforward(const GridDensity& u0, const PerturbationField& field,
                                      double h);

}  // namespace hkflow
