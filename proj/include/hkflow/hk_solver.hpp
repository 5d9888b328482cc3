#pragma once

#include "hkflow/cone.hpp"
#include "hkflow/measures.hpp"

namespace hkflow {

enum class ValueMode { PlanObjective };

struct SolverConfig {
  double eps_start = 1.0;
  double eps_end = 1e-4;
  double eps_factor = 0.5;
  int max_iters = 200000;  // per epsilon level
  double dual_tol = 1e-9;
  ValueMode value_mode = ValueMode::PlanObjective;

  void validate() const {
    if (!(eps_end > 0.0) || !(eps_start > 0.0) || eps_end > eps_start)
      throw std::invalid_argument("SolverConfig: need 0 < eps_end <= eps_start");
    if (!(eps_factor > 0.0 && eps_factor < 1.0))
      throw std::invalid_argument("SolverConfig: eps_factor must lie in (0,1)");
    if (!(dual_tol > 0.0)) throw std::invalid_argument("SolverConfig: dual_tol must be positive");
    if (max_iters <= 0) throw std::invalid_argument("SolverConfig: max_iters must be positive");
  }
};

/// Thrown when the dual iteration does not reach dual_tol within max_iters.
struct SolveError : std::runtime_error {
  double last_residual;
  SolveError(const std::string& what, double residual)
      : std::runtime_error(what), last_residual(residual) {}
};

struct PlanEntry {
  int i = 0;  // index into the first measure
  int j = 0;  // index into the second measure
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<PlanEntry> entries;
  std::vector<double> f, g;  // dual potentials per source/target point
  double eps = 0.0;          // regularization at which the plan was extracted
};

/// Optimal coupling with duals, marginal densities and the per-point
/// Lebesgue decompositions of both inputs against the plan marginals.
/// The plan is the entropic-limit selection; where the optimal plan is
/// non-unique this is one valid choice.
struct HKSolution {
  double hk2 = 0.0;
  TransportPlan plan;
  DiscreteMeasure mu1, mu2;               // the two inputs (first, second)
  std::vector<double> gamma1, gamma2;     // plan marginals per point
  std::vector<double> sigma1, sigma2;     // d(gamma_i)/d(mu_i), 0 off support
  std::vector<double> rho0, rho_star;     // d(mu_i)/d(gamma_i) where defined
  DiscreteMeasure singular0, singular_star;
  int iterations = 0;
  double dual_residual = 0.0;
};

/// Cone lift of a plan: pairs of cone points with masses.
struct ConePlanEntry {
  ConePoint first, second;
  double mass = 0.0;
};

struct ConePlan {
  std::vector<ConePlanEntry> entries;
};

enum class Side { First, Second };

/// Primal entropy-transport value of a feasible plan:
///   (4/Sigma) sum_i int (sigma_i log sigma_i - sigma_i + 1) d mu_i
///   + sum of cost over plan entries.
/// Returns +inf if a plan marginal charges a zero-weight point.
double let_objective(const TransportPlan& plan, const DiscreteMeasure& mu1,
                     const DiscreteMeasure& mu2, const Params& params);

/// Squared Hellinger-Kantorovich distance via log-domain generalized scaling
/// with epsilon decreasing from cfg.eps_start to cfg.eps_end. hk2 is the
/// unregularized primal at the computed plan (an upper bound of the true
/// value).
HKSolution solve_hk(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                    const Params& params, const SolverConfig& cfg = SolverConfig());

/// Per-point Lebesgue decomposition base = rho * marginal + singular.
struct LebesgueParts {
  std::vector<double> rho;
  DiscreteMeasure singular;
};

LebesgueParts lebesgue_decompose(const DiscreteMeasure& base, const DiscreteMeasure& marginal);

/// Lift the plan to the cone: pair ([x_i, sqrt(rho0_i)], [y_j, sqrt(rho*_j)])
/// with the plan mass.
ConePlan lift_to_cone(const HKSolution& sol);

/// x_#(r^2 beta) on the chosen side, grouped by coordinates.
DiscreteMeasure homogeneous_marginal(const ConePlan& beta, Side side);

/// Direct minimization of the entropy-transport objective over the plan
/// entries by projected coordinate descent with multi-start. Supports of
/// size <= 4 on each side.
double hk_tiny_oracle(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                      const Params& params);

}  // namespace hkflow
