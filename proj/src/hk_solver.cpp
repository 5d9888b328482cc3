#include "hkflow/hk_solver.hpp"

#include <map>

#include "hkflow/scaling.hpp"

namespace hkflow {

double let_objective(const TransportPlan& plan, const DiscreteMeasure& mu1,
                     const DiscreteMeasure& mu2, const Params& params) {
  const double lam = params.entropy_weight();
  std::vector<double> g1(mu1.size(), 0.0), g2(mu2.size(), 0.0);
  double cost_term = 0.0;
  for (const PlanEntry& e : plan.entries) {
    g1[e.i] += e.mass;
    g2[e.j] += e.mass;
    if (e.mass > 0.0) {
      const double c = transport_cost(dist(mu1.points[e.i], mu2.points[e.j]), params);
      if (c == kInf) return kInf;
      cost_term += e.mass * c;
    }
  }
  double ent = 0.0;
  for (std::size_t i = 0; i < mu1.size(); ++i) {
    if (mu1.weights[i] == 0.0) {
      if (g1[i] > 0.0) return kInf;
      continue;
    }
    ent += mu1.weights[i] * entropy_f(g1[i] / mu1.weights[i]);
  }
  for (std::size_t j = 0; j < mu2.size(); ++j) {
    if (mu2.weights[j] == 0.0) {
      if (g2[j] > 0.0) return kInf;
      continue;
    }
    ent += mu2.weights[j] * entropy_f(g2[j] / mu2.weights[j]);
  }
  return lam * ent + cost_term;
}

LebesgueParts lebesgue_decompose(const DiscreteMeasure& base, const DiscreteMeasure& marginal) {
  if (base.size() != marginal.size())
    throw std::invalid_argument("lebesgue_decompose: supports must share indexing");
  LebesgueParts out;
  out.rho.assign(base.size(), 0.0);
  std::vector<double> sing(base.size(), 0.0);
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (marginal.weights[i] > 0.0)
      out.rho[i] = base.weights[i] / marginal.weights[i];
    else
      sing[i] = base.weights[i];
  }
  out.singular = DiscreteMeasure(base.points, std::move(sing), base.domain);
  return out;
}

namespace {

DiscreteMeasure marginal_measure(const DiscreteMeasure& base, const std::vector<double>& w) {
  return DiscreteMeasure(base.points, w, base.domain);
}

void finish_decomposition(HKSolution& sol) {
  const DiscreteMeasure m1 = marginal_measure(sol.mu1, sol.gamma1);
  const DiscreteMeasure m2 = marginal_measure(sol.mu2, sol.gamma2);
  LebesgueParts p1 = lebesgue_decompose(sol.mu1, m1);
  LebesgueParts p2 = lebesgue_decompose(sol.mu2, m2);
  sol.rho0 = std::move(p1.rho);
  sol.singular0 = std::move(p1.singular);
  sol.rho_star = std::move(p2.rho);
  sol.singular_star = std::move(p2.singular);
  sol.sigma1.assign(sol.mu1.size(), 0.0);
  sol.sigma2.assign(sol.mu2.size(), 0.0);
  for (std::size_t i = 0; i < sol.mu1.size(); ++i)
    if (sol.mu1.weights[i] > 0.0) sol.sigma1[i] = sol.gamma1[i] / sol.mu1.weights[i];
  for (std::size_t j = 0; j < sol.mu2.size(); ++j)
    if (sol.mu2.weights[j] > 0.0) sol.sigma2[j] = sol.gamma2[j] / sol.mu2.weights[j];
}

}  // namespace

HKSolution solve_hk(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                    const Params& params, const SolverConfig& cfg) {
  cfg.validate();
  mu1.validate();
  mu2.validate();

  HKSolution sol;
  sol.mu1 = mu1;
  sol.mu2 = mu2;
  sol.gamma1.assign(mu1.size(), 0.0);
  sol.gamma2.assign(mu2.size(), 0.0);

  // Active supports: positive weight and at least one finite-cost partner.
  const double cutoff = params.cutoff_radius();
  std::vector<int> rows, cols;
  std::vector<char> col_active(mu2.size(), 0);
  for (std::size_t j = 0; j < mu2.size(); ++j) {
    if (mu2.weights[j] <= 0.0) continue;
    for (std::size_t i = 0; i < mu1.size(); ++i) {
      if (mu1.weights[i] > 0.0 && dist(mu1.points[i], mu2.points[j]) < cutoff) {
        col_active[j] = 1;
        break;
      }
    }
    if (col_active[j]) cols.push_back(static_cast<int>(j));
  }
  for (std::size_t i = 0; i < mu1.size(); ++i) {
    if (mu1.weights[i] <= 0.0) continue;
    for (int j : cols) {
      if (dist(mu1.points[i], mu2.points[j]) < cutoff) {
        rows.push_back(static_cast<int>(i));
        break;
      }
    }
  }

  if (!rows.empty() && !cols.empty()) {
    detail::ScalingCore core;
    core.init(static_cast<int>(rows.size()), static_cast<int>(cols.size()),
              params.entropy_weight());
    for (std::size_t a = 0; a < rows.size(); ++a) {
      core.log_omega[a] = std::log(mu1.weights[rows[a]]);
      for (std::size_t b = 0; b < cols.size(); ++b)
        core.cost[a * cols.size() + b] =
            transport_cost(dist(mu1.points[rows[a]], mu2.points[cols[b]]), params);
    }
    for (std::size_t b = 0; b < cols.size(); ++b) core.log_b[b] = std::log(mu2.weights[cols[b]]);

    double eps = cfg.eps_start;
    int total_iters = 0;
    double res = 0.0;
    bool final_level = false;
    while (!final_level) {
      if (eps <= cfg.eps_end * (1.0 + 1e-12)) {
        eps = cfg.eps_end;
        final_level = true;
      }
      core.eps = eps;
      const double tol = final_level ? cfg.dual_tol : std::max(cfg.dual_tol, 1e-7);
      int it = 0;
      res = kInf;
      while (it < cfg.max_iters) {
        res = core.sweep();
        ++it;
        if (res <= tol) break;
      }
      total_iters += it;
      if (res > tol && final_level)
        throw SolveError("solve_hk: dual iteration did not reach dual_tol", res);
      eps *= cfg.eps_factor;
    }
    sol.iterations = total_iters;
    sol.dual_residual = res;

    sol.plan.eps = cfg.eps_end;
    sol.plan.f.assign(mu1.size(), 0.0);
    sol.plan.g.assign(mu2.size(), 0.0);
    for (std::size_t a = 0; a < rows.size(); ++a) sol.plan.f[rows[a]] = core.f[a];
    for (std::size_t b = 0; b < cols.size(); ++b) sol.plan.g[cols[b]] = core.g[b];
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) {
        const double lg = core.log_entry(static_cast<int>(a), static_cast<int>(b));
        if (lg > -700.0) {
          const double mass = std::exp(lg);
          sol.plan.entries.push_back({rows[a], cols[b], mass});
          sol.gamma1[rows[a]] += mass;
          sol.gamma2[cols[b]] += mass;
        }
      }
  }

  finish_decomposition(sol);
  sol.hk2 = let_objective(sol.plan, mu1, mu2, params);
  return sol;
}

ConePlan lift_to_cone(const HKSolution& sol) {
  ConePlan beta;
  beta.entries.reserve(sol.plan.entries.size());
  for (const PlanEntry& e : sol.plan.entries) {
    beta.entries.push_back({ConePoint(sol.mu1.points[e.i], std::sqrt(sol.rho0[e.i])),
                            ConePoint(sol.mu2.points[e.j], std::sqrt(sol.rho_star[e.j])),
                            e.mass});
  }
  return beta;
}

DiscreteMeasure homogeneous_marginal(const ConePlan& beta, Side side) {
  std::vector<Vec> pts;
  std::vector<double> wts;
  std::map<Vec, std::size_t> seen;
  for (const ConePlanEntry& e : beta.entries) {
    const ConePoint& cp = side == Side::First ? e.first : e.second;
    const double w = cp.r * cp.r * e.mass;
    auto it = seen.find(cp.x);
    if (it == seen.end()) {
      seen.emplace(cp.x, pts.size());
      pts.push_back(cp.x);
      wts.push_back(w);
    } else {
      wts[it->second] += w;
    }
  }
  return DiscreteMeasure(std::move(pts), std::move(wts));
}

double hk_tiny_oracle(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                      const Params& params) {
  if (mu1.size() > 4 || mu2.size() > 4)
    throw std::invalid_argument("hk_tiny_oracle: supports of size <= 4 only");
  const double lam = params.entropy_weight();
  const int m = static_cast<int>(mu1.size());
  const int n = static_cast<int>(mu2.size());

  std::vector<double> cost(static_cast<std::size_t>(m) * n, kInf);
  std::vector<char> active(static_cast<std::size_t>(m) * n, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      if (mu1.weights[i] <= 0.0 || mu2.weights[j] <= 0.0) continue;
      const double c = transport_cost(dist(mu1.points[i], mu2.points[j]), params);
      if (c < kInf) {
        cost[i * n + j] = c;
        active[i * n + j] = 1;
      }
    }

  auto objective = [&](const std::vector<double>& gmm) {
    TransportPlan plan;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (gmm[i * n + j] > 0.0) plan.entries.push_back({i, j, gmm[i * n + j]});
    return let_objective(plan, mu1, mu2, params);
  };

  auto coordinate_descent = [&](std::vector<double> gmm) {
    std::vector<double> g1(m, 0.0), g2(n, 0.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        g1[i] += gmm[i * n + j];
        g2[j] += gmm[i * n + j];
      }
    const double mass_scale = total_mass(mu1) + total_mass(mu2);
    for (int sweep = 0; sweep < 20000; ++sweep) {
      double change = 0.0;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          if (!active[i * n + j]) continue;
          const double old = gmm[i * n + j];
          const double G1 = g1[i] - old;
          const double G2 = g2[j] - old;
          const double K =
              mu1.weights[i] * mu2.weights[j] * std::exp(-cost[i * n + j] / lam);
          const double disc = (G1 - G2) * (G1 - G2) + 4.0 * K;
          double x = 0.5 * (-(G1 + G2) + std::sqrt(disc));
          if (x < 0.0) x = 0.0;
          gmm[i * n + j] = x;
          g1[i] = G1 + x;
          g2[j] = G2 + x;
          change = std::max(change, std::abs(x - old));
        }
      if (change <= 1e-13 * (1.0 + mass_scale)) break;
    }
    return objective(gmm);
  };

  // Multi-start: empty plan, scaled independent coupling, greedy pairing.
  double best = objective(std::vector<double>(static_cast<std::size_t>(m) * n, 0.0));
  {
    std::vector<double> gmm(static_cast<std::size_t>(m) * n, 0.0);
    const double m2 = total_mass(mu2);
    if (m2 > 0.0)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
          if (active[i * n + j]) gmm[i * n + j] = mu1.weights[i] * mu2.weights[j] / m2;
    best = std::min(best, coordinate_descent(std::move(gmm)));
  }
  {
    std::vector<double> gmm(static_cast<std::size_t>(m) * n, 0.0);
    for (int i = 0; i < m; ++i) {
      int jbest = -1;
      double cbest = kInf;
      for (int j = 0; j < n; ++j)
        if (active[i * n + j] && cost[i * n + j] < cbest) {
          cbest = cost[i * n + j];
          jbest = j;
        }
      if (jbest >= 0) gmm[i * n + jbest] = mu1.weights[i];
    }
    best = std::min(best, coordinate_descent(std::move(gmm)));
  }
  return best;
}

}  // namespace hkflow
