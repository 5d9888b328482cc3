#include "hkflow/jko.hpp"

#include "hkflow/scaling.hpp"

namespace hkflow {

namespace {

struct StepWorkspace {
  detail::ScalingCore core;
  std::vector<int> rows, cols;      // active cell indices on each side
  std::vector<char> row_active;
  bool valid = false;
};

JkoStepResult step_impl(const GridDensity& prev, const EnergySpec& spec, const Params& params,
                        const SchemeConfig& cfg, StepWorkspace& ws, bool warm) {
  prev.validate();
  const double vol = prev.cell_volume();
  const double kappa = 2.0 / (cfg.tau * params.sigma);
  const double lam = params.entropy_weight();
  const double cutoff = params.cutoff_radius();
  const std::size_t ncells = prev.size();

  std::vector<Vec> centers(ncells);
  std::vector<double> Vc(ncells);
  for (std::size_t i = 0; i < ncells; ++i) {
    centers[i] = prev.center(i);
    Vc[i] = spec.V(centers[i]);
  }

  // Columns: cells carrying mass of the previous state. Rows: cells with a
  // finite-cost partner column; the rest decouple and take the g = 0 prox.
  std::vector<int> cols;
  for (std::size_t j = 0; j < ncells; ++j)
    if (prev.values[j] > 0.0) cols.push_back(static_cast<int>(j));
  std::vector<char> row_active(ncells, 0);
  std::vector<int> rows;
  for (std::size_t i = 0; i < ncells; ++i) {
    for (int j : cols)
      if (dist(centers[i], centers[j]) < cutoff) {
        row_active[i] = 1;
        break;
      }
    if (row_active[i]) rows.push_back(static_cast<int>(i));
  }

  JkoStepResult out;
  out.next = prev;

  std::vector<double> s(ncells);
  for (std::size_t i = 0; i < ncells; ++i) {
    if (!row_active[i]) {
      s[i] = jko_cell_prox(0.0, kappa, Vc[i], spec);
    } else {
      s[i] = std::max(prev.values[i], 1e-300);  // warm start for the density block
    }
  }

  int total_sweeps = 0;
  if (!rows.empty() && !cols.empty()) {
    const bool reuse = warm && ws.valid && ws.rows == rows && ws.cols == cols;
    detail::ScalingCore& core = ws.core;
    if (!reuse) {
      core.init(static_cast<int>(rows.size()), static_cast<int>(cols.size()), lam);
      for (std::size_t a = 0; a < rows.size(); ++a) {
        core.log_omega[a] = std::log(vol);
        for (std::size_t b = 0; b < cols.size(); ++b)
          core.cost[a * cols.size() + b] =
              transport_cost(dist(centers[rows[a]], centers[cols[b]]), params);
      }
      ws.rows = rows;
      ws.cols = cols;
      ws.valid = true;
    }
    for (std::size_t b = 0; b < cols.size(); ++b)
      core.log_b[b] = std::log(prev.values[cols[b]] * vol);
    for (std::size_t a = 0; a < rows.size(); ++a) core.log_ratio[a] = std::log(s[rows[a]]);

    // Warm-started steps only need the tail of the epsilon schedule.
    double eps0 = cfg.solver.eps_start;
    if (reuse)
      eps0 = std::min(cfg.solver.eps_start,
                      cfg.solver.eps_end / (cfg.solver.eps_factor * cfg.solver.eps_factor));

    double eps = eps0;
    bool final_level = false;
    while (!final_level) {
      if (eps <= cfg.solver.eps_end * (1.0 + 1e-12)) {
        eps = cfg.solver.eps_end;
        final_level = true;
      }
      core.eps = eps;
      const double pot_tol = final_level ? cfg.solver.dual_tol : std::max(cfg.solver.dual_tol, 1e-7);
      const double s_tol = final_level ? cfg.prox_tol : std::max(cfg.prox_tol, 1e-6);
      int it = 0;
      double res = kInf, s_change = kInf;
      while (it < cfg.solver.max_iters) {
        res = core.sweep();
        // Density block: per-cell prox at the current first marginal.
        s_change = 0.0;
        for (std::size_t a = 0; a < rows.size(); ++a) {
          const double lg1 = core.log_gamma1(static_cast<int>(a));
          const double gcell = lg1 == -kInf ? 0.0 : std::exp(lg1) / vol;
          const double sn = jko_cell_prox(gcell, kappa, Vc[rows[a]], spec);
          const double sold = s[rows[a]];
          s_change = std::max(s_change, std::abs(sn - sold) / (1.0 + std::abs(sold)));
          s[rows[a]] = sn;
          core.log_ratio[a] = sn > 0.0 ? std::log(sn) : -kInf;
        }
        ++it;
        if (res <= pot_tol && s_change <= s_tol) break;
      }
      total_sweeps += it;
      if (final_level && (res > pot_tol || s_change > s_tol))
        throw SolveError("jko_step: inner iteration did not converge", std::max(res, s_change));
      eps *= cfg.solver.eps_factor;
    }
  }

  out.next.values = s;
  out.sweeps = total_sweeps;

  // Assemble the coupling solution between next (first) and prev (second).
  HKSolution& sol = out.sol;
  sol.mu1 = out.next.to_measure();
  sol.mu2 = prev.to_measure();
  sol.gamma1.assign(ncells, 0.0);
  sol.gamma2.assign(ncells, 0.0);
  sol.plan.eps = cfg.solver.eps_end;
  sol.plan.f.assign(ncells, 0.0);
  sol.plan.g.assign(ncells, 0.0);
  if (!rows.empty() && !cols.empty()) {
    detail::ScalingCore& core = ws.core;
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
  {
    // Per-point decomposition of both sides against the plan marginals.
    LebesgueParts p1 = lebesgue_decompose(sol.mu1, DiscreteMeasure(sol.mu1.points, sol.gamma1,
                                                                   sol.mu1.domain));
    LebesgueParts p2 = lebesgue_decompose(sol.mu2, DiscreteMeasure(sol.mu2.points, sol.gamma2,
                                                                   sol.mu2.domain));
    sol.rho0 = std::move(p1.rho);
    sol.singular0 = std::move(p1.singular);
    sol.rho_star = std::move(p2.rho);
    sol.singular_star = std::move(p2.singular);
    sol.sigma1.assign(ncells, 0.0);
    sol.sigma2.assign(ncells, 0.0);
    for (std::size_t i = 0; i < ncells; ++i) {
      if (sol.mu1.weights[i] > 0.0) sol.sigma1[i] = sol.gamma1[i] / sol.mu1.weights[i];
      if (sol.mu2.weights[i] > 0.0) sol.sigma2[i] = sol.gamma2[i] / sol.mu2.weights[i];
    }
  }
  sol.hk2 = let_objective(sol.plan, sol.mu1, sol.mu2, params);
  out.step_hk2 = sol.hk2;
  out.cert_slack = energy_of(prev, spec) - energy_of(out.next, spec) -
                   out.step_hk2 / (2.0 * cfg.tau);
  return out;
}

}  // namespace

JkoStepResult jko_step(const GridDensity& prev, const EnergySpec& spec, const Params& params,
                       const SchemeConfig& cfg) {
  cfg.validate();
  StepWorkspace ws;
  return step_impl(prev, spec, params, cfg, ws, false);
}

Trajectory run_scheme(const GridDensity& u0, const EnergySpec& spec, const Params& params,
                      const SchemeConfig& cfg) {
  cfg.validate();
  u0.validate();
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.densities.push_back(u0);

  int n_steps = 0;
  if (cfg.T >= cfg.tau) n_steps = static_cast<int>(std::ceil(cfg.T / cfg.tau - 1e-12));

  GridDensity cur = u0;
  StepWorkspace ws;
  for (int n = 1; n <= n_steps; ++n) {
    JkoStepResult r;
    try {
      r = step_impl(cur, spec, params, cfg, ws, n > 1);
    } catch (const std::exception& e) {
      traj.completed = false;
      traj.error = e.what();
      return traj;
    }
    cur = r.next;
    const double t = n * cfg.tau;
    traj.step_time.push_back(t);
    traj.step_energy.push_back(energy_of(cur, spec));
    traj.step_mass.push_back(total_mass(cur));
    traj.step_hk2.push_back(r.step_hk2);
    traj.metric_derivative.push_back(std::sqrt(std::max(r.step_hk2, 0.0)) / cfg.tau);
    traj.cert_slack.push_back(r.cert_slack);
    traj.clamp_events.push_back(0);
    if (n % cfg.record_every == 0 || n == n_steps) {
      traj.times.push_back(t);
      traj.densities.push_back(cur);
    }
  }
  return traj;
}

DissipationReport dissipation_diagnostics(const Trajectory& traj, const EnergySpec& spec,
                                          const Params& params, double tau) {
  if (traj.densities.empty()) throw std::invalid_argument("dissipation_diagnostics: empty");
  DissipationReport rep;
  rep.constants = energy_bound_constants(spec, traj.densities.front().box(), params);
  const double lam = params.entropy_weight();

  for (double h : traj.step_hk2) rep.sum_step_hk2 += h;
  rep.metric_derivative_sum = tau > 0.0 ? rep.sum_step_hk2 / tau : 0.0;

  double sup_mass = total_mass(traj.densities.front());
  for (double m : traj.step_mass) sup_mass = std::max(sup_mass, m);
  rep.sup_hk2_to_null = lam * sup_mass;

  const double e0 = energy_of(traj.densities.front(), spec);
  const double eN = traj.step_energy.empty() ? e0 : traj.step_energy.back();
  const double massN =
      traj.step_mass.empty() ? total_mass(traj.densities.front()) : traj.step_mass.back();
  rep.dissipation_rhs =
      2.0 * tau * (e0 + rep.constants.A + rep.constants.B * lam * massN);
  rep.dissipation_holds = rep.sum_step_hk2 <= rep.dissipation_rhs + 1e-12 * (1.0 + std::abs(rep.dissipation_rhs));

  rep.energy_drop = e0 - eN;
  rep.energy_inequality_rhs = 0.5 * rep.metric_derivative_sum;
  const double slack = 1e-7 * (1.0 + std::abs(e0)) * std::max<std::size_t>(traj.step_hk2.size(), 1);
  rep.energy_inequality_holds = rep.energy_drop >= rep.energy_inequality_rhs - slack;
  return rep;
}

GridDensity jko_step_oracle(const GridDensity& prev, const EnergySpec& spec,
                            const Params& params, double tau) {
  prev.validate();
  if (prev.size() > 4)
    throw std::invalid_argument("jko_step_oracle: grids with <= 4 cells only");
  const double vol = prev.cell_volume();
  const std::size_t n = prev.size();
  const DiscreteMeasure prev_meas = prev.to_measure();

  auto phi = [&](const std::vector<double>& s) {
    GridDensity cand = prev;
    cand.values = s;
    const double hk2 = hk_tiny_oracle(cand.to_measure(), prev_meas, params);
    return energy_of(cand, spec) + hk2 / (2.0 * tau);
  };

  auto golden_1d = [&](std::vector<double> s, std::size_t k, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    s[k] = x1;
    double f1 = phi(s);
    s[k] = x2;
    double f2 = phi(s);
    for (int it = 0; it < 80; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        s[k] = x1;
        f1 = phi(s);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        s[k] = x2;
        f2 = phi(s);
      }
      if (b - a < 1e-10 * (1.0 + b)) break;
    }
    s[k] = 0.5 * (a + b);
    return s;
  };

  const double mass_level = std::max(total_mass(prev) / vol, 1.0);
  std::vector<std::vector<double>> starts;
  starts.push_back(prev.values);
  starts.push_back(std::vector<double>(n, total_mass(prev) / (vol * n)));
  {
    std::vector<double> half = prev.values;
    for (double& v : half) v *= 0.5;
    starts.push_back(std::move(half));
  }

  std::vector<double> best;
  double best_val = kInf;
  for (auto s : starts) {
    double val = phi(s);
    for (int sweep = 0; sweep < 60; ++sweep) {
      for (std::size_t k = 0; k < n; ++k) s = golden_1d(s, k, 0.0, 4.0 * mass_level + 1.0);
      const double nv = phi(s);
      if (val - nv < 1e-11 * (1.0 + std::abs(val))) {
        val = nv;
        break;
      }
      val = nv;
    }
    if (val < best_val) {
      best_val = val;
      best = s;
    }
  }
  GridDensity out = prev;
  out.values = best;
  return out;
}

}  // namespace hkflow
