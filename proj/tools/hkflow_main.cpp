#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkflow/config.hpp"
#include "hkflow/io.hpp"
#include "hkflow/parallel.hpp"
#include "hkflow/subdiff.hpp"
#include "hkflow/svg.hpp"
#include "hkflow/verification.hpp"

namespace {

using nlohmann::json;
using namespace hkflow;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;

std::string format_csv_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int run_hk_dist(const std::string& mu1_path, const std::string& mu2_path, double lambda,
                double sigma, double eps_end, const std::string& out_path) {
  const DiscreteMeasure mu1 = read_measure_csv(mu1_path);
  const DiscreteMeasure mu2 = read_measure_csv(mu2_path);
  const Params params(lambda, sigma);
  SolverConfig cfg;
  cfg.eps_end = eps_end;
  const HKSolution sol = solve_hk(mu1, mu2, params, cfg);
  json out{{"hk2", sol.hk2},
           {"iterations", sol.iterations},
           {"dual_residual", sol.dual_residual},
           {"singular_mass_0", total_mass(sol.singular0)},
           {"singular_mass_1", total_mass(sol.singular_star)}};
  const std::string text = out.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    atomic_write(out_path, text);
  return kExitOk;
}

std::string diagnostics_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "n,t,energy,mass,step_hk2,metric_derivative\n";
  for (std::size_t k = 0; k < traj.step_time.size(); ++k) {
    os << k + 1 << ',' << format_csv_double(traj.step_time[k]) << ','
       << format_csv_double(traj.step_energy[k]) << ','
       << format_csv_double(traj.step_mass[k]) << ','
       << format_csv_double(traj.step_hk2[k]) << ','
       << format_csv_double(traj.metric_derivative[k]) << '\n';
  }
  return os.str();
}

int run_jko(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const Trajectory traj = run_scheme(cfg.initial, cfg.energy, cfg.params, cfg.scheme);

  for (std::size_t k = 0; k < traj.densities.size(); ++k) {
    std::ostringstream name;
    name << cfg.out_dir << "/density_" << std::setw(4) << std::setfill('0') << k << ".csv";
    write_grid_csv(name.str(), traj.densities[k]);
  }
  atomic_write(cfg.out_dir + "/diagnostics.csv", diagnostics_csv(traj));

  const DissipationReport rep =
      dissipation_diagnostics(traj, cfg.energy, cfg.params, cfg.scheme.tau);
  json summary{{"completed", traj.completed},
               {"steps", traj.step_time.size()},
               {"tau", cfg.scheme.tau},
               {"T", cfg.scheme.T},
               {"final_mass", traj.step_mass.empty() ? total_mass(cfg.initial)
                                                     : traj.step_mass.back()},
               {"final_energy", traj.step_energy.empty() ? energy_of(cfg.initial, cfg.energy)
                                                         : traj.step_energy.back()},
               {"sum_step_hk2", rep.sum_step_hk2},
               {"dissipation_rhs", rep.dissipation_rhs},
               {"dissipation_holds", rep.dissipation_holds},
               {"energy_drop", rep.energy_drop},
               {"energy_inequality_holds", rep.energy_inequality_holds}};
  if (!traj.completed) summary["error"] = traj.error;
  atomic_write(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");
  return traj.completed ? kExitOk : kExitSolver;
}

int run_verify(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const auto battery = make_psi_battery(cfg.domain, cfg.psi_horizon);

  // Scheme runs for each tau, in parallel, plus one reference solve.
  std::vector<Trajectory> runs(cfg.verify_taus.size());
  std::vector<std::string> errors(cfg.verify_taus.size());
  parallel_for(static_cast<int>(cfg.verify_taus.size()), [&](int k) {
    SchemeConfig sc = cfg.scheme;
    sc.tau = cfg.verify_taus[k];
    sc.record_every = 1;
    try {
      runs[k] = run_scheme(cfg.initial, cfg.energy, cfg.params, sc);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < runs.size(); ++k) {
    if (!errors[k].empty()) throw SolveError("verify: scheme run failed: " + errors[k], 0.0);
    if (!runs[k].completed)
      throw SolveError("verify: scheme run failed: " + runs[k].error, 0.0);
  }
  const Trajectory ref = fd_reference_solve(cfg.initial, cfg.energy, cfg.params.lambda,
                                            cfg.params.sigma, cfg.scheme.T);

  std::ostringstream os;
  os << "psi_id,tau,residual\n";
  for (std::size_t k = 0; k < runs.size(); ++k)
    for (const auto& psi : battery) {
      const double r = weak_form_residual(runs[k], psi, cfg.energy, cfg.params, cfg.initial);
      os << psi.name << ',' << format_csv_double(cfg.verify_taus[k]) << ','
         << format_csv_double(r) << '\n';
    }
  atomic_write(cfg.out_dir + "/residuals.csv", os.str());

  // Final-density comparison plot: reference vs the finest-tau run.
  std::vector<SvgSeries> series;
  {
    SvgSeries s;
    s.label = "reference";
    const GridDensity& u = ref.densities.back();
    for (std::size_t i = 0; i < u.size(); ++i) {
      s.x.push_back(u.center(i)[0]);
      s.y.push_back(u.values[i]);
    }
    series.push_back(std::move(s));
  }
  std::size_t finest = 0;
  for (std::size_t k = 1; k < cfg.verify_taus.size(); ++k)
    if (cfg.verify_taus[k] < cfg.verify_taus[finest]) finest = k;
  {
    SvgSeries s;
    s.label = "scheme tau=" + std::to_string(cfg.verify_taus[finest]);
    const GridDensity& u = runs[finest].densities.back();
    for (std::size_t i = 0; i < u.size(); ++i) {
      s.x.push_back(u.center(i)[0]);
      s.y.push_back(u.values[i]);
    }
    series.push_back(std::move(s));
  }
  write_line_chart(cfg.out_dir + "/final_density.svg", series, "final density");
  return kExitOk;
}

int run_subdiff_check(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Box& box = cfg.domain;
  const int d = box.dim();

  auto random_measure = [&](int npts) {
    std::vector<Vec> pts(npts);
    std::vector<double> w(npts);
    for (int i = 0; i < npts; ++i) {
      Vec x(d);
      for (int k = 0; k < d; ++k)
        x[k] = box.lo[k] + (0.1 + 0.8 * unif(rng)) * (box.hi[k] - box.lo[k]);
      pts[i] = std::move(x);
      w[i] = 0.2 + unif(rng);
    }
    return DiscreteMeasure(std::move(pts), std::move(w), box);
  };

  std::ostringstream os;
  os << "instance,h,quotient,element,pass\n";
  for (int inst = 0; inst < cfg.subdiff_instances; ++inst) {
    const DiscreteMeasure nu0 = random_measure(4 + static_cast<int>(unif(rng) * 4));
    const DiscreteMeasure mu = random_measure(4 + static_cast<int>(unif(rng) * 4));
    const double amp_v = 0.5 * unif(rng);
    const double amp_R = 0.5 + unif(rng);
    PerturbationField field;
    field.interior_support = true;
    field.v = [&box, amp_v, d](const Vec& x) {
      Vec out(d, 0.0);
      for (int k = 0; k < d; ++k) {
        const double s = (x[k] - box.lo[k]) / (box.hi[k] - box.lo[k]);
        out[k] = amp_v * s * s * (1.0 - s) * (1.0 - s) * 16.0;
      }
      return out;
    };
    field.R = [amp_R](const Vec& x) { return amp_R * std::cos(3.0 * x[0]); };

    const HKSolution sol = solve_hk(nu0, mu, cfg.params, cfg.scheme.solver);
    const double element = superdiff_element(sol, field, cfg.params);
    const double tol = 1e-3 * (1.0 + sol.hk2);
    for (double habs : cfg.subdiff_h)
      for (double h : {habs, -habs}) {
        const DiscreteMeasure nuh = perturb(nu0, field, h);
        const HKSolution solh = solve_hk(nuh, mu, cfg.params, cfg.scheme.solver);
        const double quotient = (-0.5 * solh.hk2 + 0.5 * sol.hk2) / h;
        const double slack = (-0.5 * solh.hk2 + 0.5 * sol.hk2 - h * element) / std::abs(h);
        const bool pass = slack >= -tol;
        os << inst << ',' << format_csv_double(h) << ',' << format_csv_double(quotient) << ','
           << format_csv_double(element) << ',' << (pass ? 1 : 0) << '\n';
      }
  }
  atomic_write(cfg.out_dir + "/subdiff.csv", os.str());
  return kExitOk;
}

int run_cone(double lambda, double sigma, const std::vector<double>& x1, double r1,
             const std::vector<double>& x2, double r2) {
  const Params params(lambda, sigma);
  if (x1.size() != x2.size()) throw std::invalid_argument("cone: x1/x2 dimension mismatch");
  const ConePoint p(x1, r1), q(x2, r2);
  json out{{"cone_distance", cone_distance(p, q, params)},
           {"spatial_distance", dist(x1, x2)},
           {"transport_cost", transport_cost(dist(x1, x2), params) == kInf
                                  ? json("inf")
                                  : json(transport_cost(dist(x1, x2), params))}};
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hellinger-Kantorovich distances and minimizing-movement runs"};
  app.require_subcommand(1);

  std::string mu1_path, mu2_path, config_path, out_path;
  double lambda = 1.0, sigma = 1.0, eps_end = 1e-4, r1 = 1.0, r2 = 1.0;
  std::vector<double> x1, x2;

  auto* hk = app.add_subcommand("hk-dist", "squared distance between two point clouds");
  hk->add_option("--mu1", mu1_path, "first measure CSV")->required();
  hk->add_option("--mu2", mu2_path, "second measure CSV")->required();
  hk->add_option("--lambda", lambda, "transport weight")->required();
  hk->add_option("--sigma", sigma, "reaction weight")->required();
  hk->add_option("--eps-end", eps_end, "final regularization");
  hk->add_option("--out", out_path, "write the JSON result here instead of stdout");

  auto* jko = app.add_subcommand("jko-run", "minimizing-movement scheme run");
  jko->add_option("--config", config_path, "JSON run config")->required();
  jko->add_option("--out", out_path, "output directory (overrides config)");

  auto* verify = app.add_subcommand("verify", "weak-form residuals and reference comparison");
  verify->add_option("--config", config_path, "JSON run config")->required();
  verify->add_option("--out", out_path, "output directory (overrides config)");

  auto* subdiff = app.add_subcommand("subdiff-check", "perturbation inequality battery");
  subdiff->add_option("--config", config_path, "JSON run config")->required();
  subdiff->add_option("--out", out_path, "output directory (overrides config)");

  auto* cone = app.add_subcommand("cone", "cone distance between [x1,r1] and [x2,r2]");
  cone->add_option("--lambda", lambda, "transport weight")->required();
  cone->add_option("--sigma", sigma, "reaction weight")->required();
  cone->add_option("--x1", x1, "first spatial point")->required();
  cone->add_option("--r1", r1, "first radius")->required();
  cone->add_option("--x2", x2, "second spatial point")->required();
  cone->add_option("--r2", r2, "second radius")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (hk->parsed()) return run_hk_dist(mu1_path, mu2_path, lambda, sigma, eps_end, out_path);
    if (cone->parsed()) return run_cone(lambda, sigma, x1, r1, x2, r2);
    RunConfig cfg = load_run_config(config_path);
    if (!out_path.empty()) cfg.out_dir = out_path;
    if (jko->parsed()) return run_jko(cfg);
    if (verify->parsed()) return run_verify(cfg);
    if (subdiff->parsed()) return run_subdiff_check(cfg);
  } catch (const SolveError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
