#include "hkflow/config.hpp"

#include <fstream>

#include <json.hpp>

#include "hkflow/io.hpp"

namespace hkflow {

namespace {

using nlohmann::json;

Vec to_vec(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("config: expected an array of numbers");
  Vec v;
  for (const auto& e : j) v.push_back(e.get<double>());
  return v;
}

EnergySpec parse_energy(const json& j, const Box& box, const std::vector<int>& dims) {
  if (!j.contains("F")) throw std::invalid_argument("config: energy.F missing");
  const json& jf = j.at("F");
  const std::string family = jf.at("family").get<std::string>();
  InternalEnergy F;
  if (family == "log_entropy") {
    F = InternalEnergy::log_entropy(jf.value("c1", 1.0));
  } else if (family == "power_law") {
    F = InternalEnergy::power_law(jf.value("c1", 0.0), jf.value("c2", 1.0),
                                  jf.value("p", 2.0), jf.value("q", 0.5));
  } else {
    throw std::invalid_argument("config: unknown energy family '" + family + "'");
  }
  EnergySpec spec(F);

  if (j.contains("V")) {
    const json& jv = j.at("V");
    const std::string kind = jv.at("kind").get<std::string>();
    if (kind == "zero") {
      // defaults already zero
    } else if (kind == "affine") {
      const Vec a = to_vec(jv.at("a"));
      const double b = jv.value("b", 0.0);
      spec.V = [a, b](const Vec& x) { return dot(a, x) + b; };
      spec.grad_V = [a](const Vec&) { return a; };
    } else if (kind == "csv") {
      const std::string path = jv.at("path").get<std::string>();
      const std::vector<double> vals = read_grid_values_csv(path);
      GridDensity vg = make_grid(box, dims, 0.0);
      if (vals.size() != vg.size())
        throw std::invalid_argument("config: V csv size does not match the grid");
      for (std::size_t i = 0; i < vals.size(); ++i)
        vg.values[i] = vals[i];  // may be signed; interpolation only
      const double dx = vg.spacing[0];
      spec.V = [vg](const Vec& x) { return vg.interpolate(x); };
      spec.grad_V = [vg, dx](const Vec& x) {
        Vec g(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
          Vec xp = x, xm = x;
          xp[k] += 0.5 * dx;
          xm[k] -= 0.5 * dx;
          g[k] = (vg.interpolate(xp) - vg.interpolate(xm)) / dx;
        }
        return g;
      };
    } else {
      throw std::invalid_argument("config: unknown V kind '" + kind + "'");
    }
  }
  GridDensity probe = make_grid(box, dims, 0.0);
  certify_V_bounds(spec, probe);
  return spec;
}

GridDensity parse_initial(const json& j, const Box& box, const std::vector<int>& dims) {
  const std::string kind = j.value("kind", "uniform");
  if (kind == "uniform") {
    return make_grid(box, dims, j.value("level", 1.0));
  }
  if (kind == "cosine") {
    const double base = j.value("base", 1.0);
    const double amp = j.value("amp", 0.5);
    const double len = box.hi[0] - box.lo[0];
    const double lo = box.lo[0];
    return sample_grid(box, dims, [=](const Vec& x) {
      return base + amp * std::cos(M_PI * (x[0] - lo) / len);
    });
  }
  if (kind == "bump") {
    const double base = j.value("base", 0.1);
    const double amp = j.value("amp", 1.0);
    const double c = j.value("center", 0.5 * (box.lo[0] + box.hi[0]));
    const double w = j.value("width", 0.2 * (box.hi[0] - box.lo[0]));
    return sample_grid(box, dims, [=](const Vec& x) {
      const double r = (x[0] - c) / w;
      return base + amp * std::exp(-0.5 * r * r);
    });
  }
  if (kind == "csv") {
    const std::string path = j.at("path").get<std::string>();
    GridDensity g = make_grid(box, dims, 0.0);
    const std::vector<double> vals = read_grid_values_csv(path);
    if (vals.size() != g.size())
      throw std::invalid_argument("config: initial csv size does not match the grid");
    g.values = vals;
    g.validate();
    return g;
  }
  throw std::invalid_argument("config: unknown initial kind '" + kind + "'");
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }

  RunConfig cfg;
  const json& jd = j.at("domain");
  cfg.domain.lo = to_vec(jd.at("lo"));
  cfg.domain.hi = to_vec(jd.at("hi"));
  if (cfg.domain.lo.size() != cfg.domain.hi.size() || cfg.domain.lo.empty())
    throw std::invalid_argument("config: domain lo/hi mismatch");
  for (std::size_t k = 0; k < cfg.domain.lo.size(); ++k)
    if (!(cfg.domain.lo[k] < cfg.domain.hi[k]))
      throw std::invalid_argument("config: domain box must have positive extent");

  for (const auto& e : j.at("grid").at("dims")) cfg.dims.push_back(e.get<int>());
  if (cfg.dims.size() != cfg.domain.lo.size())
    throw std::invalid_argument("config: grid dims must match the domain dimension");

  const json& jp = j.at("params");
  cfg.params = Params(jp.at("lambda").get<double>(), jp.at("sigma").get<double>());

  cfg.energy = parse_energy(j.at("energy"), cfg.domain, cfg.dims);

  if (j.contains("scheme")) {
    const json& js = j.at("scheme");
    cfg.scheme.tau = js.value("tau", cfg.scheme.tau);
    cfg.scheme.T = js.value("T", cfg.scheme.T);
    cfg.scheme.prox_tol = js.value("prox_tol", cfg.scheme.prox_tol);
    cfg.scheme.outer_max_iters = js.value("outer_max_iters", cfg.scheme.outer_max_iters);
    cfg.scheme.record_every = js.value("record_every", cfg.scheme.record_every);
    if (js.contains("solver")) {
      const json& jv = js.at("solver");
      cfg.scheme.solver.eps_start = jv.value("eps_start", cfg.scheme.solver.eps_start);
      cfg.scheme.solver.eps_end = jv.value("eps_end", cfg.scheme.solver.eps_end);
      cfg.scheme.solver.eps_factor = jv.value("eps_factor", cfg.scheme.solver.eps_factor);
      cfg.scheme.solver.max_iters = jv.value("max_iters", cfg.scheme.solver.max_iters);
      cfg.scheme.solver.dual_tol = jv.value("dual_tol", cfg.scheme.solver.dual_tol);
    }
    cfg.scheme.validate();
  }

  cfg.initial = parse_initial(j.value("initial", json{{"kind", "uniform"}}), cfg.domain,
                              cfg.dims);

  cfg.seed = j.value("seed", 1ul);
  cfg.out_dir = j.value("out", std::string("out"));

  if (j.contains("verify")) {
    const json& jv = j.at("verify");
    if (jv.contains("taus"))
      for (const auto& e : jv.at("taus")) cfg.verify_taus.push_back(e.get<double>());
    cfg.psi_horizon = jv.value("psi_horizon", 0.0);
  }
  if (cfg.verify_taus.empty()) cfg.verify_taus = {cfg.scheme.tau};
  if (cfg.psi_horizon <= 0.0) cfg.psi_horizon = 0.8 * cfg.scheme.T;

  if (j.contains("subdiff")) {
    const json& jv = j.at("subdiff");
    cfg.subdiff_instances = jv.value("instances", cfg.subdiff_instances);
    if (jv.contains("h"))
      for (const auto& e : jv.at("h")) cfg.subdiff_h.push_back(e.get<double>());
    cfg.margin_cells = jv.value("margin_cells", cfg.margin_cells);
  }
  if (cfg.subdiff_h.empty()) cfg.subdiff_h = {1e-2, 1e-3, 1e-4};
  return cfg;
}

}  // namespace hkflow
