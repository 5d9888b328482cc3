#include "hkflow/verification.hpp"

namespace hkflow {

Trajectory fd_reference_solve(const GridDensity& u0, const EnergySpec& spec, double lambda,
                              double sigma, double T, double dt_safety, int snapshots) {
  u0.validate();
  if (u0.dim() != 1)
    throw std::invalid_argument("fd_reference_solve: 1-D grids only");
  if (!(lambda >= 0.0) || !(sigma >= 0.0) || !(T >= 0.0) || !(dt_safety > 0.0))
    throw std::invalid_argument("fd_reference_solve: bad coefficients");

  const int n = u0.dims[0];
  const double dx = u0.spacing[0];
  std::vector<double> u = u0.values;
  std::vector<double> Vc(n), L(n), flux(n + 1, 0.0);
  for (int i = 0; i < n; ++i) Vc[i] = spec.V(u0.center(i));

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.densities.push_back(u0);
  const double snap_dt = snapshots > 0 ? T / snapshots : T;
  double next_snap = snap_dt;

  double t = 0.0;
  while (t < T - 1e-15) {
    double stiff = 0.0;
    for (int i = 0; i < n; ++i)
      if (u[i] > 0.0) stiff = std::max(stiff, u[i] * spec.F.Fpp(u[i]));
    double dt = dt_safety * dx * dx / (lambda * stiff + 1.0);
    dt = std::min(dt, T - t);

    for (int i = 0; i < n; ++i) L[i] = spec.F.L(u[i]);
    flux[0] = 0.0;
    flux[n] = 0.0;
    for (int k = 1; k < n; ++k) {
      const double uface = 0.5 * (u[k] + u[k - 1]);
      flux[k] = lambda * ((L[k] - L[k - 1]) / dx + uface * (Vc[k] - Vc[k - 1]) / dx);
    }
    for (int i = 0; i < n; ++i) {
      const double div = (flux[i + 1] - flux[i]) / dx;
      const double react = sigma * (spec.F.Lhat(u[i]) + Vc[i] * u[i]);
      u[i] += dt * (div - react);
      if (u[i] < -1e-12)
        throw std::runtime_error("fd_reference_solve: negativity, CFL violated");
      if (u[i] < 0.0) u[i] = 0.0;
    }
    t += dt;
    if (t >= next_snap - 1e-15 || t >= T - 1e-15) {
      GridDensity snap = u0;
      snap.values = u;
      traj.times.push_back(t);
      traj.densities.push_back(std::move(snap));
      while (next_snap <= t + 1e-15) next_snap += snap_dt;
    }
  }
  return traj;
}

namespace {

// d/dx L_F(u) at cell centers: central differences, one-sided at the domain
// boundary and next to vacuum cells.
std::vector<double> grad_L(const std::vector<double>& u, const EnergySpec& spec, double dx) {
  const int n = static_cast<int>(u.size());
  std::vector<double> L(n), g(n, 0.0);
  for (int i = 0; i < n; ++i) L[i] = spec.F.L(u[i]);
  for (int i = 0; i < n; ++i) {
    const bool has_left = i > 0 && !(u[i - 1] == 0.0 && u[i] > 0.0);
    const bool has_right = i < n - 1 && !(u[i + 1] == 0.0 && u[i] > 0.0);
    if (has_left && has_right) g[i] = (L[i + 1] - L[i - 1]) / (2.0 * dx);
    else if (has_right) g[i] = (L[i + 1] - L[i]) / dx;
    else if (has_left) g[i] = (L[i] - L[i - 1]) / dx;
  }
  return g;
}

// 4-point Gauss-Legendre nodes/weights on [0,1].
constexpr double kGaussX[4] = {0.0694318442029737, 0.3300094782075719, 0.6699905217924281,
                               0.9305681557970263};
constexpr double kGaussW[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731,
                               0.1739274225687269};

}  // namespace

double weak_form_residual(const Trajectory& traj, const TestFunctionST& psi,
                          const EnergySpec& spec, const Params& params, const GridDensity& u0) {
  if (traj.densities.empty() || traj.times.empty())
    throw std::invalid_argument("weak_form_residual: empty trajectory");
  if (traj.times.back() < psi.T_psi - 1e-12)
    throw std::invalid_argument("weak_form_residual: trajectory does not cover T_psi");
  const GridDensity& grid = traj.densities.front();
  if (grid.dim() != 1)
    throw std::invalid_argument("weak_form_residual: 1-D grids only");
  const int n = grid.dims[0];
  const double dx = grid.spacing[0];

  std::vector<Vec> centers(n);
  std::vector<double> Vc(n), gVc(n);
  for (int i = 0; i < n; ++i) {
    centers[i] = grid.center(i);
    Vc[i] = spec.V(centers[i]);
    gVc[i] = spec.grad_V(centers[i])[0];
  }

  double I = 0.0;
  double dtpart = 0.0;
  for (std::size_t slab = 1; slab < traj.times.size(); ++slab) {
    const double t0 = traj.times[slab - 1];
    const double t1 = traj.times[slab];
    if (t0 >= psi.T_psi) break;
    const std::vector<double>& u = traj.densities[slab].values;
    const std::vector<double> gL = grad_L(u, spec, dx);

    for (int i = 0; i < n; ++i) {
      const double fluxd = params.lambda * (gL[i] + u[i] * gVc[i]);
      const double react = params.sigma * (spec.F.Lhat(u[i]) + Vc[i] * u[i]);
      double int_psi = 0.0, int_gpsi = 0.0;
      for (int gq = 0; gq < 4; ++gq) {
        const double tq = t0 + kGaussX[gq] * (t1 - t0);
        int_psi += kGaussW[gq] * psi.psi(tq, centers[i]);
        int_gpsi += kGaussW[gq] * psi.grad_psi(tq, centers[i])[0];
      }
      int_psi *= t1 - t0;
      int_gpsi *= t1 - t0;
      I += (fluxd * int_gpsi + react * int_psi) * dx;
      dtpart += u[i] * (psi.psi(t1, centers[i]) - psi.psi(t0, centers[i])) * dx;
    }
  }

  double initial = 0.0;
  for (int i = 0; i < n; ++i) initial += u0.values[i] * psi.psi(0.0, centers[i]) * dx;

  return std::abs(I - dtpart - initial);
}

std::vector<TestFunctionST> make_psi_battery(const Box& box, double T_psi) {
  if (box.dim() != 1) throw std::invalid_argument("make_psi_battery: 1-D domains only");
  const double a = box.lo[0], b = box.hi[0];
  const double len = b - a;

  // C^2 time cutoff: eta(t) = (1 - t/T)^3 for t < T, 0 after.
  auto eta = [T_psi](double t) {
    const double s = 1.0 - t / T_psi;
    return s > 0.0 ? s * s * s : 0.0;
  };
  auto deta = [T_psi](double t) {
    const double s = 1.0 - t / T_psi;
    return s > 0.0 ? -3.0 * s * s / T_psi : 0.0;
  };

  // C^2 interior bump on [a+m, b-m]: ((x-l)(r-x))^3 normalized.
  auto bump3 = [](double l, double r, double x) {
    if (x <= l || x >= r) return 0.0;
    const double h = 0.5 * (r - l);
    const double norm = h * h * h * h * h * h;
    const double w = (x - l) * (r - x);
    return w * w * w / norm;
  };
  auto dbump3 = [](double l, double r, double x) {
    if (x <= l || x >= r) return 0.0;
    const double h = 0.5 * (r - l);
    const double norm = h * h * h * h * h * h;
    const double w = (x - l) * (r - x);
    const double dw = (r - x) - (x - l);
    return 3.0 * w * w * dw / norm;
  };
  auto d2bump3 = [](double l, double r, double x) {
    if (x <= l || x >= r) return 0.0;
    const double h = 0.5 * (r - l);
    const double norm = h * h * h * h * h * h;
    const double w = (x - l) * (r - x);
    const double dw = (r - x) - (x - l);
    return (6.0 * w * dw * dw - 6.0 * w * w) / norm;
  };

  std::vector<TestFunctionST> battery;
  auto add = [&](std::string name, bool interior, std::function<double(double)> ft,
                 std::function<double(double)> dft, std::function<double(double)> fx,
                 std::function<double(double)> dfx, std::function<double(double)> d2fx) {
    TestFunctionST tf;
    tf.name = std::move(name);
    tf.T_psi = T_psi;
    tf.interior = interior;
    tf.psi = [ft, fx](double t, const Vec& x) { return ft(t) * fx(x[0]); };
    tf.dt_psi = [dft, fx](double t, const Vec& x) { return dft(t) * fx(x[0]); };
    tf.grad_psi = [ft, dfx](double t, const Vec& x) { return Vec{ft(t) * dfx(x[0])}; };
    tf.laplacian_psi = [ft, d2fx](double t, const Vec& x) { return ft(t) * d2fx(x[0]); };
    battery.push_back(std::move(tf));
  };

  const double m = 0.1 * len;
  // Interior class.
  add("int_bump", true, eta, deta,
      [=](double x) { return bump3(a + m, b - m, x); },
      [=](double x) { return dbump3(a + m, b - m, x); },
      [=](double x) { return d2bump3(a + m, b - m, x); });
  add("int_bump_left", true, eta, deta,
      [=](double x) { return bump3(a + m, a + 0.6 * len, x); },
      [=](double x) { return dbump3(a + m, a + 0.6 * len, x); },
      [=](double x) { return d2bump3(a + m, a + 0.6 * len, x); });
  {
    auto ft = [eta, T_psi](double t) { return (1.0 + t / T_psi) * eta(t); };
    auto dft = [eta, deta, T_psi](double t) {
      return eta(t) / T_psi + (1.0 + t / T_psi) * deta(t);
    };
    const double k = 3.0 * M_PI / len;
    add("int_bump_osc", true, ft, dft,
        [=](double x) { return bump3(a + m, b - m, x) * std::cos(k * (x - a)); },
        [=](double x) {
          return dbump3(a + m, b - m, x) * std::cos(k * (x - a)) -
                 k * bump3(a + m, b - m, x) * std::sin(k * (x - a));
        },
        [=](double x) {
          return d2bump3(a + m, b - m, x) * std::cos(k * (x - a)) -
                 2.0 * k * dbump3(a + m, b - m, x) * std::sin(k * (x - a)) -
                 k * k * bump3(a + m, b - m, x) * std::cos(k * (x - a));
        });
  }
  {
    auto ft = [eta, T_psi](double t) { return (1.0 - 0.5 * t / T_psi + (t / T_psi) * (t / T_psi)) * eta(t); };
    auto dft = [eta, deta, T_psi](double t) {
      const double s = t / T_psi;
      return (-0.5 / T_psi + 2.0 * s / T_psi) * eta(t) + (1.0 - 0.5 * s + s * s) * deta(t);
    };
    add("int_bump_right", true, ft, dft,
        [=](double x) { return bump3(a + 0.4 * len, b - m, x); },
        [=](double x) { return dbump3(a + 0.4 * len, b - m, x); },
        [=](double x) { return d2bump3(a + 0.4 * len, b - m, x); });
  }

  // Full class (nonzero near the boundary).
  add("full_const", false, eta, deta, [](double) { return 1.0; }, [](double) { return 0.0; },
      [](double) { return 0.0; });
  add("full_linear", false, eta, deta,
      [=](double x) { return (x - a) / len; },
      [=](double) { return 1.0 / len; }, [](double) { return 0.0; });
  {
    auto ft = [eta, T_psi](double t) { return (1.0 + 0.5 * t / T_psi) * eta(t); };
    auto dft = [eta, deta, T_psi](double t) {
      return 0.5 * eta(t) / T_psi + (1.0 + 0.5 * t / T_psi) * deta(t);
    };
    add("full_quad", false, ft, dft,
        [=](double x) { const double s = (x - a) / len; return 1.0 + s * s; },
        [=](double x) { return 2.0 * (x - a) / (len * len); },
        [=](double) { return 2.0 / (len * len); });
  }
  return battery;
}

SlopeBound slope_lower_bound_check(const Params& params, const Box& domain) {
  const int d = domain.dim();
  if (d != 1 && d != 2)
    throw std::invalid_argument("slope_lower_bound_check: d in {1,2} only");
  const double vol = domain.volume();
  const InternalEnergy F = InternalEnergy::power_law(1.0, 1.0, 2.0, 0.5);

  SlopeBound out;
  out.bound = 0.5 * std::sqrt(params.sigma * vol);
  for (int k = 1; k <= 6; ++k) {
    const double N = std::pow(10.0, k);
    const double uN = 1.0 / N;
    const double energy = F.F(uN) * vol;  // negative for large N
    const double hk = std::sqrt(params.entropy_weight() * uN * vol);
    const double ratio = -energy / hk;
    out.estimate = std::max(out.estimate, ratio);
  }
  return out;
}

}  // namespace hkflow
