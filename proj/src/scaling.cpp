#include "hkflow/scaling.hpp"

namespace hkflow::detail {

void ScalingCore::init(int m_, int n_, double lambda_) {
  m = m_;
  n = n_;
  lambda = lambda_;
  cost.assign(static_cast<std::size_t>(m) * n, 0.0);
  log_b.assign(n, 0.0);
  log_omega.assign(m, 0.0);
  log_ratio.assign(m, 0.0);
  f.assign(m, 0.0);
  g.assign(n, 0.0);
  S.assign(m, 0.0);
  scratch_.assign(std::max(m, n), 0.0);
}

void ScalingCore::refresh_row_softmin() {
  for (int i = 0; i < m; ++i) {
    const double* crow = cost.data() + static_cast<std::size_t>(i) * n;
    double mx = -kInf;
    for (int j = 0; j < n; ++j) {
      const double c = crow[j];
      scratch_[j] = c == kInf ? -kInf : log_b[j] + (g[j] - c) / eps;
      mx = std::max(mx, scratch_[j]);
    }
    if (mx == -kInf) {
      S[i] = -kInf;
      continue;
    }
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
      if (scratch_[j] != -kInf) sum += std::exp(scratch_[j] - mx);
    S[i] = eps * (mx + std::log(sum));
  }
}

double ScalingCore::sweep() {
  const double theta = lambda / (lambda + eps);
  double res = 0.0;

  // Row update from the current g.
  refresh_row_softmin();
  for (int i = 0; i < m; ++i) {
    const double fn = theta * (eps * log_ratio[i] - S[i]);
    const double diff = (fn == f[i]) ? 0.0 : std::abs(fn - f[i]);
    if (std::isfinite(diff)) res = std::max(res, diff);
    f[i] = fn;
  }

  // Column update from the new f.
  for (int j = 0; j < n; ++j) {
    double mx = -kInf;
    for (int i = 0; i < m; ++i) {
      const double c = cost[static_cast<std::size_t>(i) * n + j];
      scratch_[i] = (c == kInf || f[i] == -kInf) ? -kInf : log_omega[i] + (f[i] - c) / eps;
      mx = std::max(mx, scratch_[i]);
    }
    double gn;
    if (mx == -kInf) {
      gn = 0.0;  // empty column cannot occur for active sets; keep potential fixed
    } else {
      double sum = 0.0;
      for (int i = 0; i < m; ++i)
        if (scratch_[i] != -kInf) sum += std::exp(scratch_[i] - mx);
      gn = -theta * eps * (mx + std::log(sum));
    }
    const double diff = (gn == g[j]) ? 0.0 : std::abs(gn - g[j]);
    if (std::isfinite(diff)) res = std::max(res, diff);
    g[j] = gn;
  }

  // Exact dual ascent over constant shifts (f + s, g + t).
  refresh_row_softmin();
  double lA = -kInf, lB = -kInf, lM = -kInf;
  for (int i = 0; i < m; ++i) {
    if (log_ratio[i] == -kInf) continue;
    const double la = log_omega[i] + log_ratio[i];
    lA = std::max(lA, la - f[i] / lambda);
  }
  {
    double mx = lA;
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
      if (log_ratio[i] == -kInf) continue;
      sum += std::exp(log_omega[i] + log_ratio[i] - f[i] / lambda - mx);
    }
    lA = mx + std::log(sum);
  }
  {
    double mx = -kInf;
    for (int j = 0; j < n; ++j) mx = std::max(mx, log_b[j] - g[j] / lambda);
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += std::exp(log_b[j] - g[j] / lambda - mx);
    lB = mx + std::log(sum);
  }
  {
    double mx = -kInf;
    for (int i = 0; i < m; ++i)
      if (S[i] != -kInf && f[i] != -kInf)
        mx = std::max(mx, log_omega[i] + (f[i] + S[i]) / eps);
    if (mx != -kInf) {
      double sum = 0.0;
      for (int i = 0; i < m; ++i)
        if (S[i] != -kInf && f[i] != -kInf)
          sum += std::exp(log_omega[i] + (f[i] + S[i]) / eps - mx);
      lM = mx + std::log(sum);
    }
  }
  if (lM != -kInf && lA != -kInf && lB != -kInf) {
    const double ratio = lambda / eps;
    const double lP = (lM + ratio * (lA + lB)) / (1.0 + 2.0 * ratio);
    const double sshift = lambda * (lA - lP);
    const double tshift = lambda * (lB - lP);
    for (int i = 0; i < m; ++i)
      if (f[i] != -kInf) f[i] += sshift;
    for (int j = 0; j < n; ++j) g[j] += tshift;
    for (int i = 0; i < m; ++i)
      if (S[i] != -kInf) S[i] += tshift;
    res = std::max(res, std::max(std::abs(sshift), std::abs(tshift)));
  }
  return res;
}

}  // namespace hkflow::detail
