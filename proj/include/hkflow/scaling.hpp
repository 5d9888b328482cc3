#pragma once

#include "hkflow/common.hpp"

namespace hkflow::detail {

/// Log-domain alternating dual ascent for entropy-transport problems of the
/// form
///   min_gamma  lambda KL(gamma_1 | a) + lambda KL(gamma_2 | b)
///              + <cost, gamma> + eps KL(gamma | omega x b),
/// with gamma_ij = omega_i b_j exp((f_i + g_j - c_ij)/eps). The target row
/// masses a_i enter through log_ratio_i = log(a_i / omega_i); solve paths with
/// a == omega use log_ratio = 0. Each sweep performs the two closed-form
/// potential updates plus an exact two-scalar translation (a dual ascent step
/// over constant shifts of f and g) that removes the slow global mass mode.
struct ScalingCore {
  int m = 0, n = 0;
  double lambda = 1.0;
  double eps = 1.0;
  std::vector<double> cost;       // m*n row-major, +inf allowed
  std::vector<double> log_b;      // n
  std::vector<double> log_omega;  // m, row reference masses
  std::vector<double> log_ratio;  // m, log(a_i/omega_i); may be -inf
  std::vector<double> f, g;       // potentials

  std::vector<double> S;  // row softmins w.r.t. current g (valid after sweep)

  void init(int m_, int n_, double lambda_);

  /// One full update (f, g, translation). Returns the sup-norm change of the
  /// potentials over the sweep; after it returns, S matches the current g.
  double sweep();

  /// log gamma_1 for the current potentials (requires fresh S, i.e. call
  /// right after sweep()).
  double log_gamma1(int i) const { return log_omega[i] + (f[i] + S[i]) / eps; }

  /// log of a single plan entry.
  double log_entry(int i, int j) const {
    const double c = cost[static_cast<std::size_t>(i) * n + j];
    if (c == kInf) return -kInf;
    return log_omega[i] + log_b[j] + (f[i] + g[j] - c) / eps;
  }

 private:
  std::vector<double> scratch_;
  void refresh_row_softmin();
};

}  // namespace hkflow::detail
