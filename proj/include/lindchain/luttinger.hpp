#pragma once

// Bosonized short-time dynamics of a lossy Luttinger liquid: the (b_q^dag,
// b_{-q}) equations of motion, leading-order pseudo-Bogoliubov coefficients
// and the resulting momentum-space (q, -q) entanglement.

#include <complex>
#include <vector>

#include "lindchain/types.hpp"

namespace lindchain {

struct LuttingerParams {
  double v = 1.0;      // sound velocity
  double g2 = 0.0;     // interaction strength
  double gamma = 0.0;  // loss rate
  std::vector<double> q_grid;
  std::vector<double> t_grid;

  /// v > 0, gamma >= 0, q > 0, t >= 0 and ascending grids.
  void validate() const;
};

/// (b_q^dag(t), b_{-q}(t))^T = M(t) (b_q^dag, b_{-q})^T with
///
///   d/dt b_q^dag = (-4 gamma + i v|q|) b_q^dag - i g2|q| b_{-q}
///   d/dt b_{-q}  = -i v|q| b_{-q} + i g2|q| b_q^dag
///
/// so that |u|^2 - |v|^2 (first row of M) is conserved at gamma = 0.
Eigen::Matrix2cd luttinger_generator(const LuttingerParams& p, double q);

struct EomSample {
  double t = 0.0;
  Eigen::Matrix2cd M;

  Complex u() const { return M(0, 0); }
  Complex v() const { return M(0, 1); }
};

/// Exact M(t) = exp(G t) on params.t_grid.
std::vector<EomSample> eom_integrate(const LuttingerParams& params, double q);

inline constexpr double kShortTimeValidity = 0.2;

struct BogoliubovPair {
  Complex u;
  Complex v_coef;
  Complex u_raw;  // before rescaling to |u|^2 + |v|^2 = 1
  Complex v_raw;
  double q = 0.0;
  double t = 0.0;
  double gamma = 0.0;
  bool outside_validity = false;  // t * max(4 gamma, v|q|) >= kShortTimeValidity
};

/// u = 1 + i v|q| t - 4 gamma t, v = -2 sqrt(2) i (gamma t)^{1/2}, rescaled so
/// that |u|^2 + |v|^2 = 1. Independent of g2.
BogoliubovPair bogoliubov_short_time(const LuttingerParams& params, double q, double t);

struct MseeResult {
  double S = 0.0;
  std::vector<double> per_mode;
  double decay_factor = 1.0;  // e^{-8 gamma t}, reported separately
};

/// Sum over modes of the binary entropy of n_q = |v_coef|^2. All pairs must
/// share t.
MseeResult msee_short_time(const std::vector<BogoliubovPair>& pairs);

struct GrowthFit {
  double A = 0.0;
  double r_squared = 0.0;
};

/// One-parameter least squares s(t) = A t ln(1/t).
GrowthFit fit_tlog_growth(const std::vector<double>& t, const std::vector<double>& s);

}  // namespace lindchain
