#include "lindchain/luttinger.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "lindchain/linalg.hpp"

namespace lindchain {

void LuttingerParams::validate() const {
  if (!(v > 0.0)) throw DomainError("luttinger: v must be positive");
  if (!(gamma >= 0.0)) throw DomainError("luttinger: gamma must be non-negative");
  if (!std::isfinite(g2)) throw DomainError("luttinger: g2 must be finite");
  for (double q : q_grid) {
    if (!(q > 0.0)) throw DomainError("luttinger: momenta must be positive");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw DomainError("luttinger: times must be non-negative");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1])) throw DomainError("luttinger: time grid must increase");
  }
}

Eigen::Matrix2cd luttinger_generator(const LuttingerParams& p, double q) {
  const double aq = std::abs(q);
  Eigen::Matrix2cd G;
  G(0, 0) = Complex{-4.0 * p.gamma, p.v * aq};
  G(0, 1) = Complex{0.0, -p.g2 * aq};
  G(1, 0) = Complex{0.0, p.g2 * aq};
  G(1, 1) = Complex{0.0, -p.v * aq};
  return G;
}

std::vector<EomSample> eom_integrate(const LuttingerParams& params, double q) {
  params.validate();
  if (!(q > 0.0)) throw DomainError("eom_integrate: q must be positive");
  const Eigen::Matrix2cd G = luttinger_generator(params, q);
  std::vector<EomSample> out;
  out.reserve(params.t_grid.size());
  for (double t : params.t_grid) {
    const Eigen::Matrix2cd Gt = G * t;
    out.push_back({t, Gt.exp()});
  }
  return out;
}

BogoliubovPair bogoliubov_short_time(const LuttingerParams& params, double q, double t) {
  params.validate();
  if (!(q > 0.0)) throw DomainError("bogoliubov_short_time: q must be positive");
  if (!(t >= 0.0)) throw DomainError("bogoliubov_short_time: t must be non-negative");
  BogoliubovPair p;
  p.q = q;
  p.t = t;
  p.gamma = params.gamma;
  p.u_raw = Complex{1.0 - 4.0 * params.gamma * t, params.v * std::abs(q) * t};
  p.v_raw = Complex{0.0, -2.0 * std::sqrt(2.0) * std::sqrt(params.gamma * t)};
  const double norm = std::sqrt(std::norm(p.u_raw) + std::norm(p.v_raw));
  p.u = p.u_raw / norm;
  p.v_coef = p.v_raw / norm;
  p.outside_validity = t * std::max(4.0 * params.gamma, params.v * std::abs(q)) >= kShortTimeValidity;
  return p;
}

MseeResult msee_short_time(const std::vector<BogoliubovPair>& pairs) {
  MseeResult r;
  if (pairs.empty()) return r;
  const double t = pairs.front().t;
  for (const auto& p : pairs) {
    if (p.t != t) throw DomainError("msee_short_time: pairs must share a common time");
    const double n = std::norm(p.v_coef);
    if (!(n >= 0.0 && n <= 1.0)) {
      std::ostringstream os;
      os << "msee_short_time: occupation " << n << " outside [0, 1] at q = " << p.q;
      throw DomainError(os.str());
    }
    double s = 0.0;
    if (n > 0.0 && n < 1.0) s = -n * std::log(n) - (1.0 - n) * std::log1p(-n);
    r.per_mode.push_back(s);
    r.S += s;
  }
  r.decay_factor = std::exp(-8.0 * pairs.front().gamma * t);
  return r;
}

GrowthFit fit_tlog_growth(const std::vector<double>& t, const std::vector<double>& s) {
  if (t.size() != s.size() || t.size() < 2) throw DomainError("fit_tlog_growth: need matching samples");
  const auto n = static_cast<Eigen::Index>(t.size());
  RMatrix X(n, 1);
  RVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    if (!(ti > 0.0)) throw DomainError("fit_tlog_growth: times must be positive");
    X(i, 0) = ti * std::log(1.0 / ti);
    y(i) = s[static_cast<std::size_t>(i)];
  }
  const LeastSquares ls = least_squares(X, y);
  return {ls.coefficients(0), ls.r_squared};
}

}  // namespace lindchain
