#include "lindchain/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lindchain/linalg.hpp"

namespace lindchain {

namespace {

constexpr double kEntropyDomainSlack = 1e-6;

// -x ln x - (1-x) ln(1-x), zero outside (0, 1).
double binary_entropy_nats(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
}

double binary_entropy_bits(double x) { return binary_entropy_nats(x) / std::numbers::ln2; }

}  // namespace

CMatrix reduced_block(const CorrelationState& state, int l) {
  if (l < 1 || l >= state.n_sites()) {
    std::ostringstream os;
    os << "reduced_block: l = " << l << " outside [1, " << state.n_sites() << ")";
    throw DomainError(os.str());
  }
  return state.C.topLeftCorner(l, l);
}

RVector block_spectrum(const CMatrix& block) { return hermitian_eigenvalues(block); }

double gaussian_entropy(const RVector& nu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    const double x = nu(i);
    if (!(x >= -kEntropyDomainSlack && x <= 1.0 + kEntropyDomainSlack)) {
      std::ostringstream os;
      os << "gaussian_entropy: eigenvalue " << x << " outside [0, 1]";
      throw DomainError(os.str());
    }
    s += binary_entropy_nats(x);
  }
  return s;
}

double block_entropy(const CorrelationState& state, int l) {
  return gaussian_entropy(block_spectrum(reduced_block(state, l)));
}

double entropy_trace_ratio_variant(const RVector& c_t, const RVector& c_0, double z_ratio) {
  if (c_t.size() != c_0.size()) throw DomainError("entropy_trace_ratio_variant: eigenvalue count mismatch");
  const auto xlogy = [](double x, double y, Eigen::Index sigma) {
    if (x == 0.0) return 0.0;
    if (y <= 0.0) {
      std::ostringstream os;
      os << "entropy_trace_ratio_variant: logarithm of nonpositive argument " << y << " at sigma = " << sigma;
      throw DomainError(os.str());
    }
    return x * std::log(y);
  };
  double s = 0.0;
  for (Eigen::Index i = 0; i < c_t.size(); ++i) {
    const double ct = c_t(i);
    s -= xlogy(ct, ct, i) - xlogy(ct, z_ratio - ct, i) + xlogy(z_ratio, 1.0 - c_0(i), i);
  }
  return s;
}

void validate_density_matrix(const CMatrix& rho, double tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw DomainError("density matrix must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) throw DomainError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - 1.0) > tol) {
    std::ostringstream os;
    os << "density matrix trace " << rho.trace().real() << " differs from 1";
    throw DomainError(os.str());
  }
  const double min_eig = hermitian_eigenvalues(rho).minCoeff();
  if (min_eig < -tol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << min_eig;
    throw DomainError(os.str());
  }
}

double von_neumann_entropy(const CMatrix& rho) {
  const RVector p = hermitian_eigenvalues(rho);
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) s -= p(i) * std::log(p(i));
  }
  return s;
}

CMatrix reduce_to_left(const CMatrix& rho, int total_qubits, int keep_qubits) {
  if (keep_qubits < 0 || keep_qubits > total_qubits) throw DomainError("reduce_to_left: bad qubit count");
  const Eigen::Index dim = Eigen::Index{1} << total_qubits;
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("reduce_to_left: dimension mismatch");
  const Eigen::Index dl = Eigen::Index{1} << keep_qubits;
  const Eigen::Index dr = dim / dl;
  CMatrix out = CMatrix::Zero(dl, dl);
  for (Eigen::Index b = 0; b < dr; ++b) out += rho.block(b * dl, b * dl, dl, dl);
  return out;
}

CMatrix reduce_to_right(const CMatrix& rho, int total_qubits, int drop_qubits) {
  if (drop_qubits < 0 || drop_qubits > total_qubits) throw DomainError("reduce_to_right: bad qubit count");
  const Eigen::Index dim = Eigen::Index{1} << total_qubits;
  if (rho.rows() != dim || rho.cols() != dim) throw DomainError("reduce_to_right: dimension mismatch");
  const Eigen::Index dl = Eigen::Index{1} << drop_qubits;
  const Eigen::Index dr = dim / dl;
  CMatrix out = CMatrix::Zero(dr, dr);
  for (Eigen::Index i = 0; i < dr; ++i) {
    for (Eigen::Index j = 0; j < dr; ++j) {
      Complex acc = 0.0;
      for (Eigen::Index a = 0; a < dl; ++a) acc += rho(i * dl + a, j * dl + a);
      out(i, j) = acc;
    }
  }
  return out;
}

double concurrence(const CMatrix& rho) {
  if (rho.rows() != 4) throw DomainError("concurrence: two-qubit state required");
  validate_density_matrix(rho);
  CMatrix yy = CMatrix::Zero(4, 4);
  // sigma_y (x) sigma_y in the n_A + 2 n_B basis.
  yy(0, 3) = -1.0;
  yy(3, 0) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  const CMatrix flipped = yy * rho.conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const RVector w = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho = es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
  const CMatrix m = sqrt_rho * flipped * sqrt_rho;
  RVector lam = hermitian_eigenvalues(m).cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double entanglement_of_formation(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy_bits(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
}

double mutual_information(const CMatrix& rho) {
  if (rho.rows() != 4) throw DomainError("mutual_information: two-qubit state required");
  validate_density_matrix(rho);
  return von_neumann_entropy(reduce_to_left(rho, 2, 1)) + von_neumann_entropy(reduce_to_right(rho, 2, 1)) -
         von_neumann_entropy(rho);
}

SpatialFit fit_spatial(const std::vector<EntropyRecord>& records, int L, int l_min) {
  std::vector<const EntropyRecord*> used;
  std::set<int> distinct;
  for (const auto& r : records) {
    if (r.l >= l_min && r.l <= L - l_min) {
      used.push_back(&r);
      distinct.insert(r.l);
    }
  }
  if (static_cast<int>(distinct.size()) < kSpatialFitMinPoints) {
    std::ostringstream os;
    os << "fit_spatial: " << distinct.size() << " distinct l in [" << l_min << ", " << L - l_min
       << "], need " << kSpatialFitMinPoints;
    throw DomainError(os.str());
  }
  RMatrix X(static_cast<Eigen::Index>(used.size()), 3);
  RVector y(static_cast<Eigen::Index>(used.size()));
  for (std::size_t i = 0; i < used.size(); ++i) {
    const double l = used[i]->l;
    const auto r = static_cast<Eigen::Index>(i);
    X(r, 0) = std::log(std::sin(std::numbers::pi * l / L));
    X(r, 1) = l;
    X(r, 2) = 1.0;
    y(r) = used[i]->S;
  }
  const LeastSquares ls = least_squares(X, y);
  return {ls.coefficients(0), ls.coefficients(1), ls.coefficients(2), ls.residual_rms,
          static_cast<int>(used.size())};
}

TemporalFit fit_temporal(const std::vector<double>& t, const std::vector<double>& S,
                         TemporalRegime regime, double offset) {
  if (t.size() != S.size()) throw DomainError("fit_temporal: t and S differ in length");
  const auto n = static_cast<Eigen::Index>(t.size());
  if (n < 3) throw DomainError("fit_temporal: need at least 3 samples");

  TemporalFit fit;
  fit.regime = regime;
  fit.points = static_cast<int>(n);
  RMatrix X(n, 2);
  RVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ti = t[static_cast<std::size_t>(i)];
    const double si = S[static_cast<std::size_t>(i)];
    if (!(ti > 0.0)) throw DomainError("fit_temporal: times must be positive");
    switch (regime) {
      case TemporalRegime::short_time:
        X(i, 0) = ti * std::log(1.0 / ti);
        X(i, 1) = ti;
        y(i) = si - offset;
        break;
      case TemporalRegime::long_time_gapped:
        if (!(si > 0.0)) throw DomainError("fit_temporal: nonpositive entropy in log fit");
        X(i, 0) = ti;
        X(i, 1) = 1.0;
        y(i) = std::log(si / ti);
        break;
      case TemporalRegime::long_time_gapless:
        if (!(si > 0.0)) throw DomainError("fit_temporal: nonpositive entropy in log fit");
        if (!(ti > 1.0)) throw DomainError("fit_temporal: gapless fit needs t > 1");
        X(i, 0) = std::log(ti);
        X(i, 1) = 1.0;
        y(i) = std::log(si / std::log(ti));
        break;
    }
  }
  const LeastSquares ls = least_squares(X, y);
  fit.r_squared = ls.r_squared;
  fit.residual_rms = ls.residual_rms;
  switch (regime) {
    case TemporalRegime::short_time:
      fit.A = ls.coefficients(0);
      fit.B = ls.coefficients(1);
      break;
    case TemporalRegime::long_time_gapped:
      fit.rate = -ls.coefficients(0);
      fit.intercept = ls.coefficients(1);
      break;
    case TemporalRegime::long_time_gapless:
      fit.power = ls.coefficients(0);
      fit.intercept = ls.coefficients(1);
      break;
  }
  return fit;
}

}  // namespace lindchain
