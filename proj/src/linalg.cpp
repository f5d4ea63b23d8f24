#include "lindchain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace lindchain {

namespace {

// Eigen's complex Schur iteration allows this many sweeps per row.
constexpr int kSchurIterationsPerRow = 30;

constexpr double kEigenPathConditionLimit = 1e8;

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DomainError(std::string(what) + ": matrix must be square");
  }
}

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite matrix entries");
}

}  // namespace

std::vector<Complex> spectrum_numeric(const CMatrix& m) {
  require_square(m, "spectrum_numeric");
  require_finite(m, "spectrum_numeric");
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> es;
  es.setMaxIterations(kSchurIterationsPerRow * m.rows());
  es.compute(m, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "complex eigensolver did not converge within "
       << kSchurIterationsPerRow * m.rows() << " QR iterations";
    throw NumericalError(os.str());
  }
  const CVector& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

RVector hermitian_eigenvalues(const CMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  if (m.rows() == 0) return RVector{};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
  return es.eigenvalues();
}

Eigensystem eigensystem(const CMatrix& m) {
  require_square(m, "eigensystem");
  require_finite(m, "eigensystem");
  Eigen::ComplexEigenSolver<CMatrix> es;
  es.setMaxIterations(kSchurIterationsPerRow * m.rows());
  es.compute(m, true);
  if (es.info() != Eigen::Success) {
    std::ostringstream os;
    os << "complex eigensolver did not converge within "
       << kSchurIterationsPerRow * m.rows() << " QR iterations";
    throw NumericalError(os.str());
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double condition_number(const CMatrix& m) {
  require_square(m, "condition_number");
  if (m.rows() == 0) return 1.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

CMatrix matrix_exponential(const CMatrix& m, ExpMethod method) {
  require_square(m, "matrix_exponential");
  require_finite(m, "matrix_exponential");
  const auto n = m.rows();
  if (n == 0) return m;

  if (method != ExpMethod::pade) {
    const Eigensystem es = eigensystem(m);
    const double cond = condition_number(es.vectors);
    if (cond < kEigenPathConditionLimit) {
      const CVector expd = es.values.array().exp();
      CMatrix result = es.vectors * expd.asDiagonal() *
                       es.vectors.partialPivLu().inverse();
      if (!result.allFinite()) throw NumericalError("matrix exponential overflowed");
      return result;
    }
    if (method == ExpMethod::eigen) {
      std::ostringstream os;
      os << "eigenvector matrix too ill-conditioned for the eigen path (cond = " << cond << ")";
      throw NumericalError(os.str());
    }
  }

  CMatrix result = m.exp();
  if (!result.allFinite()) throw NumericalError("matrix exponential overflowed");
  return result;
}

double hausdorff_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) {
    return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
  const auto directed = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const Complex& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const Complex& y : to) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best_j = b.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        best_j = j;
      }
    }
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

LeastSquares least_squares(const RMatrix& design, const RVector& y) {
  if (design.rows() != y.size()) throw DomainError("least_squares: row count mismatch");
  if (design.rows() < design.cols()) throw NumericalError("least_squares: fewer samples than unknowns");
  Eigen::ColPivHouseholderQR<RMatrix> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < design.cols()) throw NumericalError("least_squares: rank-deficient design matrix");
  LeastSquares out;
  out.coefficients = qr.solve(y);
  const RVector resid = y - design * out.coefficients;
  out.residual_rms = std::sqrt(resid.squaredNorm() / static_cast<double>(y.size()));
  const double mean = y.mean();
  const double ss_tot = (y.array() - mean).square().sum();
  out.r_squared = ss_tot > 0.0 ? 1.0 - resid.squaredNorm() / ss_tot : 1.0;
  return out;
}

}  // namespace lindchain
