#include "lindchain/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "lindchain/entanglement.hpp"
#include "lindchain/linalg.hpp"

namespace lindchain {

namespace {

constexpr double kCarTolerance = 1e-13;
constexpr int kMaxDenseSites = 4;

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

}  // namespace

OperatorSet two_site_operators(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("two-site problem needs gamma > 0");
  JumpOperator L;
  const double a = std::sqrt(2.0 * gamma);
  L.terms = {{0, Complex{a, 0.0}}, {1, Complex{-a, 0.0}}};
  return OperatorSet::from_parts(CMatrix::Zero(2, 2), {L});
}

TwoSiteState two_site_rho(double gamma, double t, TwoSiteInitial initial) {
  if (!(gamma > 0.0)) throw DomainError("two_site_rho: gamma must be positive");
  if (!(t >= 0.0)) throw DomainError("two_site_rho: t must be non-negative");
  TwoSiteState s;
  s.t = t;
  s.gamma = gamma;
  if (initial == TwoSiteInitial::singlet_like) {
    const double decay = std::exp(-4.0 * gamma * t);
    s.rho = CMatrix::Zero(4, 4);
    s.rho(0, 0) = -std::expm1(-4.0 * gamma * t);
    s.rho(1, 1) = 0.5 * decay;
    s.rho(2, 2) = 0.5 * decay;
    s.rho(1, 2) = -0.5 * decay;
    s.rho(2, 1) = -0.5 * decay;
    return s;
  }
  const auto sys = FockLindbladSystem::from_ops(two_site_operators(gamma));
  CMatrix rho0 = CMatrix::Zero(4, 4);
  rho0(3, 3) = 1.0;
  s.rho = lindblad_integrate(sys, rho0, {t}).front();
  return s;
}

TwoSiteMeasures two_site_entropies(const TwoSiteState& state) {
  validate_density_matrix(state.rho);
  TwoSiteMeasures m;
  m.S_AB = von_neumann_entropy(state.rho);
  m.S_A = von_neumann_entropy(reduce_to_left(state.rho, 2, 1));
  m.S_B = von_neumann_entropy(reduce_to_right(state.rho, 2, 1));
  m.mutual_information = m.S_A + m.S_B - m.S_AB;
  m.concurrence = concurrence(state.rho);
  m.eof = entanglement_of_formation(m.concurrence);
  return m;
}

double two_site_sab_closed_form(double gamma, double t) {
  const double x = 4.0 * gamma * t;
  if (x == 0.0) return 0.0;
  return std::exp(-x) * (x + (1.0 - std::exp(x)) * std::log1p(-std::exp(-x)));
}

double two_site_sab_exact(double gamma, double t) {
  const double p = std::exp(-4.0 * gamma * t);
  const double q = -std::expm1(-4.0 * gamma * t);
  double s = 0.0;
  if (p > 0.0) s -= p * std::log(p);
  if (q > 0.0) s -= q * std::log(q);
  return s;
}

FockLindbladSystem FockLindbladSystem::from_ops(const OperatorSet& ops) {
  const int n = ops.n_sites();
  if (n < 1 || n > 2 * kMaxOracleCells) {
    std::ostringstream os;
    os << "Fock-space oracle supports 1 to " << 2 * kMaxOracleCells << " sites, got " << n;
    throw DomainError(os.str());
  }
  FockLindbladSystem sys;
  sys.n_sites_ = n;
  const Eigen::Index dim = sys.dim();
  for (int i = 0; i < n; ++i) {
    CMatrix c = CMatrix::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
      if (((s >> i) & 1) == 0) continue;
      // Jordan-Wigner string over the sites to the left of i.
      const int parity = std::popcount(static_cast<unsigned long long>(s & ((Eigen::Index{1} << i) - 1)));
      c(s & ~(Eigen::Index{1} << i), s) = parity % 2 == 0 ? 1.0 : -1.0;
    }
    sys.c_.push_back(std::move(c));
  }
  if (sys.car_defect() > kCarTolerance) throw NumericalError("Jordan-Wigner operators violate CAR");

  sys.H_ = CMatrix::Zero(dim, dim);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const Complex h = ops.h()(a, b);
      if (h != 0.0) sys.H_ += h * sys.c_[a].adjoint() * sys.c_[b];
    }
  }
  sys.loss_ = CMatrix::Zero(dim, dim);
  for (const JumpOperator& jump : ops.jumps()) {
    CMatrix L = CMatrix::Zero(dim, dim);
    for (const auto& [site, coeff] : jump.terms) L += coeff * sys.c_[static_cast<std::size_t>(site)];
    sys.loss_ += L.adjoint() * L;
    sys.jumps_.push_back(std::move(L));
  }
  return sys;
}

double FockLindbladSystem::car_defect() const {
  double worst = 0.0;
  const CMatrix id = identity(dim());
  for (int i = 0; i < n_sites_; ++i) {
    for (int j = 0; j < n_sites_; ++j) {
      const CMatrix& ci = c_[i];
      const CMatrix& cj = c_[j];
      CMatrix mixed = ci * cj.adjoint() + cj.adjoint() * ci;
      if (i == j) mixed -= id;
      worst = std::max(worst, mixed.cwiseAbs().maxCoeff());
      worst = std::max(worst, (ci * cj + cj * ci).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

CMatrix FockLindbladSystem::apply(const CMatrix& rho) const {
  CMatrix out = -kI * (H_ * rho - rho * H_) - 0.5 * (loss_ * rho + rho * loss_);
  for (const CMatrix& L : jumps_) out += L * rho * L.adjoint();
  return out;
}

CMatrix FockLindbladSystem::superoperator() const {
  const CMatrix id = identity(dim());
  // vec(A X B) = (B^T kron A) vec(X)
  CMatrix S = -kI * (Eigen::kroneckerProduct(id, H_).eval() - Eigen::kroneckerProduct(H_.transpose(), id).eval());
  S -= 0.5 * Eigen::kroneckerProduct(id, loss_).eval();
  S -= 0.5 * Eigen::kroneckerProduct(loss_.transpose(), id).eval();
  for (const CMatrix& L : jumps_) S += Eigen::kroneckerProduct(L.conjugate(), L).eval();
  return S;
}

FockLindbladSystem jw_build(const ModelSpec& spec) {
  if (spec.n_cells > kMaxOracleCells) {
    std::ostringstream os;
    os << "jw_build: " << spec.n_cells << " cells exceed the oracle limit of " << kMaxOracleCells;
    throw DomainError(os.str());
  }
  return FockLindbladSystem::from_ops(build_operators(spec));
}

namespace {

void check_grid(const std::vector<double>& t_grid) {
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] >= 0.0)) throw DomainError("lindblad_integrate: times must be non-negative");
    if (i > 0 && t_grid[i] < t_grid[i - 1]) throw DomainError("lindblad_integrate: time grid must be ascending");
  }
}

std::vector<CMatrix> integrate_dense(const FockLindbladSystem& sys, const CMatrix& rho0,
                                     const std::vector<double>& t_grid) {
  const Eigen::Index dim = sys.dim();
  const CMatrix S = sys.superoperator();
  CVector vec = Eigen::Map<const CVector>(rho0.data(), dim * dim);
  std::vector<CMatrix> out;
  double now = 0.0;
  double cached_dt = -1.0;
  CMatrix step;
  for (double t : t_grid) {
    const double dt = t - now;
    if (dt > 0.0) {
      if (std::abs(dt - cached_dt) > 1e-14 * std::max(1.0, dt)) {
        step = (S * dt).exp();
        cached_dt = dt;
      }
      vec = step * vec;
      now = t;
    }
    out.emplace_back(Eigen::Map<const CMatrix>(vec.data(), dim, dim));
  }
  return out;
}

CMatrix taylor_step(const FockLindbladSystem& sys, const CMatrix& rho, double h) {
  CMatrix sum = rho;
  CMatrix term = rho;
  const double scale = std::max(1.0, rho.norm());
  for (int k = 1; k < 60; ++k) {
    term = sys.apply(term) * (h / k);
    sum += term;
    if (term.norm() < 1e-17 * scale) return sum;
  }
  throw NumericalError("Taylor series for the Lindblad action did not converge");
}

std::vector<CMatrix> integrate_taylor(const FockLindbladSystem& sys, const CMatrix& rho0,
                                      const std::vector<double>& t_grid) {
  // Spectral-norm bound on the generator, so that h * |L| <= 1 per step.
  const auto norm2 = [](const CMatrix& m) { return Eigen::JacobiSVD<CMatrix>(m).singularValues()(0); };
  double bound = 2.0 * norm2(sys.hamiltonian());
  for (const CMatrix& L : sys.jumps()) bound += 2.0 * norm2(L) * norm2(L);
  const double h_max = 1.0 / std::max(bound, 1e-12);
  std::vector<CMatrix> out;
  CMatrix rho = rho0;
  double now = 0.0;
  for (double t : t_grid) {
    while (now < t) {
      const double h = std::min(h_max, t - now);
      rho = taylor_step(sys, rho, h);
      now = h == t - now ? t : now + h;
    }
    out.push_back(rho);
  }
  return out;
}

}  // namespace

std::vector<CMatrix> lindblad_integrate(const FockLindbladSystem& sys, const CMatrix& rho0,
                                        const std::vector<double>& t_grid) {
  if (rho0.rows() != sys.dim() || rho0.cols() != sys.dim()) {
    throw DomainError("lindblad_integrate: initial state has the wrong dimension");
  }
  validate_density_matrix(rho0);
  check_grid(t_grid);
  auto out = sys.n_sites() <= kMaxDenseSites ? integrate_dense(sys, rho0, t_grid)
                                              : integrate_taylor(sys, rho0, t_grid);
  for (const CMatrix& rho : out) {
    if (!rho.allFinite()) throw NumericalError("lindblad_integrate: non-finite density matrix");
  }
  return out;
}

CMatrix correlation_from_rho(const FockLindbladSystem& sys, const CMatrix& rho) {
  const int n = sys.n_sites();
  CMatrix C(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      C(i, j) = (sys.annihilator(i).adjoint() * sys.annihilator(j) * rho).trace();
    }
  }
  return C;
}

CMatrix vacuum_state(const FockLindbladSystem& sys) {
  CMatrix rho = CMatrix::Zero(sys.dim(), sys.dim());
  rho(0, 0) = 1.0;
  return rho;
}

CMatrix slater_state(const FockLindbladSystem& sys, const CMatrix& C) {
  const int n = sys.n_sites();
  if (C.rows() != n || C.cols() != n) throw DomainError("slater_state: correlator has the wrong size");
  // C = conj(P) with P the projector onto the occupied orbitals.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(C.conjugate().eval());
  CVector psi = CVector::Zero(sys.dim());
  psi(0) = 1.0;
  for (int k = 0; k < n; ++k) {
    const double occ = es.eigenvalues()(k);
    if (std::abs(occ) < 1e-8) continue;
    if (std::abs(occ - 1.0) > 1e-8) throw DomainError("slater_state: correlator is not a projector");
    CMatrix create = CMatrix::Zero(sys.dim(), sys.dim());
    for (int i = 0; i < n; ++i) create += es.eigenvectors()(i, k) * sys.annihilator(i).adjoint();
    psi = create * psi;
  }
  psi.normalize();
  return psi * psi.adjoint();
}

double particle_number(const FockLindbladSystem& sys, const CMatrix& rho) {
  double n = 0.0;
  for (Eigen::Index s = 0; s < sys.dim(); ++s) {
    n += std::popcount(static_cast<unsigned long long>(s)) * rho(s, s).real();
  }
  return n;
}

std::vector<Complex> superoperator_spectrum(const FockLindbladSystem& sys) {
  if (sys.n_sites() > 2 * kMaxSpectrumCells) {
    std::ostringstream os;
    os << "superoperator_spectrum: at most " << kMaxSpectrumCells << " cells";
    throw DomainError(os.str());
  }
  return spectrum_numeric(sys.superoperator());
}

}  // namespace lindchain
