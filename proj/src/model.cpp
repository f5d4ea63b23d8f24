#include "lindchain/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lindchain {

namespace {

void require_open_unit(const char* name, double x) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream os;
    os << name << " must lie in (0, 1), got " << x;
    throw DomainError(os.str());
  }
}

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "open";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic" || s == "pbc") return Boundary::periodic;
  if (s == "open" || s == "obc") return Boundary::open;
  throw DomainError("unknown boundary '" + s + "' (expected periodic|open)");
}

void ModelSpec::validate() const {
  if (n_cells < 1) throw DomainError("n_cells must be positive");
  require_open_unit("lambda", lambda);
  require_open_unit("eta", eta);
}

void ModelSpec::validate_dissipative() const {
  validate();
  if (lambda > 0.5) {
    throw DomainError("negative loss rates: dissipative evolution requires lambda <= 1/2");
  }
}

DerivedParams derive_params(double lambda, double eta) {
  require_open_unit("lambda", lambda);
  require_open_unit("eta", eta);
  DerivedParams p;
  p.lambda = lambda;
  p.eta = eta;
  p.w = 1.0 - eta;
  p.v = eta;
  p.gamma_A = (1.0 - 2.0 * lambda) * (1.0 - eta);
  p.gamma_B = (1.0 - 2.0 * lambda) * eta;
  p.gamma = p.gamma_A + p.gamma_B;
  p.t1 = (1.0 - eta) * (1.0 - lambda);
  p.t2 = eta * (1.0 - lambda);
  p.t1p = lambda * (1.0 - eta);
  p.t2p = -lambda * eta;
  p.mu = (2.0 * lambda - 1.0) / 2.0;
  return p;
}

CVector JumpOperator::dense(int n_sites) const {
  CVector l = CVector::Zero(n_sites);
  for (const auto& [site, c] : terms) l(site) += c;
  return l;
}

OperatorSet OperatorSet::from_parts(CMatrix h, std::vector<JumpOperator> jumps) {
  if (h.rows() != h.cols()) throw DomainError("hopping matrix must be square");
  const int n = static_cast<int>(h.rows());
  OperatorSet ops;
  ops.K_ = CMatrix::Zero(n, n);
  for (const auto& jump : jumps) {
    for (const auto& [m, lm] : jump.terms) {
      if (m < 0 || m >= n) throw DomainError("jump operator references a site outside the chain");
      for (const auto& [k, lk] : jump.terms) ops.K_(m, k) += std::conj(lm) * lk;
    }
  }
  ops.h_ = std::move(h);
  ops.h_eff_ = ops.h_ - 0.5 * kI * ops.K_;
  ops.D_ = ops.h_.transpose() + 0.5 * kI * ops.K_.transpose();
  ops.jumps_ = std::move(jumps);
  return ops;
}

OperatorSet OperatorSet::with_h_eff(CMatrix h_eff) const {
  OperatorSet copy = *this;
  copy.h_eff_ = std::move(h_eff);
  return copy;
}

CMatrix hopping_matrix(const ModelSpec& spec) {
  spec.validate();
  if (spec.boundary == Boundary::periodic && spec.n_cells < 2) {
    throw DomainError("periodic boundary needs at least 2 cells");
  }
  const DerivedParams p = derive_params(spec.lambda, spec.eta);
  const int N = spec.n_cells;
  const int n = spec.n_sites();
  CMatrix h = CMatrix::Zero(n, n);
  for (int cell = 0; cell < N; ++cell) {
    const int a = site_index(cell, 0);
    const int b = site_index(cell, 1);
    h(b, a) += kI * (p.w / 2.0);
    h(a, b) -= kI * (p.w / 2.0);
    if (cell + 1 < N || spec.boundary == Boundary::periodic) {
      const int a_next = site_index((cell + 1) % N, 0);
      h(a_next, b) += kI * (p.v / 2.0);
      h(b, a_next) -= kI * (p.v / 2.0);
    }
  }
  return h;
}

namespace {

struct Bond {
  int first;
  int second;
  bool intercell;
};

// Bonds carrying a jump: every intracell bond, and every intercell bond that
// survives the boundary condition.
std::vector<Bond> jump_bonds(const ModelSpec& spec) {
  const int N = spec.n_cells;
  std::vector<Bond> bonds;
  for (int cell = 0; cell < N; ++cell) bonds.push_back({site_index(cell, 0), site_index(cell, 1), false});
  for (int cell = 0; cell < N; ++cell) {
    if (cell + 1 == N && spec.boundary == Boundary::open) break;
    bonds.push_back({site_index(cell, 1), site_index((cell + 1) % N, 0), true});
  }
  return bonds;
}

double partner_sign(const ModelSpec& spec) {
  return spec.orientation == JumpOrientation::standard ? -1.0 : 1.0;
}

}  // namespace

std::vector<JumpOperator> jump_operators(const ModelSpec& spec) {
  spec.validate_dissipative();
  const DerivedParams p = derive_params(spec.lambda, spec.eta);
  const double s = partner_sign(spec);
  std::vector<JumpOperator> jumps;
  for (const Bond& bond : jump_bonds(spec)) {
    const double rate = bond.intercell ? p.gamma_B : p.gamma_A;
    if (rate == 0.0) continue;
    const double amp = std::sqrt(rate);
    jumps.push_back({{{bond.first, amp}, {bond.second, s * amp}}});
  }
  return jumps;
}

OperatorSet build_operators(const ModelSpec& spec) {
  spec.validate_dissipative();
  CMatrix h = hopping_matrix(spec);
  return OperatorSet::from_parts(std::move(h), jump_operators(spec));
}

CMatrix effective_hamiltonian(const ModelSpec& spec) {
  CMatrix h = hopping_matrix(spec);
  const DerivedParams p = derive_params(spec.lambda, spec.eta);
  const double s = partner_sign(spec);
  CMatrix K = CMatrix::Zero(spec.n_sites(), spec.n_sites());
  for (const Bond& bond : jump_bonds(spec)) {
    const double rate = bond.intercell ? p.gamma_B : p.gamma_A;
    K(bond.first, bond.first) += rate;
    K(bond.second, bond.second) += rate;
    K(bond.first, bond.second) += s * rate;
    K(bond.second, bond.first) += s * rate;
  }
  return h - 0.5 * kI * K;
}

double ConsistencyReport::max_defect() const {
  return std::max({anti_hermitian_defect, h_eff_defect, h_hermiticity_defect, k_hermiticity_defect,
                   std::max(0.0, -k_min_eigenvalue), damping_defect});
}

bool ConsistencyReport::pass(double tol) const { return max_defect() <= tol; }

ConsistencyReport consistency_check(const OperatorSet& ops) {
  ConsistencyReport r;
  const CMatrix& h = ops.h();
  const CMatrix& K = ops.K();
  const CMatrix& he = ops.h_eff();
  r.anti_hermitian_defect = max_abs(0.5 * (he - he.adjoint()) + 0.5 * kI * K);
  r.h_eff_defect = max_abs(he - h + 0.5 * kI * K);
  r.h_hermiticity_defect = max_abs(h - h.adjoint());
  r.k_hermiticity_defect = max_abs(K - K.adjoint());
  if (K.size() > 0) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (K + K.adjoint()), Eigen::EigenvaluesOnly);
    r.k_min_eigenvalue = es.eigenvalues().minCoeff();
  }
  r.damping_defect = max_abs(ops.D() - h.transpose() - 0.5 * kI * K.transpose());
  return r;
}

}  // namespace lindchain
