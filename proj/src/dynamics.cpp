#include "lindchain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "lindchain/linalg.hpp"
#include "lindchain/spectral.hpp"

namespace lindchain {

namespace {

constexpr double kEigenbasisConditionLimit = 1e8;
constexpr double kBandConditionLimit = 1e6;

void require_periodic(const ModelSpec& spec, const char* what) {
  if (spec.boundary != Boundary::periodic) {
    throw DomainError(std::string(what) + ": momentum is only defined for a periodic chain");
  }
}

// Index of -k on a grid produced by momentum_grid (k = pi maps onto itself).
std::vector<std::size_t> reflection_index(const std::vector<double>& ks) {
  std::vector<std::size_t> out(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double target = ks[i] == std::numbers::pi ? std::numbers::pi : -ks[i];
    const auto it = std::lower_bound(ks.begin(), ks.end(), target);
    if (it == ks.end() || *it != target) throw NumericalError("momentum grid is not reflection symmetric");
    out[i] = static_cast<std::size_t>(it - ks.begin());
  }
  return out;
}

void validate_correlator(const CMatrix& C, const char* what) {
  if (C.rows() != C.cols()) throw DomainError(std::string(what) + ": correlator must be square");
  if ((C - C.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw DomainError(std::string(what) + ": correlator is not Hermitian");
  }
  const RVector nu = hermitian_eigenvalues(C);
  if (nu.size() > 0 && (nu.minCoeff() < -1e-10 || nu.maxCoeff() > 1.0 + 1e-10)) {
    std::ostringstream os;
    os << what << ": correlator eigenvalues leave [0, 1] (min " << nu.minCoeff() << ", max "
       << nu.maxCoeff() << ")";
    throw DomainError(os.str());
  }
}

}  // namespace

std::vector<int> select_filled_modes(const std::vector<Complex>& eigenvalues, int count) {
  std::vector<int> negative;
  std::vector<int> zero;
  for (int i = 0; i < static_cast<int>(eigenvalues.size()); ++i) {
    const double re = eigenvalues[static_cast<std::size_t>(i)].real();
    if (re < -kFermiLevelTolerance) {
      negative.push_back(i);
    } else if (re <= kFermiLevelTolerance) {
      zero.push_back(i);
    }
  }
  const auto n_neg = static_cast<int>(negative.size());
  const auto n_zero = static_cast<int>(zero.size());
  if (n_neg > count || n_neg + n_zero < count) {
    std::ostringstream os;
    os << "ambiguous Fermi level: " << n_neg << " modes below and " << n_zero
       << " at zero real energy, " << count << " requested";
    throw DomainError(os.str());
  }
  std::sort(zero.begin(), zero.end(), [&](int a, int b) {
    return eigenvalues[static_cast<std::size_t>(a)].imag() <
           eigenvalues[static_cast<std::size_t>(b)].imag();
  });
  const int needed = count - n_neg;
  if (needed > 0 && needed < n_zero) {
    const double last = eigenvalues[static_cast<std::size_t>(zero[needed - 1])].imag();
    const double next = eigenvalues[static_cast<std::size_t>(zero[needed])].imag();
    if (std::abs(next - last) <= kFermiLevelTolerance) {
      throw DomainError("ambiguous Fermi level: degenerate zero modes would be split");
    }
  }
  negative.insert(negative.end(), zero.begin(), zero.begin() + needed);
  return negative;
}

CorrelationState prepare_initial_state(const OperatorSet& ops, FillingRule rule,
                                       const std::optional<CMatrix>& custom) {
  const int n = ops.n_sites();
  switch (rule) {
    case FillingRule::all_filled:
      return {CMatrix::Identity(n, n), 0.0};

    case FillingRule::custom_projector: {
      if (!custom) throw DomainError("custom_projector requires a correlator");
      if (custom->rows() != n) throw DomainError("custom correlator has the wrong dimension");
      validate_correlator(*custom, "custom_projector");
      return {*custom, 0.0};
    }

    case FillingRule::half_filling_real_band: {
      if (n % 2 != 0) throw DomainError("half filling needs an even number of sites");
      const Eigensystem es = eigensystem(ops.h_eff());
      const std::vector<Complex> eps(es.values.data(), es.values.data() + es.values.size());
      const std::vector<int> filled = select_filled_modes(eps, n / 2);
      CMatrix span(n, static_cast<Eigen::Index>(filled.size()));
      for (std::size_t j = 0; j < filled.size(); ++j) {
        span.col(static_cast<Eigen::Index>(j)) = es.vectors.col(filled[j]);
      }
      Eigen::ColPivHouseholderQR<CMatrix> qr(span);
      if (qr.rank() < span.cols()) {
        throw NumericalError("filled right eigenvectors are linearly dependent (exceptional point)");
      }
      Eigen::HouseholderQR<CMatrix> thin(span);
      const CMatrix Q = thin.householderQ() * CMatrix::Identity(n, span.cols());
      // <c_i^dag c_j> of the Slater determinant over span{Q} is conj(Q Q^dag).
      return {(Q * Q.adjoint()).conjugate(), 0.0};
    }
  }
  throw DomainError("unknown filling rule");
}

Propagator::Propagator(const OperatorSet& ops) : iD_(kI * ops.D()) {
  if (iD_.rows() == 0) return;
  const Eigensystem es = eigensystem(iD_);
  if (condition_number(es.vectors) < kEigenbasisConditionLimit) {
    use_eigen_ = true;
    values_ = es.values;
    vectors_ = es.vectors;
    inverse_ = es.vectors.partialPivLu().inverse();
  }
}

CMatrix Propagator::operator()(double t) const {
  if (t < 0.0) throw DomainError("propagation time must be non-negative");
  if (use_eigen_) {
    const CVector phase = (values_ * t).array().exp();
    CMatrix E = vectors_ * phase.asDiagonal() * inverse_;
    if (!E.allFinite()) throw NumericalError("propagator overflowed");
    return E;
  }
  return matrix_exponential(iD_ * t, ExpMethod::pade);
}

CorrelationState Propagator::evolve(const CorrelationState& state, double t) const {
  if (state.C.rows() != iD_.rows()) throw DomainError("state and operators differ in size");
  const CMatrix E = (*this)(t);
  return {E * state.C * E.adjoint(), state.time + t};
}

CorrelationState propagate(const CorrelationState& state, const OperatorSet& ops, double t) {
  if (t < 0.0) throw DomainError("propagation time must be non-negative");
  if (t == 0.0) return state;
  const CMatrix E = matrix_exponential(kI * ops.D() * t, ExpMethod::pade);
  if (state.C.rows() != E.rows()) throw DomainError("state and operators differ in size");
  return {E * state.C * E.adjoint(), state.time + t};
}

std::vector<double> density_real(const CorrelationState& state) {
  std::vector<double> n(static_cast<std::size_t>(state.n_sites()));
  for (int x = 0; x < state.n_sites(); ++x) n[static_cast<std::size_t>(x)] = state.C(x, x).real();
  return n;
}

BlochState bloch_initial_state(const ModelSpec& spec, FillingRule rule) {
  spec.validate_dissipative();
  require_periodic(spec, "bloch_initial_state");
  BlochState s;
  s.spec = spec;
  s.momenta = momentum_grid(spec.n_cells);
  const std::size_t nk = s.momenta.size();
  if (rule == FillingRule::all_filled) {
    s.blocks.assign(nk, Eigen::Matrix2cd::Identity());
    return s;
  }
  if (rule != FillingRule::half_filling_real_band) {
    throw DomainError("bloch_initial_state supports half_filling_real_band and all_filled");
  }

  std::vector<Eigen::Matrix2cd> vectors(nk);
  std::vector<Complex> eps;
  eps.reserve(2 * nk);
  for (std::size_t i = 0; i < nk; ++i) {
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(bloch_h_eff(spec, s.momenta[i]));
    vectors[i] = es.eigenvectors();
    eps.push_back(es.eigenvalues()(0));
    eps.push_back(es.eigenvalues()(1));
  }
  const std::vector<int> filled = select_filled_modes(eps, spec.n_cells);
  std::vector<std::vector<int>> per_k(nk);
  for (int mode : filled) per_k[static_cast<std::size_t>(mode / 2)].push_back(mode % 2);

  std::vector<Eigen::Matrix2cd> projector(nk, Eigen::Matrix2cd::Zero());
  for (std::size_t i = 0; i < nk; ++i) {
    if (per_k[i].size() == 2) {
      projector[i].setIdentity();
    } else if (per_k[i].size() == 1) {
      const Eigen::Vector2cd u = vectors[i].col(per_k[i][0]).normalized();
      projector[i] = u * u.adjoint();
    }
  }
  const auto reflect = reflection_index(s.momenta);
  s.blocks.resize(nk);
  for (std::size_t i = 0; i < nk; ++i) s.blocks[i] = projector[reflect[i]].conjugate();
  return s;
}

BlochState bloch_from_real(const ModelSpec& spec, const CorrelationState& state) {
  require_periodic(spec, "bloch_from_real");
  const int N = spec.n_cells;
  if (state.n_sites() != 2 * N) throw DomainError("bloch_from_real: size mismatch");
  std::vector<Eigen::Matrix2cd> avg(static_cast<std::size_t>(N), Eigen::Matrix2cd::Zero());
  for (int d = 0; d < N; ++d) {
    for (int n = 0; n < N; ++n) {
      avg[static_cast<std::size_t>(d)] += state.C.block<2, 2>(2 * n, 2 * ((n + d) % N));
    }
    avg[static_cast<std::size_t>(d)] /= static_cast<double>(N);
  }
  BlochState s;
  s.spec = spec;
  s.momenta = momentum_grid(N);
  s.time = state.time;
  for (double k : s.momenta) {
    Eigen::Matrix2cd G = Eigen::Matrix2cd::Zero();
    for (int d = 0; d < N; ++d) G += avg[static_cast<std::size_t>(d)] * std::polar(1.0, k * d);
    s.blocks.push_back(G);
  }
  return s;
}

BlochState propagate(const BlochState& state, double t) {
  if (t < 0.0) throw DomainError("propagation time must be non-negative");
  BlochState out = state;
  out.time = state.time + t;
  for (std::size_t i = 0; i < state.momenta.size(); ++i) {
    const Eigen::Matrix2cd gen = kI * bloch_damping(state.spec, state.momenta[i]) * t;
    const Eigen::Matrix2cd E = gen.exp();
    out.blocks[i] = E * state.blocks[i] * E.adjoint();
  }
  return out;
}

namespace {

// c(d) = (1/N) sum_k e^{-ikd} G_k for the requested offsets.
std::vector<Eigen::Matrix2cd> real_space_offsets(const BlochState& state, int d_min, int d_max) {
  const double N = static_cast<double>(state.momenta.size());
  std::vector<Eigen::Matrix2cd> out;
  out.reserve(static_cast<std::size_t>(d_max - d_min + 1));
  for (int d = d_min; d <= d_max; ++d) {
    Eigen::Matrix2cd c = Eigen::Matrix2cd::Zero();
    for (std::size_t i = 0; i < state.momenta.size(); ++i) {
      c += state.blocks[i] * std::polar(1.0, -state.momenta[i] * d);
    }
    out.push_back(c / N);
  }
  return out;
}

}  // namespace

CorrelationState to_real_space(const BlochState& state) {
  const int N = static_cast<int>(state.momenta.size());
  const auto c = real_space_offsets(state, 0, N - 1);
  CMatrix C(2 * N, 2 * N);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < N; ++m) {
      C.block<2, 2>(2 * n, 2 * m) = c[static_cast<std::size_t>(((m - n) % N + N) % N)];
    }
  }
  return {C, state.time};
}

CMatrix bloch_reduced_block(const BlochState& state, int l) {
  const int n_sites = 2 * static_cast<int>(state.momenta.size());
  if (l < 1 || l >= n_sites) throw DomainError("reduced block length out of range");
  const int cells = (l + 1) / 2;
  const auto c = real_space_offsets(state, -(cells - 1), cells - 1);
  CMatrix C(2 * cells, 2 * cells);
  for (int n = 0; n < cells; ++n) {
    for (int m = 0; m < cells; ++m) {
      C.block<2, 2>(2 * n, 2 * m) = c[static_cast<std::size_t>(m - n + cells - 1)];
    }
  }
  return C.topLeftCorner(l, l);
}

std::vector<MomentumOccupation> density_momentum(const BlochState& state) {
  require_periodic(state.spec, "density_momentum");
  const auto reflect = reflection_index(state.momenta);
  std::vector<MomentumOccupation> out;
  out.reserve(state.momenta.size());
  for (std::size_t i = 0; i < state.momenta.size(); ++i) {
    MomentumOccupation occ;
    occ.k = state.momenta[i];
    // <c_{k s}^dag c_{k s'}> is the block stored at -k.
    const Eigen::Matrix2cd M = state.blocks[reflect[i]];
    occ.total = M.trace().real();

    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(bloch_h_eff(state.spec, occ.k));
    Eigen::Matrix2cd V = es.eigenvectors();
    V.col(0).normalize();
    V.col(1).normalize();
    const int upper = es.eigenvalues()(0).real() >= es.eigenvalues()(1).real() ? 0 : 1;
    const auto project = [&](int b) {
      const Eigen::Vector2cd r = V.col(b);
      return (r.transpose() * M * r.conjugate())(0, 0).real();
    };
    occ.band_upper = project(upper);
    occ.band_lower = project(1 - upper);
    occ.near_exceptional = condition_number(V) > kBandConditionLimit;
    out.push_back(occ);
  }
  return out;
}

std::vector<MomentumOccupation> density_momentum(const CorrelationState& state,
                                                 const ModelSpec& spec) {
  require_periodic(spec, "density_momentum");
  return density_momentum(bloch_from_real(spec, state));
}

double momentum_asymmetry(const std::vector<MomentumOccupation>& occupations) {
  std::vector<double> ks;
  ks.reserve(occupations.size());
  for (const auto& o : occupations) ks.push_back(o.k);
  const auto reflect = reflection_index(ks);
  double a = 0.0;
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    if (ks[i] > 0.0 && ks[i] < std::numbers::pi) a += occupations[i].total - occupations[reflect[i]].total;
  }
  return a;
}

std::vector<GroupVelocity> group_velocity_partition(const DerivedParams& p, int k_points) {
  const double dk = 2.0 * std::numbers::pi / k_points;
  std::vector<GroupVelocity> out;
  for (double k : momentum_grid(k_points)) {
    const double v = (dispersion_pbc(p, k + dk).first.real() -
                      dispersion_pbc(p, k - dk).first.real()) / (2.0 * dk);
    Mover m = Mover::stationary;
    if (std::abs(v) >= 1e-10) m = v < 0.0 ? Mover::left_mover : Mover::right_mover;
    out.push_back({k, v, m});
  }
  return out;
}

}  // namespace lindchain
