#pragma once

// Exact evolution of the two-point correlator C_ij = Tr[c_i^dag c_j rho]:
//
//   C(t) = E C(0) E^dag,   E = exp(i D t).
//
// Real-space dense propagation works for any boundary; periodic chains also
// have a momentum-block path (BlochState) that is O(N) per time.

#include <optional>
#include <vector>

#include "lindchain/model.hpp"
#include "lindchain/types.hpp"

namespace lindchain {

struct CorrelationState {
  CMatrix C;
  double time = 0.0;

  int n_sites() const { return static_cast<int>(C.rows()); }
};

enum class FillingRule { half_filling_real_band, all_filled, custom_projector };

/// Modes with |Re eps| below this are treated as sitting at the Fermi level.
inline constexpr double kFermiLevelTolerance = 1e-9;

/// Indices of the `count` modes to occupy: Re eps < 0 first, then zero modes
/// (|Re eps| <= kFermiLevelTolerance) by ascending Im eps. Throws DomainError
/// "ambiguous Fermi level" if the count cannot be met or would split a
/// degenerate zero-mode pair.
std::vector<int> select_filled_modes(const std::vector<Complex>& eigenvalues, int count);

/// Builds C(0). `custom` is required for custom_projector and must be
/// Hermitian with eigenvalues in [0, 1].
CorrelationState prepare_initial_state(const OperatorSet& ops, FillingRule rule,
                                       const std::optional<CMatrix>& custom = std::nullopt);

/// Caches an eigendecomposition of iD when it is well conditioned, so that
/// E(t) = V exp(i lambda t) V^-1 is cheap on dense time grids; otherwise
/// falls back to a Padé exponential per call.
class Propagator {
 public:
  explicit Propagator(const OperatorSet& ops);

  CMatrix operator()(double t) const;
  CorrelationState evolve(const CorrelationState& state, double t) const;
  bool uses_eigenbasis() const { return use_eigen_; }

 private:
  CMatrix iD_;
  bool use_eigen_ = false;
  CVector values_;
  CMatrix vectors_;
  CMatrix inverse_;
};

/// C(t) for a single target time measured from state.time.
CorrelationState propagate(const CorrelationState& state, const OperatorSet& ops, double t);

/// n_x = Re C_xx.
std::vector<double> density_real(const CorrelationState& state);

/// Translation-invariant state of a periodic chain as 2x2 blocks
/// G_k = sum_d C[cell 0, cell d] e^{ikd}; real space C[n, m] = (1/N) sum_k e^{-ik(m-n)} G_k.
struct BlochState {
  ModelSpec spec;
  std::vector<double> momenta;
  std::vector<Eigen::Matrix2cd> blocks;
  double time = 0.0;
};

BlochState bloch_initial_state(const ModelSpec& spec, FillingRule rule);
BlochState bloch_from_real(const ModelSpec& spec, const CorrelationState& state);
BlochState propagate(const BlochState& state, double t);
CorrelationState to_real_space(const BlochState& state);
/// Leading l x l block of the real-space correlator, without forming C.
CMatrix bloch_reduced_block(const BlochState& state, int l);

struct MomentumOccupation {
  double k = 0.0;
  double total = 0.0;       // sublattice trace <c_kA^dag c_kA> + <c_kB^dag c_kB>
  double band_upper = 0.0;  // projection on the right eigenvector with larger Re eps
  double band_lower = 0.0;
  bool near_exceptional = false;  // band projection unreliable; use `total`
};

/// Physical momentum occupations n_k (c_k = N^-1/2 sum_n e^{-ikn} c_n).
/// Periodic boundary only.
std::vector<MomentumOccupation> density_momentum(const CorrelationState& state,
                                                 const ModelSpec& spec);
std::vector<MomentumOccupation> density_momentum(const BlochState& state);

/// A = sum_{0 < k < pi} (n_k - n_{-k}).
double momentum_asymmetry(const std::vector<MomentumOccupation>& occupations);

enum class Mover { left_mover, right_mover, stationary };

struct GroupVelocity {
  double k = 0.0;
  double velocity = 0.0;
  Mover mover = Mover::stationary;
};

/// Sign of d Re(eps_+)/dk by central differences on the k_points PBC grid.
std::vector<GroupVelocity> group_velocity_partition(const DerivedParams& p, int k_points);

}  // namespace lindchain
