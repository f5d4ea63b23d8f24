#pragma once

// Bloch dispersion, numeric spectra, phase classification, Liouvillian gap,
// rapidities and the many-body Liouvillian spectrum built from them.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lindchain/model.hpp"
#include "lindchain/types.hpp"

namespace lindchain {

enum class PhaseClass { hermitian, line_gapped, point_gapped, exceptional, single_band };

std::string to_string(PhaseClass c);

/// Momenta allowed by periodic boundary conditions on n_cells cells,
/// k = 2 pi m / n_cells folded into (-pi, pi], in ascending order.
std::vector<double> momentum_grid(int n_cells);

/// Bloch eigenvalues (eps_+, eps_-) of h_eff(k):
/// eps_+- = +-sqrt(-(t1 + t2' e^{ik})(t2 e^{-ik} - t1')) + i mu, principal sqrt.
std::pair<Complex, Complex> dispersion_pbc(const DerivedParams& p, double k);

/// 2x2 Bloch blocks X(k) = sum_d X[cell 0, cell d] e^{ikd} of the periodic
/// operators. bloch_damping(k) = conj(bloch_h_eff(-k)).
Eigen::Matrix2cd bloch_hopping(const ModelSpec& spec, double k);
Eigen::Matrix2cd bloch_dissipation(const ModelSpec& spec, double k);
Eigen::Matrix2cd bloch_h_eff(const ModelSpec& spec, double k);
Eigen::Matrix2cd bloch_damping(const ModelSpec& spec, double k);

inline constexpr int kPhaseGridPoints = 2048;

PhaseClass classify_phase(double lambda, double eta, int k_points = kPhaseGridPoints);

struct GapReport {
  double slow = 0.0;  // -max Im eps: slowest single-particle decay, governs long times
  double fast = 0.0;  // -min Im eps
};

/// Gap from an explicit single-particle spectrum. Throws on empty input.
GapReport liouvillian_gap(const std::vector<Complex>& eigenvalues);

/// Gap from the analytic dispersion sampled on k_points PBC momenta.
GapReport dispersion_gap(const DerivedParams& p, int k_points);

/// lambda_nu = -i lambda_D, elementwise.
std::vector<Complex> rapidities(const std::vector<Complex>& damping_eigenvalues);

struct SpectrumReport {
  std::vector<Complex> eigenvalues;  // of h_eff
  PhaseClass phase_class = PhaseClass::hermitian;
  GapReport gap;
  std::vector<Complex> rapidities;
};

/// Numeric spectrum of h_eff for any lambda in (0, 1); rapidities from D.
SpectrumReport analyze_spectrum(const ModelSpec& spec);

/// How Liouvillian eigenvalues are assembled from rapidities.
///   independent_subsets: -sum_{S'} lambda_j - sum_{S} conj(lambda_j), S and S'
///     arbitrary subsets (ket and bra excitations).
///   conjugate_pairs: S = S', i.e. -2 sum_S Re lambda_j.
enum class ManyBodyRule { independent_subsets, conjugate_pairs };

inline constexpr std::size_t kMaxUnboundedModes = 16;
inline constexpr std::size_t kMaxManyBodyCandidates = std::size_t{1} << 24;

/// Candidate many-body Liouvillian spectrum. With `max_excitations`, only
/// |S| + |S'| <= max_excitations is generated. Refuses more than 16 modes
/// without a bound, or any request producing more than 2^24 candidates.
/// `dedup_tol` > 0 merges candidates closer than the tolerance.
std::vector<Complex> many_body_spectrum(const std::vector<Complex>& rapidities,
                                        std::optional<int> max_excitations = std::nullopt,
                                        ManyBodyRule rule = ManyBodyRule::independent_subsets,
                                        double dedup_tol = 1e-10);

}  // namespace lindchain
