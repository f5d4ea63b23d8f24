#pragma once

// Entropies of contiguous left blocks from the reduced correlator, two-qubit
// entanglement measures, and the spatial / temporal scaling fits.

#include <optional>
#include <vector>

#include "lindchain/dynamics.hpp"
#include "lindchain/types.hpp"

namespace lindchain {

struct EntropyRecord {
  double t = 0.0;
  int l = 0;
  double S = 0.0;
  std::optional<double> z_ratio;
};

/// Leading l x l block of C (sites [0, l)). Requires 1 <= l < n_sites.
CMatrix reduced_block(const CorrelationState& state, int l);

/// Eigenvalues nu of a reduced block, ascending.
RVector block_spectrum(const CMatrix& block);

/// S = -sum [nu ln nu + (1 - nu) ln(1 - nu)], with 0 ln 0 = 0. Throws
/// DomainError if some nu lies outside [-1e-6, 1 + 1e-6].
double gaussian_entropy(const RVector& nu);

/// gaussian_entropy(block_spectrum(reduced_block(state, l))).
double block_entropy(const CorrelationState& state, int l);

/// Alternative closed form in terms of the time-t and t = 0 block
/// eigenvalues (paired in ascending order) and the trace ratio z = Z_t/Z_0:
///
///   S = -sum_s [c_t ln c_t - c_t ln(z - c_t) + z ln(1 - c_0)].
///
/// Reduces to gaussian_entropy for z = 1 and c_t = c_0. A logarithm of a
/// nonpositive argument with nonzero prefactor throws DomainError naming s.
double entropy_trace_ratio_variant(const RVector& c_t, const RVector& c_0, double z_ratio);

// ---- density matrices ---------------------------------------------------

/// Throws DomainError unless rho is square, Hermitian, unit trace and PSD
/// within `tol`.
void validate_density_matrix(const CMatrix& rho, double tol = 1e-10);

/// -Tr rho ln rho (natural log).
double von_neumann_entropy(const CMatrix& rho);

/// Traces out everything but the lowest `keep_qubits` bits of the basis index
/// (basis index = sum_i n_i 2^i). For Jordan-Wigner states this is the
/// fermionic reduced density matrix of the leftmost sites.
CMatrix reduce_to_left(const CMatrix& rho, int total_qubits, int keep_qubits);

/// Traces out the lowest `drop_qubits` bits, keeping the rest.
CMatrix reduce_to_right(const CMatrix& rho, int total_qubits, int drop_qubits);

/// Wootters concurrence of a two-qubit state.
double concurrence(const CMatrix& rho);

/// h((1 + sqrt(1 - c^2)) / 2) with the binary entropy h in bits. c is clamped
/// to [0, 1].
double entanglement_of_formation(double c);

/// S_A + S_B - S_AB for a two-qubit state.
double mutual_information(const CMatrix& rho);

// ---- fits ----------------------------------------------------------------

inline constexpr int kSpatialFitMinL = 4;
inline constexpr int kSpatialFitMinPoints = 10;

struct SpatialFit {
  double a = 0.0;  // coefficient of ln sin(pi l / L)
  double b = 0.0;  // coefficient of l
  double c = 0.0;
  double residual_rms = 0.0;
  int points = 0;
};

/// Least squares S(l) = a ln sin(pi l/L) + b l + c over the records with
/// l in [l_min, L - l_min]. Needs at least 10 distinct l.
SpatialFit fit_spatial(const std::vector<EntropyRecord>& records, int L,
                       int l_min = kSpatialFitMinL);

enum class TemporalRegime { short_time, long_time_gapped, long_time_gapless };

struct TemporalFit {
  TemporalRegime regime = TemporalRegime::short_time;
  // short_time: S - offset = A t ln(1/t) + B t
  double A = 0.0;
  double B = 0.0;
  // long_time_gapped: ln(S/t) = -rate t + const
  double rate = 0.0;
  // long_time_gapless: ln(S / ln t) = p ln t + const
  double power = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double residual_rms = 0.0;
  int points = 0;
};

/// `offset` is subtracted from S before the short-time fit (S(0) of the
/// initial state); it is ignored by the long-time regimes.
TemporalFit fit_temporal(const std::vector<double>& t, const std::vector<double>& S,
                         TemporalRegime regime, double offset = 0.0);

}  // namespace lindchain
